#include "ggf/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ggf {
namespace quad {

const std::vector<Node1D>& gauss01(int n) {
    // Nodes/weights on [-1,1], mapped to [0,1].
    static const std::vector<Node1D> g5 = [] {
        const double x[] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                            0.9061798459386640};
        const double w[] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                            0.4786286704993665, 0.2369268850561891};
        std::vector<Node1D> v;
        for (int i = 0; i < 5; ++i) v.push_back({0.5 * (x[i] + 1.0), 0.5 * w[i]});
        return v;
    }();
    static const std::vector<Node1D> g8 = [] {
        const double x[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
        const double w[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};
        std::vector<Node1D> v;
        for (int i = 0; i < 8; ++i) v.push_back({0.5 * (x[i] + 1.0), 0.5 * w[i]});
        return v;
    }();
    if (n == 5) return g5;
    if (n == 8) return g8;
    throw std::invalid_argument("gauss01: unsupported order");
}

const std::vector<NodeTri>& tri_degree5() {
    static const std::vector<NodeTri> rule = [] {
        std::vector<NodeTri> v;
        v.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225});
        const double a1 = 0.0597158717897698, b1 = 0.4701420641051151, w1 = 0.1323941527885062;
        const double a2 = 0.7974269853530873, b2 = 0.1012865073234563, w2 = 0.1259391805448271;
        v.push_back({a1, b1, b1, w1});
        v.push_back({b1, a1, b1, w1});
        v.push_back({b1, b1, a1, w1});
        v.push_back({a2, b2, b2, w2});
        v.push_back({b2, a2, b2, w2});
        v.push_back({b2, b2, a2, w2});
        return v;
    }();
    return rule;
}

double integrate_interval(double a, double b, const std::function<double(double)>& f) {
    double s = 0.0;
    for (const auto& n : gauss01(5)) s += n.w * f(a + n.x * (b - a));
    return s * (b - a);
}

namespace {

struct Tri {
    Vec a, b, c;
};

void subdivide(const Tri& t, int levels, std::vector<Tri>& out) {
    if (levels == 0) {
        out.push_back(t);
        return;
    }
    const Vec ab = 0.5 * (t.a + t.b);
    const Vec bc = 0.5 * (t.b + t.c);
    const Vec ca = 0.5 * (t.c + t.a);
    subdivide({t.a, ab, ca}, levels - 1, out);
    subdivide({ab, t.b, bc}, levels - 1, out);
    subdivide({ca, bc, t.c}, levels - 1, out);
    subdivide({ab, bc, ca}, levels - 1, out);
}

std::vector<Tri> triangulate(const Polygon& poly, int refine) {
    const Vec c = polygon_centroid(poly);
    std::vector<Tri> tris;
    for (std::size_t i = 0; i < poly.size(); ++i)
        subdivide({c, poly[i], poly[(i + 1) % poly.size()]}, refine, tris);
    return tris;
}

}  // namespace

std::vector<std::pair<Vec, double>> polygon_nodes(const Polygon& poly, int refine) {
    std::vector<std::pair<Vec, double>> nodes;
    for (const Tri& t : triangulate(poly, refine)) {
        const double area =
            0.5 * std::abs(cross(t.b - t.a, t.c - t.a));
        for (const auto& n : tri_degree5()) {
            const Vec x = n.b0 * t.a + n.b1 * t.b + n.b2 * t.c;
            nodes.push_back({x, n.w * area});
        }
    }
    return nodes;
}

double integrate_polygon(const Polygon& poly, const std::function<double(const Vec&)>& f,
                         int refine) {
    double s = 0.0;
    for (const auto& [x, w] : polygon_nodes(poly, refine)) s += w * f(x);
    return s;
}

std::vector<std::pair<Vec, double>> interval_nodes(double a, double b, int subdiv) {
    std::vector<std::pair<Vec, double>> nodes;
    const double dx = (b - a) / subdiv;
    for (int k = 0; k < subdiv; ++k) {
        const double lo = a + k * dx;
        for (const auto& n : gauss01(5)) nodes.push_back({Vec{lo + n.x * dx, 0.0}, n.w * dx});
    }
    return nodes;
}

}  // namespace quad
}  // namespace ggf
