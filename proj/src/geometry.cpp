#include "ggf/geometry.hpp"

#include <algorithm>
#include <limits>

namespace ggf {

double polygon_area(const Polygon& p) {
    double a = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) a += cross(p[i], p[(i + 1) % n]);
    return 0.5 * a;
}

Vec polygon_centroid(const Polygon& p) {
    // Exact first moment via the shoelace decomposition.
    const std::size_t n = p.size();
    double a = 0.0;
    Vec c{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& u = p[i];
        const Vec& v = p[(i + 1) % n];
        const double w = cross(u, v);
        a += w;
        c[0] += (u[0] + v[0]) * w;
        c[1] += (u[1] + v[1]) * w;
    }
    a *= 0.5;
    return {c[0] / (6.0 * a), c[1] / (6.0 * a)};
}

double polygon_diameter(const Polygon& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, norm(p[i] - p[j]));
    return d;
}

double polygon_inradius_about(const Polygon& p, const Vec& x) {
    double r = std::numeric_limits<double>::infinity();
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec a = p[i];
        const Vec b = p[(i + 1) % n];
        const Vec e = b - a;
        const double len = norm(e);
        if (len == 0.0) continue;
        r = std::min(r, std::abs(cross(e, x - a)) / len);
    }
    return r;
}

Polygon clip_halfplane(const Polygon& poly, const Vec& point, const Vec& n) {
    Polygon out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec& a = poly[i];
        const Vec& b = poly[(i + 1) % m];
        const double da = dot(n, a - point);
        const double db = dot(n, b - point);
        if (da <= 0.0) {
            out.push_back(a);
            if (db > 0.0) {
                const double t = da / (da - db);
                out.push_back(a + t * (b - a));
            }
        } else if (db <= 0.0) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

Polygon clip_box(const Polygon& poly, const Box& box) {
    Polygon p = poly;
    p = clip_halfplane(p, box.lo, {-1.0, 0.0});
    p = clip_halfplane(p, box.lo, {0.0, -1.0});
    p = clip_halfplane(p, box.hi, {1.0, 0.0});
    p = clip_halfplane(p, box.hi, {0.0, 1.0});
    return p;
}

double polygon_box_overlap_area(const Polygon& poly, const Box& box) {
    const Polygon p = clip_box(poly, box);
    if (p.size() < 3) return 0.0;
    return polygon_area(p);
}

bool polygon_box_touch(const Polygon& poly, const Box& box) {
    return !clip_box(poly, box).empty();
}

LabeledPolygon clip_halfplane_labeled(const LabeledPolygon& poly, const Vec& point, const Vec& n,
                                      int label) {
    LabeledPolygon out;
    const std::size_t m = poly.verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec& a = poly.verts[i];
        const Vec& b = poly.verts[(i + 1) % m];
        const int lab = poly.edge_label[i];
        const double da = dot(n, a - point);
        const double db = dot(n, b - point);
        if (da <= 0.0 && db <= 0.0) {
            out.verts.push_back(a);
            out.edge_label.push_back(lab);
        } else if (da <= 0.0 && db > 0.0) {
            // leaving: keep a, add intersection; the new edge along the clip
            // line starts here and is labeled when the entering edge closes it
            out.verts.push_back(a);
            out.edge_label.push_back(lab);
            const double t = da / (da - db);
            out.verts.push_back(a + t * (b - a));
            out.edge_label.push_back(label);
        } else if (da > 0.0 && db <= 0.0) {
            const double t = da / (da - db);
            out.verts.push_back(a + t * (b - a));
            out.edge_label.push_back(lab);
        }
    }
    return out;
}

}  // namespace ggf
