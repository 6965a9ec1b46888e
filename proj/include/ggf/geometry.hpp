#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ggf {

using Vec = std::array<double, 2>;

inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1]}; }
inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double cross(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }
inline double norm(const Vec& a) { return std::hypot(a[0], a[1]); }

/// Symmetric 2x2 matrix; 1-D problems use only the (0,0) entry.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;

    Mat2& operator+=(const Mat2& o) {
        a11 += o.a11;
        a12 += o.a12;
        a22 += o.a22;
        return *this;
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }
    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }

    static Mat2 outer(const Vec& v) { return {v[0] * v[0], v[0] * v[1], v[1] * v[1]}; }

    // Eigenvalues of the symmetric matrix, ascending.
    std::array<double, 2> eigenvalues() const {
        const double tr = a11 + a22;
        const double det = a11 * a22 - a12 * a12;
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        return {tr / 2.0 - disc, tr / 2.0 + disc};
    }
    double quad(const Vec& v) const {
        return a11 * v[0] * v[0] + 2.0 * a12 * v[0] * v[1] + a22 * v[1] * v[1];
    }
    double max_abs_entry() const {
        return std::max(std::abs(a11), std::max(std::abs(a12), std::abs(a22)));
    }
};

/// Axis-aligned box; for d=1 the second coordinate is ignored.
struct Box {
    Vec lo{0.0, 0.0};
    Vec hi{0.0, 0.0};

    bool contains(const Vec& p, int dim) const {
        for (int i = 0; i < dim; ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }
    double volume(int dim) const {
        double v = 1.0;
        for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
        return v;
    }
};

// Polygons are counter-clockwise vertex lists (convex throughout this library).
using Polygon = std::vector<Vec>;

double polygon_area(const Polygon& p);
Vec polygon_centroid(const Polygon& p);
double polygon_diameter(const Polygon& p);

/// Minimum distance from an interior point to the polygon edges (the inradius
/// of the largest ball around that point).
double polygon_inradius_about(const Polygon& p, const Vec& x);

/// Keep the part of `poly` with dot(n, x - point) <= 0.
Polygon clip_halfplane(const Polygon& poly, const Vec& point, const Vec& n);

Polygon clip_box(const Polygon& poly, const Box& box);

double polygon_box_overlap_area(const Polygon& poly, const Box& box);

/// True if the closed polygon and the closed box intersect (touching counts).
bool polygon_box_touch(const Polygon& poly, const Box& box);

/// Labeled convex clipping used by the Voronoi builder: each edge
/// (vertex i -> vertex i+1) carries an integer label identifying the
/// half-plane that created it (-1 for original edges).
struct LabeledPolygon {
    Polygon verts;
    std::vector<int> edge_label;  // size == verts.size()
};

LabeledPolygon clip_halfplane_labeled(const LabeledPolygon& poly, const Vec& point, const Vec& n,
                                      int label);

}  // namespace ggf
