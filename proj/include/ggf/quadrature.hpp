#pragma once

#include <functional>
#include <vector>

#include "ggf/geometry.hpp"

namespace ggf {
namespace quad {

struct Node1D {
    double x;  // on [0, 1]
    double w;
};

/// Gauss-Legendre nodes on [0,1]; n in {5, 8} is what the library uses.
const std::vector<Node1D>& gauss01(int n);

struct NodeTri {
    double b0, b1, b2;  // barycentric
    double w;           // sums to 1 over the rule
};

/// Degree-5 symmetric 7-point rule on the reference triangle.
const std::vector<NodeTri>& tri_degree5();

/// Integral of f over the interval [a, b] with Gauss order 5.
double integrate_interval(double a, double b, const std::function<double(double)>& f);

/// Integral of f over a convex polygon: fan triangulation about the centroid,
/// each triangle uniformly refined `refine` times, degree-5 rule per element.
double integrate_polygon(const Polygon& poly, const std::function<double(const Vec&)>& f,
                         int refine = 0);

/// Quadrature nodes (point, weight) covering a convex polygon; weights sum to
/// the polygon area.
std::vector<std::pair<Vec, double>> polygon_nodes(const Polygon& poly, int refine = 0);

std::vector<std::pair<Vec, double>> interval_nodes(double a, double b, int subdiv = 1);

}  // namespace quad
}  // namespace ggf
