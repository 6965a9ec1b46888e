#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ggf/geometry.hpp"

namespace ggf {

struct Cell {
    int id = -1;
    Polygon vertices;  // d=1: two points on the axis, d=2: CCW polygon
    double volume = 0.0;
    Vec centroid{0.0, 0.0};
    double diameter = 0.0;
};

struct Face {
    int k = -1, l = -1;      // unordered pair, stored with k < l
    double area = 0.0;       // (d-1)-measure; equals 1 in d=1
    Vec normal{0.0, 0.0};    // unit vector from K towards L
    double center_distance = 0.0;
};

/// A tessellation of a bounded convex domain, immutable after construction.
struct Tessellation {
    enum class Kind { lattice, tilted, mixed1d, voronoi };

    int dim = 2;
    Kind kind = Kind::lattice;
    Polygon domain;         // convex domain polygon (d=1: two axis points)
    double domain_volume = 0.0;
    double h = 0.0;         // mesh-size parameter: the builder pitch for the
                            // structured kinds, the max cell diameter for voronoi
    double spacing = 0.0;   // builder parameter (lattice pitch)
    double alpha = 0.0;     // tilt parameter (tilted lattice only)
    double zeta = 0.0;      // non-degeneracy estimate in (0,1)

    std::vector<Cell> cells;
    std::vector<Face> faces;
    // adjacency[k] = list of (neighbor id, face index)
    std::vector<std::vector<std::pair<int, int>>> adjacency;

    std::size_t n_cells() const { return cells.size(); }
    std::size_t n_faces() const { return faces.size(); }

    /// Index of the (unique up to ties) cell containing x; boundary ties go
    /// to the lowest id. Linear scan; fine at desk scale.
    int locate(const Vec& x) const;

    /// True if the cell closure does not touch the domain boundary.
    bool cell_is_interior(int id) const;

    std::string to_json() const;
};

Tessellation build_lattice(double h, int d, const std::vector<double>& box_lengths);
Tessellation build_tilted_lattice(double h, double alpha, int n1, int n2);
Tessellation build_1d_mixed(double h);
Tessellation build_voronoi(const std::vector<Vec>& seeds, const Box& box);

struct NondegeneracyReport {
    double zeta_ball = 0.0;
    double zeta_face = 0.0;
    int card_max = 0;
    bool pass = false;
};

NondegeneracyReport check_nondegeneracy(const Tessellation& t, double zeta_request);

struct Restriction {
    std::vector<int> cell_ids;   // T^h|_A
    std::vector<int> face_ids;   // faces with both cells in T^h|_A
    double covered_volume = 0.0; // |[A]_{T^h}|
    std::vector<char> in_region; // per-cell membership flag, size n_cells
    Box region;
};

/// Cells whose closure meets the closed box A, and the faces internal to them.
Restriction restrict(const Tessellation& t, const Box& region);

}  // namespace ggf
