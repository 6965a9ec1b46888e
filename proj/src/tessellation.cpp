#include "ggf/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace ggf {

namespace {

bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) < tol * std::max(1.0, std::abs(x));
}

void finalize_cell(Cell& c, int dim) {
    if (dim == 1) {
        const double a = c.vertices[0][0], b = c.vertices[1][0];
        c.volume = b - a;
        c.centroid = {0.5 * (a + b), 0.0};
        c.diameter = b - a;
    } else {
        c.volume = polygon_area(c.vertices);
        c.centroid = polygon_centroid(c.vertices);
        c.diameter = polygon_diameter(c.vertices);
    }
}

void build_adjacency(Tessellation& t) {
    t.adjacency.assign(t.n_cells(), {});
    for (int f = 0; f < static_cast<int>(t.n_faces()); ++f) {
        t.adjacency[t.faces[f].k].push_back({t.faces[f].l, f});
        t.adjacency[t.faces[f].l].push_back({t.faces[f].k, f});
    }
}

double zeta_estimate(const Tessellation& t) {
    double zb = 1.0, zf = 1.0;
    for (const Cell& c : t.cells) {
        const double r = (t.dim == 1) ? 0.5 * c.volume
                                      : polygon_inradius_about(c.vertices, c.centroid);
        zb = std::min(zb, r / t.h);
    }
    for (const Face& f : t.faces)
        zf = std::min(zf, f.area / std::pow(t.h, t.dim - 1));
    return std::min({zb, zf, 0.999});
}

}  // namespace

int Tessellation::locate(const Vec& x) const {
    for (const Cell& c : cells) {
        if (dim == 1) {
            if (x[0] >= c.vertices[0][0] - 1e-14 && x[0] <= c.vertices[1][0] + 1e-14) return c.id;
        } else {
            bool inside = true;
            const std::size_t n = c.vertices.size();
            for (std::size_t i = 0; i < n && inside; ++i) {
                const Vec a = c.vertices[i];
                const Vec b = c.vertices[(i + 1) % n];
                if (cross(b - a, x - a) < -1e-13) inside = false;
            }
            if (inside) return c.id;
        }
    }
    return -1;
}

bool Tessellation::cell_is_interior(int id) const {
    const Cell& c = cells[id];
    if (dim == 1) {
        const double lo = domain[0][0], hi = domain[1][0];
        return c.vertices[0][0] > lo + 1e-12 && c.vertices[1][0] < hi - 1e-12;
    }
    for (const Vec& v : c.vertices) {
        const std::size_t n = domain.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec a = domain[i];
            const Vec b = domain[(i + 1) % n];
            const Vec e = b - a;
            if (std::abs(cross(e, v - a)) / norm(e) < 1e-12) return false;
        }
    }
    return true;
}

Tessellation build_lattice(double h, int d, const std::vector<double>& box_lengths) {
    if (h <= 0.0) throw std::invalid_argument("build_lattice: h must be positive");
    if (d != 1 && d != 2) throw std::invalid_argument("build_lattice: d must be 1 or 2");
    if (static_cast<int>(box_lengths.size()) != d)
        throw std::invalid_argument("build_lattice: box_lengths size must equal d");
    std::vector<int> n(d);
    for (int i = 0; i < d; ++i) {
        if (!near_integer(box_lengths[i] / h))
            throw std::invalid_argument(
                "build_lattice: box length " + std::to_string(box_lengths[i]) +
                " is not an integer multiple of h=" + std::to_string(h));
        n[i] = static_cast<int>(std::round(box_lengths[i] / h));
    }

    Tessellation t;
    t.dim = d;
    t.kind = Tessellation::Kind::lattice;
    t.h = h;
    t.spacing = h;
    if (d == 1) {
        t.domain = {{0.0, 0.0}, {box_lengths[0], 0.0}};
        t.domain_volume = box_lengths[0];
        for (int i = 0; i < n[0]; ++i) {
            Cell c;
            c.id = i;
            c.vertices = {{i * h, 0.0}, {(i + 1) * h, 0.0}};
            finalize_cell(c, 1);
            t.cells.push_back(c);
        }
        for (int i = 0; i + 1 < n[0]; ++i)
            t.faces.push_back({i, i + 1, 1.0, {1.0, 0.0}, h});
    } else {
        t.domain = {{0.0, 0.0},
                    {box_lengths[0], 0.0},
                    {box_lengths[0], box_lengths[1]},
                    {0.0, box_lengths[1]}};
        t.domain_volume = box_lengths[0] * box_lengths[1];
        auto id = [&](int ix, int iy) { return ix + n[0] * iy; };
        for (int iy = 0; iy < n[1]; ++iy)
            for (int ix = 0; ix < n[0]; ++ix) {
                Cell c;
                c.id = id(ix, iy);
                c.vertices = {{ix * h, iy * h},
                              {(ix + 1) * h, iy * h},
                              {(ix + 1) * h, (iy + 1) * h},
                              {ix * h, (iy + 1) * h}};
                finalize_cell(c, 2);
                t.cells.push_back(c);
            }
        for (int iy = 0; iy < n[1]; ++iy)
            for (int ix = 0; ix < n[0]; ++ix) {
                if (ix + 1 < n[0])
                    t.faces.push_back({id(ix, iy), id(ix + 1, iy), h, {1.0, 0.0}, h});
                if (iy + 1 < n[1])
                    t.faces.push_back({id(ix, iy), id(ix, iy + 1), h, {0.0, 1.0}, h});
            }
    }
    build_adjacency(t);
    t.zeta = zeta_estimate(t);
    return t;
}

Tessellation build_tilted_lattice(double h, double alpha, int n1, int n2) {
    if (h <= 0.0) throw std::invalid_argument("build_tilted_lattice: h must be positive");
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("build_tilted_lattice: alpha must lie in [0, 1)");
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("build_tilted_lattice: need n1, n2 >= 1");

    const Vec a{h, 0.0};
    const Vec b{h * alpha * alpha, h * (1.0 - alpha * alpha)};

    Tessellation t;
    t.dim = 2;
    t.kind = Tessellation::Kind::tilted;
    t.h = h;
    t.spacing = h;
    t.alpha = alpha;
    t.domain = {{0.0, 0.0}, static_cast<double>(n1) * a,
                static_cast<double>(n1) * a + static_cast<double>(n2) * b,
                static_cast<double>(n2) * b};
    t.domain_volume = polygon_area(t.domain);

    auto id = [&](int i, int j) { return i + n1 * j; };
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            const Vec o = static_cast<double>(i) * a + static_cast<double>(j) * b;
            Cell c;
            c.id = id(i, j);
            c.vertices = {o, o + a, o + a + b, o + b};
            finalize_cell(c, 2);
            t.cells.push_back(c);
        }

    // right faces share the edge along b, up faces the edge along a
    const Vec nr{b[1], -b[0]};
    const Vec nu{-a[1], a[0]};
    const Vec nr_unit = (1.0 / norm(nr)) * nr;
    const Vec nu_unit = (1.0 / norm(nu)) * nu;
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            if (i + 1 < n1)
                t.faces.push_back({id(i, j), id(i + 1, j), norm(b), nr_unit, norm(a)});
            if (j + 1 < n2)
                t.faces.push_back({id(i, j), id(i, j + 1), norm(a), nu_unit, norm(b)});
        }
    build_adjacency(t);
    t.zeta = zeta_estimate(t);
    return t;
}

Tessellation build_1d_mixed(double h) {
    if (h <= 0.0) throw std::invalid_argument("build_1d_mixed: h must be positive");
    if (!near_integer(1.0 / h) || !near_integer(2.0 / h))
        throw std::invalid_argument("build_1d_mixed: h must tile [-1,0] with h/2 and [0,1] with h");
    const int nl = static_cast<int>(std::round(2.0 / h));  // cells of length h/2 on [-1,0]
    const int nr = static_cast<int>(std::round(1.0 / h));  // cells of length h on [0,1]

    Tessellation t;
    t.dim = 1;
    t.kind = Tessellation::Kind::mixed1d;
    t.h = h;
    t.spacing = h;
    t.domain = {{-1.0, 0.0}, {1.0, 0.0}};
    t.domain_volume = 2.0;
    int id = 0;
    for (int i = 0; i < nl; ++i) {
        Cell c;
        c.id = id++;
        c.vertices = {{-1.0 + i * h / 2.0, 0.0}, {-1.0 + (i + 1) * h / 2.0, 0.0}};
        finalize_cell(c, 1);
        t.cells.push_back(c);
    }
    for (int i = 0; i < nr; ++i) {
        Cell c;
        c.id = id++;
        c.vertices = {{i * h, 0.0}, {(i + 1) * h, 0.0}};
        finalize_cell(c, 1);
        t.cells.push_back(c);
    }
    for (int i = 0; i + 1 < id; ++i) {
        const double d = t.cells[i + 1].centroid[0] - t.cells[i].centroid[0];
        t.faces.push_back({i, i + 1, 1.0, {1.0, 0.0}, d});
    }
    build_adjacency(t);
    t.zeta = zeta_estimate(t);
    return t;
}

Tessellation build_voronoi(const std::vector<Vec>& seeds, const Box& box) {
    const int n = static_cast<int>(seeds.size());
    if (n < 2) throw std::invalid_argument("build_voronoi: need at least two seeds");
    for (int i = 0; i < n; ++i) {
        if (!box.contains(seeds[i], 2))
            throw std::invalid_argument("build_voronoi: seed outside the box");
        for (int j = i + 1; j < n; ++j)
            if (norm(seeds[i] - seeds[j]) < 1e-12)
                throw std::invalid_argument("build_voronoi: duplicate seeds");
    }

    Tessellation t;
    t.dim = 2;
    t.kind = Tessellation::Kind::voronoi;
    t.domain = {box.lo, {box.hi[0], box.lo[1]}, box.hi, {box.lo[0], box.hi[1]}};
    t.domain_volume = box.volume(2);

    // face (i, j), i < j -> edge length measured from each side's polygon
    std::map<std::pair<int, int>, std::array<double, 2>> edge_len;
    for (int i = 0; i < n; ++i) {
        LabeledPolygon poly;
        poly.verts = t.domain;
        poly.edge_label.assign(t.domain.size(), -1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec mid = 0.5 * (seeds[i] + seeds[j]);
            const Vec nrm = seeds[j] - seeds[i];
            poly = clip_halfplane_labeled(poly, mid, nrm, j);
            if (poly.verts.size() < 3)
                throw std::invalid_argument("build_voronoi: degenerate empty cell");
        }
        Cell c;
        c.id = i;
        c.vertices = poly.verts;
        finalize_cell(c, 2);
        t.cells.push_back(c);
        for (std::size_t e = 0; e < poly.verts.size(); ++e) {
            const int lab = poly.edge_label[e];
            if (lab < 0) continue;
            const double len =
                norm(poly.verts[(e + 1) % poly.verts.size()] - poly.verts[e]);
            edge_len[{std::min(i, lab), std::max(i, lab)}][i < lab ? 0 : 1] += len;
        }
    }

    t.h = 0.0;
    for (const Cell& c : t.cells) t.h = std::max(t.h, c.diameter);

    const double prune = 1e-12 * t.h;  // area threshold, h^{d-1} with d=2
    for (const auto& [key, lens] : edge_len) {
        const double len = lens[0];  // lower-id side's measurement
        if (len < prune) continue;
        const auto& [i, j] = key;
        const Vec nrm = seeds[j] - seeds[i];
        const double nn = norm(nrm);
        const double dist = norm(t.cells[j].centroid - t.cells[i].centroid);
        if (dist <= 0.0) throw std::invalid_argument("build_voronoi: coincident centroids");
        t.faces.push_back({i, j, len, (1.0 / nn) * nrm, dist});
    }
    build_adjacency(t);
    t.zeta = zeta_estimate(t);
    return t;
}

NondegeneracyReport check_nondegeneracy(const Tessellation& t, double zeta_request) {
    NondegeneracyReport r;
    r.zeta_ball = 1.0;
    r.zeta_face = 1.0;
    for (const Cell& c : t.cells) {
        const double rad = (t.dim == 1) ? 0.5 * c.volume
                                        : polygon_inradius_about(c.vertices, c.centroid);
        r.zeta_ball = std::min(r.zeta_ball, rad / t.h);
    }
    for (const Face& f : t.faces)
        r.zeta_face = std::min(r.zeta_face, f.area / std::pow(t.h, t.dim - 1));
    for (const auto& nbrs : t.adjacency)
        r.card_max = std::max(r.card_max, static_cast<int>(nbrs.size()));
    const double card_bound = std::pow(2.0, t.dim) / std::pow(zeta_request, t.dim);
    r.pass = std::min(r.zeta_ball, r.zeta_face) >= zeta_request &&
             static_cast<double>(r.card_max) <= card_bound;
    return r;
}

Restriction restrict(const Tessellation& t, const Box& region) {
    Restriction r;
    r.region = region;
    r.in_region.assign(t.n_cells(), 0);
    for (const Cell& c : t.cells) {
        bool member;
        if (t.dim == 1) {
            member = c.vertices[1][0] >= region.lo[0] && c.vertices[0][0] <= region.hi[0];
        } else {
            member = polygon_box_touch(c.vertices, region);
        }
        if (member) {
            r.cell_ids.push_back(c.id);
            r.in_region[c.id] = 1;
            r.covered_volume += c.volume;
        }
    }
    for (int f = 0; f < static_cast<int>(t.n_faces()); ++f)
        if (r.in_region[t.faces[f].k] && r.in_region[t.faces[f].l]) r.face_ids.push_back(f);
    return r;
}

std::string Tessellation::to_json() const {
    // Versioned document with fixed field order; floats carry 17 significant
    // digits so a reader rebuilds the mesh bit-exactly.
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string s = "{\"version\":1,\"dim\":" + std::to_string(dim) + ",\"h\":" + num(h) +
                    ",\"zeta\":" + num(zeta) + ",\"cells\":[";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        if (i) s += ",";
        s += "{\"id\":" + std::to_string(c.id) + ",\"vertices\":[";
        for (std::size_t v = 0; v < c.vertices.size(); ++v) {
            if (v) s += ",";
            if (dim == 1)
                s += "[" + num(c.vertices[v][0]) + "]";
            else
                s += "[" + num(c.vertices[v][0]) + "," + num(c.vertices[v][1]) + "]";
        }
        s += "],\"volume\":" + num(c.volume) + ",\"centroid\":[";
        s += num(c.centroid[0]);
        if (dim == 2) s += "," + num(c.centroid[1]);
        s += "]}";
    }
    s += "],\"faces\":[";
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const Face& f = faces[i];
        if (i) s += ",";
        s += "{\"k\":" + std::to_string(f.k) + ",\"l\":" + std::to_string(f.l) +
             ",\"area\":" + num(f.area) + ",\"normal\":[";
        s += num(f.normal[0]);
        if (dim == 2) s += "," + num(f.normal[1]);
        s += "],\"dist\":" + num(f.center_distance) + "}";
    }
    s += "]}";
    return s;
}

}  // namespace ggf
