#include "ggf/reconstruction.hpp"

#include <cmath>
#include <stdexcept>

#include "ggf/quadrature.hpp"

namespace ggf {

double PiecewiseConstantField::operator()(const Vec& x) const {
    const int id = tess->locate(x);
    if (id < 0) throw std::domain_error("PiecewiseConstantField: point outside domain");
    return value[id];
}

double PiecewiseConstantField::integral() const {
    if (!is_density) throw std::logic_error("PiecewiseConstantField: not a density");
    double s = 0.0;
    for (const Cell& c : tess->cells) s += value[c.id] * c.volume;
    return s;
}

static std::vector<std::pair<Vec, double>> cell_nodes(const Tessellation& t, const Cell& c,
                                                      int refine) {
    if (t.dim == 1)
        return quad::interval_nodes(c.vertices[0][0], c.vertices[1][0], 1 << refine);
    return quad::polygon_nodes(c.vertices, refine);
}

std::vector<double> project(const Tessellation& t,
                            const std::function<double(const Vec&)>& f) {
    std::vector<double> v(t.n_cells());
    for (const Cell& c : t.cells) {
        double s = 0.0;
        for (const auto& [x, w] : cell_nodes(t, c, 2)) s += w * f(x);
        v[c.id] = s / c.volume;
    }
    return v;
}

PiecewiseConstantField lift(const Tessellation& t, const std::vector<double>& v) {
    PiecewiseConstantField f;
    f.tess = &t;
    f.value = v;
    f.is_density = false;
    return f;
}

PiecewiseConstantField lift_density(const DiscreteState& rho) {
    PiecewiseConstantField f;
    f.tess = rho.data->tess;
    f.is_density = true;
    f.value.resize(rho.rho.size());
    for (const Cell& c : f.tess->cells) f.value[c.id] = rho.rho[c.id] / c.volume;
    return f;
}

SigmaMeasure make_sigma(const Tessellation& t, int face) {
    SigmaMeasure s;
    s.tess = &t;
    s.face = face;
    // Translation coupling requires L to be a translate of K.
    const Cell& K = t.cells[t.faces[face].k];
    const Cell& L = t.cells[t.faces[face].l];
    const bool congruent = t.kind != Tessellation::Kind::voronoi &&
                           std::abs(K.volume - L.volume) <= 1e-12 * (K.volume + L.volume);
    s.coupling = congruent ? SigmaMeasure::Coupling::translation
                           : SigmaMeasure::Coupling::product;
    return s;
}

double sigma_pairing(const SigmaMeasure& sigma, const std::function<Vec(const Vec&)>& g) {
    const Tessellation& t = *sigma.tess;
    const Face& face = t.faces[sigma.face];
    const Cell& K = t.cells[face.k];
    const Cell& L = t.cells[face.l];
    const auto& tau = quad::gauss01(8);
    double total = 0.0;
    if (sigma.coupling == SigmaMeasure::Coupling::translation) {
        const Vec d = L.centroid - K.centroid;
        for (const auto& [x, w] : cell_nodes(t, K, sigma.refine))
            for (const auto& tn : tau) {
                const Vec p = x + tn.x * d;
                total += w * tn.w * dot(g(p), d);
            }
        return total / K.volume;
    }
    const auto xs = cell_nodes(t, K, sigma.refine);
    const auto ys = cell_nodes(t, L, sigma.refine);
    for (const auto& [x, wx] : xs)
        for (const auto& [y, wy] : ys) {
            const Vec d = y - x;
            double line = 0.0;
            for (const auto& tn : tau) line += tn.w * dot(g(x + tn.x * d), d);
            total += wx * wy * line;
        }
    return total / (K.volume * L.volume);
}

double sigma_tv_estimate(const SigmaMeasure& sigma) {
    const Tessellation& t = *sigma.tess;
    const Face& face = t.faces[sigma.face];
    const Cell& K = t.cells[face.k];
    const Cell& L = t.cells[face.l];
    if (sigma.coupling == SigmaMeasure::Coupling::translation)
        return norm(L.centroid - K.centroid);
    const auto xs = cell_nodes(t, K, sigma.refine);
    const auto ys = cell_nodes(t, L, sigma.refine);
    double total = 0.0;
    for (const auto& [x, wx] : xs)
        for (const auto& [y, wy] : ys) total += wx * wy * norm(y - x);
    return total / (K.volume * L.volume);
}

Vec lattice_sigma_density(const Tessellation& t, int face, const Vec& x) {
    if (t.kind != Tessellation::Kind::lattice)
        throw std::invalid_argument("lattice_sigma_density: uniform lattice required");
    const Face& f = t.faces[face];
    const Cell& K = t.cells[f.k];
    const Cell& L = t.cells[f.l];
    const double h = t.spacing;
    const Vec mid = 0.5 * (K.centroid + L.centroid);  // a point on the face plane
    const bool inside = (t.locate(x) == f.k || t.locate(x) == f.l);
    if (!inside) return Vec{0.0, 0.0};
    const double dist = std::abs(dot(x - mid, f.normal));
    const double profile = std::max(0.0, h - dist) / K.volume;
    return profile * f.normal;
}

double weak_ce_residual(const Trajectory& traj,
                        const std::vector<std::function<double(const Vec&)>>& phis,
                        const std::vector<std::function<Vec(const Vec&)>>& grad_phis,
                        const std::vector<std::pair<std::size_t, std::size_t>>& windows) {
    const Tessellation& t = *traj.states.front().data->tess;
    double worst = 0.0;
    for (std::size_t p = 0; p < phis.size(); ++p) {
        const auto proj_phi = project(t, phis[p]);
        std::vector<double> face_pairing(t.n_faces());
        for (std::size_t f = 0; f < t.n_faces(); ++f)
            face_pairing[f] = sigma_pairing(make_sigma(t, static_cast<int>(f)), grad_phis[p]);
        for (const auto& [s, e] : windows) {
            double lhs = 0.0;
            for (std::size_t k = 0; k < t.n_cells(); ++k)
                lhs += proj_phi[k] * (traj.states[e].rho[k] - traj.states[s].rho[k]);
            double rhs = 0.0;
            for (std::size_t n = s; n < e; ++n) {
                const double dt = traj.times[n + 1] - traj.times[n];
                double face_sum = 0.0;
                for (std::size_t f = 0; f < t.n_faces(); ++f)
                    face_sum += 2.0 * traj.fluxes[n].value[f] * face_pairing[f];
                rhs += dt * face_sum;
            }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

double bv_seminorm(const PiecewiseConstantField& u) {
    if (u.is_density) throw std::logic_error("bv_seminorm: plain functions only");
    const Tessellation& t = *u.tess;
    double s = 0.0;
    for (std::size_t f = 0; f < t.n_faces(); ++f)
        s += std::abs(u.value[t.faces[f].k] - u.value[t.faces[f].l]) * t.faces[f].area;
    return s;
}

}  // namespace ggf
