#include "ggf/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ggf/quadrature.hpp"

namespace ggf {

double StationaryMeasure::total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

StationaryMeasure pi_from_potential(const Tessellation& t,
                                    const std::function<double(const Vec&)>& V) {
    StationaryMeasure pi;
    pi.mass.resize(t.n_cells());
    for (const Cell& c : t.cells) {
        double m;
        if (t.dim == 1) {
            m = quad::integrate_interval(c.vertices[0][0], c.vertices[1][0],
                                         [&](double x) { return std::exp(-V(Vec{x, 0.0})); });
        } else {
            m = quad::integrate_polygon(c.vertices,
                                        [&](const Vec& x) { return std::exp(-V(x)); });
        }
        if (!std::isfinite(m) || m <= 0.0)
            throw std::invalid_argument("pi_from_potential: non-finite cell mass");
        pi.mass[c.id] = m;
    }
    const double z = pi.total();
    for (double& m : pi.mass) m /= z;
    return pi;
}

StationaryMeasure pi_uniform_mass(const Tessellation& t) {
    StationaryMeasure pi;
    pi.mass.assign(t.n_cells(), 1.0 / static_cast<double>(t.n_cells()));
    return pi;
}

std::pair<JumpKernel, JointMeasure> kernel_from_conductance(
    const Tessellation& t, const StationaryMeasure& pi,
    const std::function<double(const Face&)>& c) {
    JumpKernel kappa;
    JointMeasure theta;
    kappa.rate.resize(t.n_faces());
    theta.weight.resize(t.n_faces());
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        const Face& face = t.faces[f];
        if (face.center_distance <= 0.0)
            throw std::invalid_argument("kernel_from_conductance: zero center distance");
        const double w = c(face) * face.area / face.center_distance;
        theta.weight[f] = w;
        kappa.rate[f][0] = w / pi.mass[face.k];
        kappa.rate[f][1] = w / pi.mass[face.l];
    }
    return {kappa, theta};
}

std::pair<JumpKernel, JointMeasure> kernel_from_conductance(const Tessellation& t,
                                                            const StationaryMeasure& pi) {
    return kernel_from_conductance(t, pi, [](const Face&) { return 1.0; });
}

JumpKernel kernel_explicit(const Tessellation& t,
                           const std::map<std::pair<int, int>, double>& rates) {
    JumpKernel kappa;
    kappa.rate.resize(t.n_faces());
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        const Face& face = t.faces[f];
        const auto kl = rates.find({face.k, face.l});
        const auto lk = rates.find({face.l, face.k});
        if (kl == rates.end() || lk == rates.end())
            throw std::invalid_argument("kernel_explicit: missing rate for a face");
        kappa.rate[f][0] = kl->second;
        kappa.rate[f][1] = lk->second;
    }
    return kappa;
}

JointMeasure joint_from(const Tessellation& t, const StationaryMeasure& pi,
                        const JumpKernel& kappa) {
    JointMeasure theta;
    theta.weight.resize(t.n_faces());
    for (std::size_t f = 0; f < t.n_faces(); ++f)
        theta.weight[f] = pi.mass[t.faces[f].k] * kappa.rate[f][0];
    return theta;
}

double check_detailed_balance(const Tessellation& t, const StationaryMeasure& pi,
                              const JumpKernel& kappa) {
    double res = 0.0;
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        const double a = pi.mass[t.faces[f].k] * kappa.rate[f][0];
        const double b = pi.mass[t.faces[f].l] * kappa.rate[f][1];
        res = std::max(res, std::abs(a - b) / std::max({a, b, 1e-300}));
    }
    return res;
}

AssumptionReport check_assumptions(const Tessellation& t, const StationaryMeasure& pi,
                                   const JointMeasure& theta) {
    AssumptionReport r;
    r.zeta = t.zeta;
    r.pi_min = std::numeric_limits<double>::infinity();
    r.pi_max = 0.0;
    for (const Cell& c : t.cells) {
        const double d = pi.mass[c.id] / c.volume;
        r.pi_min = std::min(r.pi_min, d);
        r.pi_max = std::max(r.pi_max, d);
    }
    r.c_lower = std::numeric_limits<double>::infinity();
    r.c_upper = 0.0;
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        const Face& face = t.faces[f];
        const double c = theta.weight[f] * face.center_distance / face.area;
        r.c_lower = std::min(r.c_lower, c);
        r.c_upper = std::max(r.c_upper, c);
    }
    r.c_kappa = 0.0;
    for (const Cell& c : t.cells) {
        double s = 0.0;
        for (const auto& [nbr, f] : t.adjacency[c.id])
            s += theta.weight[f] / pi.mass[c.id];
        r.c_kappa = std::max(r.c_kappa, t.h * t.h * s);
    }
    for (const Cell& c : t.cells) {
        if (!t.cell_is_interior(c.id)) continue;
        Vec sum{0.0, 0.0};
        double wsum = 0.0;
        for (const auto& [nbr, f] : t.adjacency[c.id]) {
            const double w = theta.weight[f];
            sum = sum + w * (c.centroid - t.cells[nbr].centroid);
            wsum += w;
        }
        r.aloc_residual[c.id] = (wsum > 0.0) ? norm(sum) / (t.h * wsum) : 0.0;
    }
    return r;
}

MarkovData make_markov(const Tessellation& t, StationaryMeasure pi, JumpKernel kappa) {
    MarkovData md;
    md.tess = &t;
    md.theta = joint_from(t, pi, kappa);
    md.pi = std::move(pi);
    md.kappa = std::move(kappa);
    return md;
}

std::string AssumptionReport::to_json() const {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    double aloc_max = 0.0;
    for (const auto& [id, v] : aloc_residual) aloc_max = std::max(aloc_max, v);
    std::string s = "{\"pi_min\":" + num(pi_min) + ",\"pi_max\":" + num(pi_max) +
                    ",\"c_lower\":" + num(c_lower) + ",\"c_upper\":" + num(c_upper) +
                    ",\"c_kappa\":" + num(c_kappa) + ",\"db_residual\":" + num(db_residual) +
                    ",\"aloc_residual\":{";
    bool first = true;
    for (const auto& [id, v] : aloc_residual) {
        if (!first) s += ",";
        first = false;
        s += "\"" + std::to_string(id) + "\":" + num(v);
    }
    s += "},\"zeta\":" + num(zeta) + "}";
    return s;
}

}  // namespace ggf
