#include "ggf/dynamics.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace ggf {

struct Generator::Impl {
    const MarkovData* data = nullptr;
    Eigen::SparseMatrix<double> Q;  // column-major, Q(l,k) = kappa(K->L)
    mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    mutable double cached_dt = -1.0;
};

Generator::Generator(const MarkovData& data) : impl_(std::make_unique<Impl>()) {
    impl_->data = &data;
    const Tessellation& t = *data.tess;
    const int n = static_cast<int>(t.n_cells());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(t.n_faces() * 4 + t.n_cells());
    std::vector<double> diag(n, 0.0);
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        const int k = t.faces[f].k, l = t.faces[f].l;
        const double kl = data.kappa.rate[f][0], lk = data.kappa.rate[f][1];
        trip.emplace_back(l, k, kl);
        trip.emplace_back(k, l, lk);
        diag[k] -= kl;
        diag[l] -= lk;
    }
    for (int k = 0; k < n; ++k) trip.emplace_back(k, k, diag[k]);
    impl_->Q.resize(n, n);
    impl_->Q.setFromTriplets(trip.begin(), trip.end());
}

Generator::~Generator() = default;
Generator::Generator(Generator&&) noexcept = default;
Generator& Generator::operator=(Generator&&) noexcept = default;

const MarkovData& Generator::data() const { return *impl_->data; }

std::vector<double> Generator::apply(const std::vector<double>& rho) const {
    Eigen::Map<const Eigen::VectorXd> x(rho.data(), static_cast<Eigen::Index>(rho.size()));
    Eigen::VectorXd y = impl_->Q * x;
    return {y.data(), y.data() + y.size()};
}

std::vector<double> Generator::step_implicit_euler(const std::vector<double>& rho,
                                                   double dt) const {
    if (dt <= 0.0) throw std::invalid_argument("step_implicit_euler: dt must be positive");
    if (dt != impl_->cached_dt) {
        Eigen::SparseMatrix<double> A(impl_->Q.rows(), impl_->Q.cols());
        A.setIdentity();
        A -= dt * impl_->Q;
        impl_->lu.compute(A);
        if (impl_->lu.info() != Eigen::Success)
            throw std::runtime_error("step_implicit_euler: factorization failed");
        impl_->cached_dt = dt;
    }
    Eigen::Map<const Eigen::VectorXd> b(rho.data(), static_cast<Eigen::Index>(rho.size()));
    Eigen::VectorXd x = impl_->lu.solve(b);
    return {x.data(), x.data() + x.size()};
}

FluxField ggf_flux(const DiscreteState& rho) {
    const Tessellation& t = *rho.data->tess;
    const auto u = rho.relative_density();
    FluxField j;
    j.value.resize(t.n_faces());
    for (std::size_t f = 0; f < t.n_faces(); ++f)
        j.value[f] = 0.5 * rho.data->theta.weight[f] * (u[t.faces[f].k] - u[t.faces[f].l]);
    return j;
}

Trajectory solve_fk(const Generator& gen, const DiscreteState& rho0, double T, double dt) {
    if (T <= 0.0 || dt <= 0.0) throw std::invalid_argument("solve_fk: T, dt must be positive");
    const int n_steps = static_cast<int>(std::llround(T / dt));
    if (std::abs(n_steps * dt - T) > 1e-9 * T)
        throw std::invalid_argument("solve_fk: T must be an integer multiple of dt");
    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.fluxes.reserve(n_steps);
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);
    for (int n = 0; n < n_steps; ++n) {
        const DiscreteState& cur = traj.states.back();
        DiscreteState next;
        next.data = rho0.data;
        next.rho = gen.step_implicit_euler(cur.rho, dt);
        DiscreteState mid;
        mid.data = rho0.data;
        mid.rho.resize(next.rho.size());
        for (std::size_t k = 0; k < mid.rho.size(); ++k)
            mid.rho[k] = 0.5 * (cur.rho[k] + next.rho[k]);
        traj.fluxes.push_back(ggf_flux(mid));
        traj.states.push_back(std::move(next));
        traj.times.push_back((n + 1) * dt);
    }
    return traj;
}

EdbAudit audit_edb(const Trajectory& traj) {
    EdbAudit a;
    if (traj.states.size() < 2) return a;
    const DiscreteState& first = traj.states.front();
    const Tessellation& t = *first.data->tess;
    const double dt = traj.times[1] - traj.times[0];
    const double m0 = first.total();

    a.per_interval.reserve(traj.states.size() - 1);
    std::vector<double> E(traj.states.size());
    std::vector<double> D(traj.states.size());
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        E[n] = energy(traj.states[n]);
        D[n] = fisher(traj.states[n]);
    }
    a.edb_signed_min = 0.0;
    for (std::size_t n = 0; n + 1 < traj.states.size(); ++n) {
        DiscreteState mid;
        mid.data = first.data;
        mid.rho.resize(first.rho.size());
        for (std::size_t k = 0; k < mid.rho.size(); ++k)
            mid.rho[k] = 0.5 * (traj.states[n].rho[k] + traj.states[n + 1].rho[k]);
        const double r = dt * dissipation(mid, traj.fluxes[n]) +
                         0.5 * dt * (D[n] + D[n + 1]) + E[n + 1] - E[n];
        a.per_interval.push_back(r);
        a.edb_residual = std::max(a.edb_residual, std::abs(r));
        a.edb_signed_min = std::min(a.edb_signed_min, r);
        a.edb_cumulative += r;
    }
    a.min_density = first.rho[0];
    double prev_E = E[0];
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        for (double v : traj.states[n].rho) a.min_density = std::min(a.min_density, v);
        a.mass_drift = std::max(a.mass_drift, std::abs(traj.states[n].total() - m0));
        if (n > 0) {
            if (E[n] > prev_E + 1e-12 * (1.0 + std::abs(prev_E))) a.entropy_monotone = false;
            prev_E = E[n];
        }
    }
    for (std::size_t n = 0; n + 1 < traj.states.size(); ++n) {
        const auto div = graph_divergence(t, traj.fluxes[n]);
        for (std::size_t k = 0; k < div.size(); ++k) {
            const double defect = (traj.states[n + 1].rho[k] - traj.states[n].rho[k]) / dt +
                                  div[k];
            a.ce_residual = std::max(a.ce_residual, std::abs(defect));
        }
    }
    return a;
}

}  // namespace ggf
