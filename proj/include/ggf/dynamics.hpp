#pragma once

#include <memory>
#include <vector>

#include "ggf/functionals.hpp"

namespace ggf {

/// Forward-Kolmogorov generator acting on cell measures,
/// (Q* rho)(L) = sum_K kappa(K,L) rho(K) - rho(L) sum_K kappa(L,K),
/// together with a cached sparse factorization of (I - dt Q*).
class Generator {
  public:
    explicit Generator(const MarkovData& data);
    ~Generator();
    Generator(Generator&&) noexcept;
    Generator& operator=(Generator&&) noexcept;

    std::vector<double> apply(const std::vector<double>& rho) const;

    /// Solve (I - dt Q*) rho_next = rho. The LU factorization is reused
    /// across calls with the same dt.
    std::vector<double> step_implicit_euler(const std::vector<double>& rho, double dt) const;

    const MarkovData& data() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Gradient-flow flux of a state: j(K,L) = theta(K,L) (u_K - u_L) / 2.
FluxField ggf_flux(const DiscreteState& rho);

struct EdbAudit {
    double edb_residual = 0.0;   // max |per-interval balance defect|, O(dt^2)
    double edb_signed_min = 0.0; // most negative per-interval defect
    double edb_cumulative = 0.0; // signed sum over the whole trajectory
    double ce_residual = 0.0;    // max continuity-equation defect per step
    double mass_drift = 0.0;     // max |total(rho_n) - total(rho_0)|
    double min_density = 0.0;    // min over time and cells of rho(K)
    bool entropy_monotone = true;
    std::vector<double> per_interval;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DiscreteState> states;
    std::vector<FluxField> fluxes;  // per interval, at the midpoint state
};

/// Implicit-Euler forward-Kolmogorov solve on [0, T] with fixed dt.
/// Stored interval fluxes are ggf_flux((rho_n + rho_{n+1})/2); the
/// continuity-equation defect rate of this placement is O(dt), tracked by the
/// audit rather than asserted.
Trajectory solve_fk(const Generator& gen, const DiscreteState& rho0, double T, double dt);

EdbAudit audit_edb(const Trajectory& traj);

}  // namespace ggf
