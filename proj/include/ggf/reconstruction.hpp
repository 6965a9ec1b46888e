#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ggf/dynamics.hpp"

namespace ggf {

/// Piecewise-constant function or Lebesgue density attached to a tessellation.
struct PiecewiseConstantField {
    const Tessellation* tess = nullptr;
    std::vector<double> value;
    bool is_density = false;  // value = mass per unit volume when set

    double operator()(const Vec& x) const;  // cell lookup, lowest id on ties
    double integral() const;                // densities only
};

/// Cell averages (1/|K|) int_K f dx, same quadrature family as the measures.
std::vector<double> project(const Tessellation& t, const std::function<double(const Vec&)>& f);

PiecewiseConstantField lift(const Tessellation& t, const std::vector<double>& v);
PiecewiseConstantField lift_density(const DiscreteState& rho);

/// Face-indexed vector measure sigma_KL; only pairings are ever evaluated.
struct SigmaMeasure {
    enum class Coupling { translation, product };
    const Tessellation* tess = nullptr;
    int face = -1;
    Coupling coupling = Coupling::translation;
    int refine = 2;  // spatial quadrature refinement per cell
};

/// Translation coupling on lattices (matching the closed-form example),
/// product coupling m_K (x) m_L otherwise.
SigmaMeasure make_sigma(const Tessellation& t, int face);

/// int_0^1 int g(x + tau(y-x)) . (y-x) gamma(dx dy) dtau.
double sigma_pairing(const SigmaMeasure& sigma, const std::function<Vec(const Vec&)>& g);

/// Quadrature estimate of int |y-x| dgamma, an upper bound for |sigma_KL|(Omega).
double sigma_tv_estimate(const SigmaMeasure& sigma);

/// Closed-form tent density (n_KL/|K|)(h - dist(x, (K|L))) on K u L for
/// uniform lattices; rejects other tessellation kinds.
Vec lattice_sigma_density(const Tessellation& t, int face, const Vec& x);

/// Max over (test function, window) of the weak continuity-equation defect
/// |<phi, rho_t> - <phi, rho_s> - sum_r dt sum_faces 2 j_r <sigma, grad phi>|.
/// Windows are index pairs into the trajectory time grid.
double weak_ce_residual(const Trajectory& traj,
                        const std::vector<std::function<double(const Vec&)>>& phis,
                        const std::vector<std::function<Vec(const Vec&)>>& grad_phis,
                        const std::vector<std::pair<std::size_t, std::size_t>>& windows);

/// Exact BV seminorm of a piecewise-constant function:
/// sum over faces of |v(K) - v(L)| |(K|L)|.
double bv_seminorm(const PiecewiseConstantField& u);

}  // namespace ggf
