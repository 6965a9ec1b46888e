#pragma once

#include <vector>

#include "ggf/markov.hpp"

namespace ggf {

/// A nonnegative measure on cells (mass per cell, not a density).
struct DiscreteState {
    std::vector<double> rho;
    const MarkovData* data = nullptr;

    double total() const;
    /// Relative density u(K) = rho(K)/pi(K).
    std::vector<double> relative_density() const;
};

/// Antisymmetric flux, one signed value per unordered face, oriented k->l.
struct FluxField {
    std::vector<double> value;
};

/// (grad f)(K,L) = f(L) - f(K) per unordered face, oriented k->l.
std::vector<double> graph_gradient(const Tessellation& t, const std::vector<double>& f);

/// (div j)(K) = sum_L [j(K,L) - j(L,K)] = 2 sum over faces of the signed flux.
std::vector<double> graph_divergence(const Tessellation& t, const FluxField& j);

/// Relative entropy E_h(rho) = sum_K phi(u_K) pi(K), phi(s) = s log s - s + 1.
double energy(const DiscreteState& rho);

/// Dual dissipation R*_h(rho, xi) = 1/2 sum over ordered faces of
/// psi_star(xi) sqrt(u_K u_L) theta(K,L); xi is per unordered face (k->l).
double dual_dissipation(const DiscreteState& rho, const std::vector<double>& xi);

/// Primal dissipation R_h(rho, j); +infinity if a face with vanishing density
/// carries nonzero flux.
double dissipation(const DiscreteState& rho, const FluxField& j);

/// Fisher information D_h(rho) = sum over ordered faces of
/// (sqrt(u_L) - sqrt(u_K))^2 theta(K,L).
double fisher(const DiscreteState& rho);

/// Energy-dissipation-balance functional over a discrete trajectory:
/// sum_n [ dt R_h(rho_mid, j_mid) + dt/2 (D_h(rho_n) + D_h(rho_{n+1})) ]
///   + E_h(rho_N) - E_h(rho_0).
/// Nonnegative along arbitrary curves; zero exactly on the gradient flow.
double edb_functional(const std::vector<DiscreteState>& traj,
                      const std::vector<FluxField>& mid_flux, double dt);

}  // namespace ggf
