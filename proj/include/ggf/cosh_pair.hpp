#pragma once

namespace ggf {
namespace cosh_pair {

// Legendre-Fenchel pair of the cosh dissipation structure:
//   psi_star(xi) = 4 (cosh(xi/2) - 1)
//   psi(s)       = 2 s asinh(s/2) - 2 sqrt(s^2 + 4) + 4
// Both are even, convex, and vanish at the origin.

double psi(double s);
double psi_star(double xi);          // throws std::overflow_error for |xi| > 1400
double psi_prime(double s);          // 2 asinh(s/2)
double psi_star_prime(double xi);    // 2 sinh(xi/2)

/// Strictly increasing inverse of psi on [0, inf); safeguarded Newton with the
/// bracket [0, r + psi_star(1)] coming from the conjugacy bound at xi = 1.
double psi_inverse(double r);

}  // namespace cosh_pair
}  // namespace ggf
