#include "ggf/cosh_pair.hpp"

#include <cmath>
#include <stdexcept>

namespace ggf {
namespace cosh_pair {

double psi(double s) {
    const double a = std::asinh(0.5 * s);
    return 2.0 * s * a - 2.0 * std::sqrt(s * s + 4.0) + 4.0;
}

double psi_star(double xi) {
    if (std::abs(xi) > 1400.0)
        throw std::overflow_error("psi_star: argument magnitude exceeds 1400");
    return 4.0 * (std::cosh(0.5 * xi) - 1.0);
}

double psi_prime(double s) { return 2.0 * std::asinh(0.5 * s); }

double psi_star_prime(double xi) { return 2.0 * std::sinh(0.5 * xi); }

double psi_inverse(double r) {
    if (r < 0.0) throw std::domain_error("psi_inverse: negative value");
    if (r == 0.0) return 0.0;
    // psi(s) >= s - psi_star(1) for all s, so psi(s) = r forces s <= r + psi_star(1).
    double lo = 0.0, hi = r + psi_star(1.0);
    double s = std::min(hi, std::sqrt(r));  // psi(s) ~ s^2/4 near 0
    for (int it = 0; it < 100; ++it) {
        const double f = psi(s) - r;
        if (f > 0.0) hi = s; else lo = s;
        const double df = psi_prime(s);
        double step = (df > 0.0) ? s - f / df : 0.5 * (lo + hi);
        if (!(step > lo && step < hi)) step = 0.5 * (lo + hi);
        if (std::abs(step - s) <= 1e-15 * (1.0 + s)) return step;
        s = step;
    }
    return s;
}

}  // namespace cosh_pair
}  // namespace ggf
