#pragma once

#include <functional>
#include <map>
#include <vector>

#include "ggf/tessellation.hpp"

namespace ggf {

/// Stationary probability measure pi^h(K), indexed by cell id.
struct StationaryMeasure {
    std::vector<double> mass;
    double total() const;
};

/// Jump rates for both orientations of every face; rate[f][0] is K->L for
/// the face's stored (k, l) pair, rate[f][1] is L->K.
struct JumpKernel {
    std::vector<std::array<double, 2>> rate;
};

/// Symmetric joint measure on unordered faces.
struct JointMeasure {
    std::vector<double> weight;
};

/// Everything the dynamics and functionals need, bundled.
struct MarkovData {
    const Tessellation* tess = nullptr;
    StationaryMeasure pi;
    JumpKernel kappa;
    JointMeasure theta;
};

struct AssumptionReport {
    double pi_min = 0.0, pi_max = 0.0;   // density bounds pi(K)/|K|
    double c_lower = 0.0, c_upper = 0.0; // theta vs |(K|L)|/|x_L-x_K|
    double c_kappa = 0.0;                // max_K h^2 sum_L kappa(K,L)
    double db_residual = 0.0;
    std::map<int, double> aloc_residual; // interior cells only
    double zeta = 0.0;

    std::string to_json() const;
};

StationaryMeasure pi_from_potential(const Tessellation& t,
                                    const std::function<double(const Vec&)>& V);

StationaryMeasure pi_uniform_mass(const Tessellation& t);

/// theta(K,L) = c(K,L) |(K|L)| / |x_L - x_K|, kappa = theta / pi(K).
/// Detailed balance holds by construction.
std::pair<JumpKernel, JointMeasure> kernel_from_conductance(
    const Tessellation& t, const StationaryMeasure& pi,
    const std::function<double(const Face&)>& c);

std::pair<JumpKernel, JointMeasure> kernel_from_conductance(const Tessellation& t,
                                                            const StationaryMeasure& pi);

/// Direct ingestion of user-specified rates, one per ordered face.
JumpKernel kernel_explicit(const Tessellation& t,
                           const std::map<std::pair<int, int>, double>& rates);

/// Joint measure theta(K,L) = pi(K) kappa(K,L); meaningful when DB holds.
JointMeasure joint_from(const Tessellation& t, const StationaryMeasure& pi,
                        const JumpKernel& kappa);

double check_detailed_balance(const Tessellation& t, const StationaryMeasure& pi,
                              const JumpKernel& kappa);

AssumptionReport check_assumptions(const Tessellation& t, const StationaryMeasure& pi,
                                   const JointMeasure& theta);

MarkovData make_markov(const Tessellation& t, StationaryMeasure pi, JumpKernel kappa);

}  // namespace ggf
