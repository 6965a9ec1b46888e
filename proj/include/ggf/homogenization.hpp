#pragma once

#include <vector>

#include "ggf/markov.hpp"

namespace ggf {

/// Per-cell symmetric diffusion tensor; in d=1 only a11 is meaningful.
struct TensorField {
    const Tessellation* tess = nullptr;
    std::vector<Mat2> value;
};

/// T(K) = sum_L kappa(K,L) (x_L - x_K) (x) (x_L - x_K).
TensorField local_tensor(const Tessellation& t, const JumpKernel& kappa);

/// pi-weighted tensor average over the cells covering the probe box:
/// sum_{K in T|_Q} pi(K) T(K), divided by sum pi(K) when mean = true.
Mat2 average_tensor(const TensorField& field, const StationaryMeasure& pi, const Box& probe,
                    bool mean = true);

/// Face-restricted raw probe tensor: sum over ordered face pairs inside the
/// probe of theta(K,L) (x_L - x_K) (x) (x_L - x_K).
Mat2 probe_tensor_raw(const Tessellation& t, const JointMeasure& theta, const Box& probe);

/// Localized Dirichlet form sum over ordered face pairs in the region of
/// (v(L) - v(K))^2 theta(K,L).
double localized_fisher(const Tessellation& t, const std::vector<double>& v,
                        const Restriction& region, const JointMeasure& theta);

struct DirichletResult {
    double value = 0.0;                // M_h
    std::vector<double> minimizer;     // full cell vector, pinned outside
    double first_variation = 0.0;      // max-norm optimality residual
    int iterations = 0;
};

/// Minimize the localized Dirichlet form over cells strictly inside the
/// region, with the given data pinned elsewhere. Jacobi-preconditioned CG to
/// relative residual 1e-12; rejects free components with no pinned contact.
DirichletResult dirichlet_min(const Tessellation& t, const std::vector<double>& phi,
                              const Restriction& region, const JointMeasure& theta);

/// F(phi, Q) - M_h(phi, Q) >= 0 for the affine probe phi(K) = <xi, x_K - x>.
double amin_residual(const Tessellation& t, const JointMeasure& theta, const Vec& x,
                     const Vec& xi, double eps);

struct ProbeEstimate {
    Vec center{0.0, 0.0};
    double eps = 0.0;
    std::vector<double> h_values;
    std::vector<Mat2> per_h;       // normalized probe averages, ascending h rank
    Mat2 extrapolated;             // Richardson in h from the two finest levels
    double lambda = 0.0, Lambda = 0.0;
    double lambda_bound = 0.0, Lambda_bound = 0.0;  // informational analytic lines
};

struct TensorStudyInput {
    double h = 0.0;
    const MarkovData* data = nullptr;
};

/// Probe-average estimates of the limit tensor from >= 3 mesh levels.
/// c_zeta is the path-connectivity constant used only for the informational
/// lower ellipticity line.
std::vector<ProbeEstimate> estimate_limit_tensor(const std::vector<TensorStudyInput>& runs,
                                                 const std::vector<Vec>& probe_centers,
                                                 double eps, double c_zeta);

}  // namespace ggf
