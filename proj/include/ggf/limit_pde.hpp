#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ggf/reconstruction.hpp"

namespace ggf {

/// Cell-centered uniform grid on an axis-aligned box; ny = 1 in d = 1.
struct ReferenceGrid {
    int dim = 2;
    Box domain;
    int nx = 0, ny = 1;
    double delta = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    Vec center(int i, int j) const {
        return {domain.lo[0] + (i + 0.5) * delta,
                dim == 2 ? domain.lo[1] + (j + 0.5) * delta : 0.0};
    }
};

ReferenceGrid make_grid(const Box& domain, int dim, double delta);

/// Fokker-Planck problem d_t rho = div(T (grad rho + rho grad V)) with
/// zero-flux boundary. Supported tensor shapes: constant symmetric 2x2
/// (full or diagonal) and piecewise constant in x1 for d = 1.
struct LimitProblem {
    enum class TensorShape { constant, piecewise_1d };
    int dim = 2;
    TensorShape shape = TensorShape::constant;
    Mat2 tensor;                       // constant case
    double t_left = 1.0, t_right = 1.0;  // piecewise_1d: value left/right of x1 = 0
    std::function<double(const Vec&)> V;  // empty = zero potential
    double horizon = 0.0;
};

struct GridTrajectory {
    ReferenceGrid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> densities;  // one vector per time
};

/// Conservative finite volumes + implicit Euler; rho0 is a density on grid
/// cells. Mass is conserved exactly by the flux form of the stencil.
GridTrajectory solve_limit_fp(const LimitProblem& prob, const ReferenceGrid& grid,
                              const std::vector<double>& rho0, double dt);

struct ContinuousFunctionals {
    double energy = 0.0;   // relative entropy w.r.t. pi = e^{-V}/Z
    double fisher = 0.0;   // int <grad sqrt(u), T grad sqrt(u)> dpi
};

ContinuousFunctionals continuous_functionals(const LimitProblem& prob,
                                             const ReferenceGrid& grid,
                                             const std::vector<double>& rho);

/// Exact L1 distance between a piecewise-constant tessellation field and a
/// grid density via polygon/box overlap areas (interval overlaps in d = 1).
double l1_error(const PiecewiseConstantField& lifted, const ReferenceGrid& grid,
                const std::vector<double>& ref);

}  // namespace ggf
