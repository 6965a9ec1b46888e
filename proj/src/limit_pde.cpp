#include "ggf/limit_pde.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ggf {

ReferenceGrid make_grid(const Box& domain, int dim, double delta) {
    ReferenceGrid g;
    g.dim = dim;
    g.domain = domain;
    g.delta = delta;
    const double lx = domain.hi[0] - domain.lo[0];
    g.nx = static_cast<int>(std::llround(lx / delta));
    if (std::abs(g.nx * delta - lx) > 1e-9 * lx)
        throw std::invalid_argument("make_grid: delta does not tile the domain");
    if (dim == 2) {
        const double ly = domain.hi[1] - domain.lo[1];
        g.ny = static_cast<int>(std::llround(ly / delta));
        if (std::abs(g.ny * delta - ly) > 1e-9 * ly)
            throw std::invalid_argument("make_grid: delta does not tile the domain");
    }
    return g;
}

static double tensor_at(const LimitProblem& p, double x1) {
    return x1 < 0.0 ? p.t_left : p.t_right;
}

static double potential(const LimitProblem& p, const Vec& x) {
    return p.V ? p.V(x) : 0.0;
}

// Assemble d rho/dt = A rho for the zero-flux finite-volume scheme.
static Eigen::SparseMatrix<double> assemble(const LimitProblem& prob,
                                            const ReferenceGrid& g) {
    if (prob.shape == LimitProblem::TensorShape::constant) {
        const auto ev = prob.tensor.eigenvalues();
        if (ev[0] < -1e-14) throw std::invalid_argument("solve_limit_fp: tensor not PSD");
    } else if (prob.t_left <= 0.0 || prob.t_right <= 0.0) {
        throw std::invalid_argument("solve_limit_fp: nonpositive tensor");
    }
    const int nx = g.nx, ny = g.ny;
    const double d = g.delta;
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> V(g.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) V[g.index(i, j)] = potential(prob, g.center(i, j));

    // add c * rho[col] to the flux across the given face; the face divergence
    // couples it into the two adjacent cells with opposite signs.
    auto add_flux = [&](std::size_t cell_minus, std::size_t cell_plus, std::size_t col,
                        double c) {
        // d rho/dt += +F/d at the minus-side cell, -F/d at the plus-side cell
        trip.emplace_back(static_cast<int>(cell_minus), static_cast<int>(col), c / d);
        trip.emplace_back(static_cast<int>(cell_plus), static_cast<int>(col), -c / d);
    };

    // x-directed faces between (i,j) and (i+1,j)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const std::size_t a = g.index(i, j), b = g.index(i + 1, j);
            double T11, T12 = 0.0;
            if (prob.shape == LimitProblem::TensorShape::constant) {
                T11 = prob.tensor.a11;
                T12 = prob.tensor.a12;
            } else {
                const double ta = tensor_at(prob, g.center(i, j)[0]);
                const double tb = tensor_at(prob, g.center(i + 1, j)[0]);
                T11 = 2.0 * ta * tb / (ta + tb);  // harmonic mean at the interface
            }
            const double dVx = (V[b] - V[a]) / d;
            // T11 (drho/dx + rho dV/dx)
            add_flux(a, b, b, T11 / d);
            add_flux(a, b, a, -T11 / d);
            add_flux(a, b, a, 0.5 * T11 * dVx);
            add_flux(a, b, b, 0.5 * T11 * dVx);
            if (T12 != 0.0 && g.dim == 2) {
                // cross term T12 (drho/dy + rho dV/dy) at the x-face
                const int jm = std::max(0, j - 1), jp = std::min(ny - 1, j + 1);
                const double span = (jp - jm) * d;
                for (int col_i : {i, i + 1}) {
                    add_flux(a, b, g.index(col_i, jp), 0.5 * T12 / span);
                    add_flux(a, b, g.index(col_i, jm), -0.5 * T12 / span);
                }
                double dVy = 0.0;
                for (int col_i : {i, i + 1})
                    dVy += 0.5 * (V[g.index(col_i, jp)] - V[g.index(col_i, jm)]) / span;
                add_flux(a, b, a, 0.5 * T12 * dVy);
                add_flux(a, b, b, 0.5 * T12 * dVy);
            }
        }
    }
    // y-directed faces between (i,j) and (i,j+1)
    if (g.dim == 2) {
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t a = g.index(i, j), b = g.index(i, j + 1);
                const double T22 = prob.shape == LimitProblem::TensorShape::constant
                                       ? prob.tensor.a22
                                       : 1.0;
                const double T12 = prob.shape == LimitProblem::TensorShape::constant
                                       ? prob.tensor.a12
                                       : 0.0;
                const double dVy = (V[b] - V[a]) / d;
                add_flux(a, b, b, T22 / d);
                add_flux(a, b, a, -T22 / d);
                add_flux(a, b, a, 0.5 * T22 * dVy);
                add_flux(a, b, b, 0.5 * T22 * dVy);
                if (T12 != 0.0) {
                    const int im = std::max(0, i - 1), ip = std::min(nx - 1, i + 1);
                    const double span = (ip - im) * d;
                    for (int col_j : {j, j + 1}) {
                        add_flux(a, b, g.index(ip, col_j), 0.5 * T12 / span);
                        add_flux(a, b, g.index(im, col_j), -0.5 * T12 / span);
                    }
                    double dVx = 0.0;
                    for (int col_j : {j, j + 1})
                        dVx += 0.5 * (V[g.index(ip, col_j)] - V[g.index(im, col_j)]) / span;
                    add_flux(a, b, a, 0.5 * T12 * dVx);
                    add_flux(a, b, b, 0.5 * T12 * dVx);
                }
            }
        }
    }
    Eigen::SparseMatrix<double> A(static_cast<int>(g.size()), static_cast<int>(g.size()));
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

GridTrajectory solve_limit_fp(const LimitProblem& prob, const ReferenceGrid& grid,
                              const std::vector<double>& rho0, double dt) {
    if (rho0.size() != grid.size())
        throw std::invalid_argument("solve_limit_fp: initial data size mismatch");
    if (dt <= 0.0 || prob.horizon <= 0.0)
        throw std::invalid_argument("solve_limit_fp: dt and horizon must be positive");
    const int n_steps = static_cast<int>(std::llround(prob.horizon / dt));
    if (std::abs(n_steps * dt - prob.horizon) > 1e-9 * prob.horizon)
        throw std::invalid_argument("solve_limit_fp: horizon must be a multiple of dt");

    Eigen::SparseMatrix<double> A = assemble(prob, grid);
    Eigen::SparseMatrix<double> M(A.rows(), A.cols());
    M.setIdentity();
    M -= dt * A;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve_limit_fp: factorization failed");

    GridTrajectory traj;
    traj.grid = grid;
    traj.times.push_back(0.0);
    traj.densities.push_back(rho0);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(rho0.data(),
                                                          static_cast<Eigen::Index>(rho0.size()));
    for (int n = 0; n < n_steps; ++n) {
        x = lu.solve(x);
        traj.times.push_back((n + 1) * dt);
        traj.densities.emplace_back(x.data(), x.data() + x.size());
    }
    return traj;
}

ContinuousFunctionals continuous_functionals(const LimitProblem& prob,
                                             const ReferenceGrid& g,
                                             const std::vector<double>& rho) {
    const double cellvol = std::pow(g.delta, g.dim);
    std::vector<double> pi(g.size());
    double z = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            pi[g.index(i, j)] = std::exp(-potential(prob, g.center(i, j)));
            z += pi[g.index(i, j)] * cellvol;
        }
    for (double& p : pi) p /= z;

    std::vector<double> su(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double u = rho[k] / pi[k];
        if (u < 0.0) throw std::domain_error("continuous_functionals: negative density");
        su[k] = std::sqrt(u);
    }

    ContinuousFunctionals out;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            const double u = rho[k] / pi[k];
            const double phi = (u == 0.0) ? 1.0 : u * std::log(u) - u + 1.0;
            out.energy += phi * pi[k] * cellvol;

            // central differences of sqrt(u), one-sided at the boundary
            const int im = std::max(0, i - 1), ip = std::min(g.nx - 1, i + 1);
            Vec grad{(su[g.index(ip, j)] - su[g.index(im, j)]) / ((ip - im) * g.delta), 0.0};
            if (g.dim == 2) {
                const int jm = std::max(0, j - 1), jp = std::min(g.ny - 1, j + 1);
                grad[1] = (su[g.index(i, jp)] - su[g.index(i, jm)]) / ((jp - jm) * g.delta);
            }
            double form;
            if (prob.shape == LimitProblem::TensorShape::constant)
                form = prob.tensor.quad(grad);
            else
                form = tensor_at(prob, g.center(i, j)[0]) * grad[0] * grad[0];
            out.fisher += form * pi[k] * cellvol;
        }
    return out;
}

double l1_error(const PiecewiseConstantField& lifted, const ReferenceGrid& g,
                const std::vector<double>& ref) {
    const Tessellation& t = *lifted.tess;
    if (!lifted.is_density) throw std::logic_error("l1_error: lifted field must be a density");
    double err = 0.0;
    for (const Cell& c : t.cells) {
        // index range of grid cells overlapping the cell bounding box
        double x0 = c.vertices[0][0], x1 = x0, y0 = c.vertices[0][1], y1 = y0;
        for (const Vec& v : c.vertices) {
            x0 = std::min(x0, v[0]);
            x1 = std::max(x1, v[0]);
            y0 = std::min(y0, v[1]);
            y1 = std::max(y1, v[1]);
        }
        const int i0 = std::max(0, static_cast<int>(std::floor((x0 - g.domain.lo[0]) / g.delta - 1e-12)));
        const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((x1 - g.domain.lo[0]) / g.delta + 1e-12)));
        int j0 = 0, j1 = 0;
        if (g.dim == 2) {
            j0 = std::max(0, static_cast<int>(std::floor((y0 - g.domain.lo[1]) / g.delta - 1e-12)));
            j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((y1 - g.domain.lo[1]) / g.delta + 1e-12)));
        }
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                Box cellbox;
                cellbox.lo = {g.domain.lo[0] + i * g.delta,
                              g.dim == 2 ? g.domain.lo[1] + j * g.delta : 0.0};
                cellbox.hi = {cellbox.lo[0] + g.delta,
                              g.dim == 2 ? cellbox.lo[1] + g.delta : 0.0};
                double overlap;
                if (t.dim == 1) {
                    overlap = std::max(0.0, std::min(x1, cellbox.hi[0]) -
                                                std::max(x0, cellbox.lo[0]));
                } else {
                    overlap = polygon_box_overlap_area(c.vertices, cellbox);
                }
                if (overlap > 0.0)
                    err += std::abs(lifted.value[c.id] - ref[g.index(i, j)]) * overlap;
            }
    }
    return err;
}

}  // namespace ggf
