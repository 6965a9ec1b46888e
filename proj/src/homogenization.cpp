#include "ggf/homogenization.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace ggf {

TensorField local_tensor(const Tessellation& t, const JumpKernel& kappa) {
    TensorField field;
    field.tess = &t;
    field.value.assign(t.n_cells(), Mat2{});
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        const Face& face = t.faces[f];
        const Vec d = t.cells[face.l].centroid - t.cells[face.k].centroid;
        const Mat2 dd = Mat2::outer(d);
        field.value[face.k] += dd * kappa.rate[f][0];
        field.value[face.l] += dd * kappa.rate[f][1];
    }
    return field;
}

Mat2 average_tensor(const TensorField& field, const StationaryMeasure& pi, const Box& probe,
                    bool mean) {
    const Tessellation& t = *field.tess;
    if (!t.domain.empty()) {
        // Probe must sit inside the domain; a cheap check via corner location.
        for (const Vec corner : {probe.lo, probe.hi, Vec{probe.lo[0], probe.hi[1]},
                                 Vec{probe.hi[0], probe.lo[1]}}) {
            Vec c = corner;
            if (t.dim == 1) c[1] = 0.0;
            if (t.locate(c) < 0)
                throw std::invalid_argument("average_tensor: probe leaves the domain");
        }
    }
    const Restriction r = restrict(t, probe);
    Mat2 acc;
    double w = 0.0;
    for (int id : r.cell_ids) {
        acc += field.value[id] * pi.mass[id];
        w += pi.mass[id];
    }
    if (!mean) return acc;
    if (w <= 0.0) throw std::invalid_argument("average_tensor: empty probe");
    return acc * (1.0 / w);
}

Mat2 probe_tensor_raw(const Tessellation& t, const JointMeasure& theta, const Box& probe) {
    const Restriction r = restrict(t, probe);
    Mat2 acc;
    for (int f : r.face_ids) {
        const Face& face = t.faces[f];
        const Vec d = t.cells[face.l].centroid - t.cells[face.k].centroid;
        acc += Mat2::outer(d) * (2.0 * theta.weight[f]);
    }
    return acc;
}

double localized_fisher(const Tessellation& t, const std::vector<double>& v,
                        const Restriction& region, const JointMeasure& theta) {
    double s = 0.0;
    for (int f : region.face_ids) {
        const double g = v[t.faces[f].l] - v[t.faces[f].k];
        s += 2.0 * g * g * theta.weight[f];
    }
    return s;
}

// Cells whose closure lies strictly inside the open region box.
static std::vector<char> free_cells(const Tessellation& t, const Restriction& region) {
    std::vector<char> free_flag(t.n_cells(), 0);
    const double tol = 1e-12;
    for (int id : region.cell_ids) {
        bool inside = true;
        for (const Vec& v : t.cells[id].vertices) {
            for (int i = 0; i < t.dim && inside; ++i)
                if (v[i] <= region.region.lo[i] + tol || v[i] >= region.region.hi[i] - tol)
                    inside = false;
            if (!inside) break;
        }
        free_flag[id] = inside ? 1 : 0;
    }
    return free_flag;
}

DirichletResult dirichlet_min(const Tessellation& t, const std::vector<double>& phi,
                              const Restriction& region, const JointMeasure& theta) {
    const auto free_flag = free_cells(t, region);

    // Every free connected component (through region faces) must reach a
    // pinned cell, otherwise the quadratic form has a flat direction.
    {
        std::vector<char> seen(t.n_cells(), 0);
        std::vector<std::vector<std::pair<int, int>>> adj(t.n_cells());
        for (int f : region.face_ids) {
            adj[t.faces[f].k].push_back({t.faces[f].l, f});
            adj[t.faces[f].l].push_back({t.faces[f].k, f});
        }
        for (std::size_t start = 0; start < t.n_cells(); ++start) {
            if (!free_flag[start] || seen[start]) continue;
            bool grounded = false;
            std::queue<int> q;
            q.push(static_cast<int>(start));
            seen[start] = 1;
            while (!q.empty()) {
                const int k = q.front();
                q.pop();
                for (const auto& [nbr, f] : adj[k]) {
                    if (!free_flag[nbr]) {
                        grounded = true;
                        continue;
                    }
                    if (!seen[nbr]) {
                        seen[nbr] = 1;
                        q.push(nbr);
                    }
                }
            }
            if (!grounded)
                throw std::runtime_error(
                    "dirichlet_min: free component without boundary contact, seed cell " +
                    std::to_string(start));
        }
    }

    // Assemble the free-cell system A psi = b from the first variation
    // 4 sum_faces theta (psi_K - psi_L) = 0 (the factor 4 cancels).
    std::vector<int> idx(t.n_cells(), -1);
    std::vector<int> cells;
    for (std::size_t k = 0; k < t.n_cells(); ++k)
        if (free_flag[k]) {
            idx[k] = static_cast<int>(cells.size());
            cells.push_back(static_cast<int>(k));
        }
    const int n = static_cast<int>(cells.size());
    if (n == 0) throw std::invalid_argument("dirichlet_min: no free cells in region");

    std::vector<double> diag(n, 0.0), b(n, 0.0);
    std::vector<std::vector<std::pair<int, double>>> offdiag(n);
    for (int f : region.face_ids) {
        const int k = t.faces[f].k, l = t.faces[f].l;
        const double w = theta.weight[f];
        if (idx[k] >= 0) diag[idx[k]] += w;
        if (idx[l] >= 0) diag[idx[l]] += w;
        if (idx[k] >= 0 && idx[l] >= 0) {
            offdiag[idx[k]].push_back({idx[l], -w});
            offdiag[idx[l]].push_back({idx[k], -w});
        } else if (idx[k] >= 0) {
            b[idx[k]] += w * phi[l];
        } else if (idx[l] >= 0) {
            b[idx[l]] += w * phi[k];
        }
    }

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            for (const auto& [j, w] : offdiag[i]) s += w * x[j];
            y[i] = s;
        }
    };

    // Jacobi-preconditioned CG.
    std::vector<double> x(n), r(n), z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) x[i] = phi[cells[i]];  // warm start from the data
    apply(x, Ap);
    double bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
        r[i] = b[i] - Ap[i];
        bnorm += b[i] * b[i];
    }
    bnorm = std::sqrt(std::max(bnorm, 1e-300));
    double rz = 0.0;
    for (int i = 0; i < n; ++i) {
        z[i] = r[i] / diag[i];
        p[i] = z[i];
        rz += r[i] * z[i];
    }
    int it = 0;
    for (; it < 10 * n + 100; ++it) {
        double rnorm = 0.0;
        for (int i = 0; i < n; ++i) rnorm += r[i] * r[i];
        if (std::sqrt(rnorm) <= 1e-12 * bnorm || rz == 0.0) break;
        apply(p, Ap);
        double pAp = 0.0;
        for (int i = 0; i < n; ++i) pAp += p[i] * Ap[i];
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rz_new = 0.0;
        for (int i = 0; i < n; ++i) {
            z[i] = r[i] / diag[i];
            rz_new += r[i] * z[i];
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    DirichletResult res;
    res.iterations = it;
    res.minimizer = phi;
    for (int i = 0; i < n; ++i) res.minimizer[cells[i]] = x[i];
    res.value = localized_fisher(t, res.minimizer, region, theta);
    apply(x, Ap);
    for (int i = 0; i < n; ++i)
        res.first_variation = std::max(res.first_variation, std::abs(Ap[i] - b[i]));
    return res;
}

double amin_residual(const Tessellation& t, const JointMeasure& theta, const Vec& x,
                     const Vec& xi, double eps) {
    Box probe;
    for (int i = 0; i < t.dim; ++i) {
        probe.lo[i] = x[i] - 0.5 * eps;
        probe.hi[i] = x[i] + 0.5 * eps;
    }
    const Restriction region = restrict(t, probe);
    std::vector<double> phi(t.n_cells());
    for (const Cell& c : t.cells) phi[c.id] = dot(xi, c.centroid - x);
    const double full = localized_fisher(t, phi, region, theta);
    return full - dirichlet_min(t, phi, region, theta).value;
}

std::vector<ProbeEstimate> estimate_limit_tensor(const std::vector<TensorStudyInput>& runs,
                                                 const std::vector<Vec>& probe_centers,
                                                 double eps, double c_zeta) {
    if (runs.size() < 3)
        throw std::invalid_argument("estimate_limit_tensor: need at least 3 mesh levels");
    std::vector<TensorStudyInput> sorted = runs;
    std::sort(sorted.begin(), sorted.end(),
              [](const TensorStudyInput& a, const TensorStudyInput& b) { return a.h > b.h; });

    std::vector<ProbeEstimate> out;
    for (const Vec& x : probe_centers) {
        ProbeEstimate pe;
        pe.center = x;
        pe.eps = eps;
        for (const auto& run : sorted) {
            const Tessellation& t = *run.data->tess;
            Box probe;
            for (int i = 0; i < t.dim; ++i) {
                probe.lo[i] = x[i] - 0.5 * eps;
                probe.hi[i] = x[i] + 0.5 * eps;
            }
            const TensorField field = local_tensor(t, run.data->kappa);
            pe.h_values.push_back(run.h);
            pe.per_h.push_back(average_tensor(field, run.data->pi, probe, true));
        }
        // Richardson in h assuming first-order bias from boundary cells.
        const Mat2& coarse = pe.per_h[pe.per_h.size() - 2];
        const Mat2& fine = pe.per_h.back();
        const double hc = pe.h_values[pe.h_values.size() - 2], hf = pe.h_values.back();
        const double q = hc / hf;
        pe.extrapolated = (fine * q - coarse) * (1.0 / (q - 1.0));
        const auto ev = pe.extrapolated.eigenvalues();
        if (sorted.front().data->tess->dim == 1) {
            pe.lambda = pe.Lambda = pe.extrapolated.a11;
        } else {
            pe.lambda = ev[0];
            pe.Lambda = ev[1];
        }
        const AssumptionReport ar = check_assumptions(*sorted.back().data->tess,
                                                      sorted.back().data->pi,
                                                      sorted.back().data->theta);
        pe.Lambda_bound = 2.0 * ar.c_kappa;
        pe.lambda_bound = 2.0 * ar.c_lower * ar.pi_min / (c_zeta * ar.pi_max);
        out.push_back(std::move(pe));
    }
    return out;
}

}  // namespace ggf
