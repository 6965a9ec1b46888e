#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ggf/homogenization.hpp"
#include "ggf/limit_pde.hpp"

namespace ggf {

/// One study configuration, parsed from a strict JSON document.
struct Scenario {
    std::string name;

    // tessellation
    std::string builder;          // lattice | tilted | mixed1d | voronoi
    int dim = 2;
    std::vector<double> h_list;   // descending after parse
    std::vector<double> box_lengths{1.0, 1.0};
    double alpha = 0.0;           // tilted
    int voronoi_seeds = 50;

    // kernel: theta = c |(K|L)| / |x_L - x_K| with axis-dependent c, or
    // uniform jump rates kappa = rate_over_h2 / h^2 on every face
    double c_iso = 0.5;
    bool axis_kernel = false;
    double c_axis[2] = {0.5, 0.5};
    bool uniform_rate_kernel = false;
    double rate_over_h2 = 0.5;

    // potential catalog: zero | linear | gaussian-well
    std::string potential = "zero";
    Vec slope{0.0, 0.0};
    double well_depth = 1.0, well_width = 0.25;
    Vec well_center{0.5, 0.5};

    // initial condition catalog: equilibrium | cosine-bump | cell-indicator
    std::string initial = "cosine-bump";
    Vec indicator_point{0.5, 0.5};

    double horizon = 0.1;
    double dt_factor = 0.25;      // dt = dt_factor * h^2
    double edb_bound = 1e-2;      // hard-invariant threshold for exit code

    // tensor probes
    std::vector<Vec> probe_centers;
    double probe_eps = 0.25;
    double c_zeta = 1.0;

    // reference solve
    double reference_dt = 1e-4;
    double reference_delta = 0.0;  // 0 = auto (min h / 8)

    bool export_trajectories = false;
};

Scenario load_scenario(const std::string& path);

std::function<double(const Vec&)> make_potential(const Scenario& sc);
std::function<double(const Vec&)> make_initial_density(const Scenario& sc,
                                                       const Tessellation& t);

struct StudyRow {
    double h = 0.0, dt = 0.0;
    double l1_error_at_T = 0.0;
    double edb_residual = 0.0;
    double entropy_initial = 0.0, entropy_final = 0.0;
    double fisher_time_integral = 0.0;
    double c_kappa = 0.0, aloc_max = 0.0;
    double db_residual = 0.0, mass_drift = 0.0, min_density = 0.0;
    bool entropy_monotone = true;
    Mat2 tensor_probe;  // pi-weighted probe average at this h
};

struct StudyResult {
    std::string name;
    std::vector<StudyRow> rows;      // descending h
    std::vector<std::string> failures;
    bool pass = true;
};

/// Full pipeline: builds every h level, audits, integrates, reconstructs,
/// compares against the limit-equation reference, writes artifacts to
/// out_dir, and returns the per-h table.
StudyResult run_scenario(const Scenario& sc, const std::string& out_dir, int jobs,
                         std::uint64_t seed);

/// Assumption audits only; writes assumption reports and returns pass/fail.
StudyResult run_check(const Scenario& sc, const std::string& out_dir, std::uint64_t seed);

/// Homogenization only: probe tensor estimates across the h list.
StudyResult run_tensor(const Scenario& sc, const std::string& out_dir, std::uint64_t seed);

/// Re-emit plot data + SVG from a study table (also called by run_scenario).
void emit_plots(const StudyResult& result, const std::string& out_dir);

/// Re-read study.csv from out_dir and re-emit plots.
void replot_from_csv(const std::string& out_dir);

/// FNV-1a 64-bit content hash, as used by manifest.json.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace ggf
