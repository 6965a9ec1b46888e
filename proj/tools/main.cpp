#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ggf/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"reversible random walks on tessellations: studies and audits"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    int jobs = 1;
    std::uint64_t seed = 12345;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "scenario JSON")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--jobs", jobs, "worker count")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "RNG seed for randomized fixtures");
    };

    CLI::App* check = app.add_subcommand("check", "assumption audits only");
    CLI::App* run = app.add_subcommand("run", "full convergence study");
    CLI::App* tensor = app.add_subcommand("tensor", "homogenization probes only");
    CLI::App* plot = app.add_subcommand("plot", "re-emit plots from study.csv");
    add_common(check, true);
    add_common(run, true);
    add_common(tensor, true);
    add_common(plot, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (plot->parsed()) {
            ggf::replot_from_csv(out_dir);
            std::printf("plots re-emitted to %s\n", out_dir.c_str());
            return 0;
        }
        const ggf::Scenario sc = ggf::load_scenario(config_path);
        ggf::StudyResult result;
        if (check->parsed()) result = ggf::run_check(sc, out_dir, seed);
        if (tensor->parsed()) result = ggf::run_tensor(sc, out_dir, seed);
        if (run->parsed()) result = ggf::run_scenario(sc, out_dir, jobs, seed);
        for (const ggf::StudyRow& r : result.rows)
            std::printf("h=%-10.6g dt=%-10.6g l1=%-12.6g edb=%-12.6g c_kappa=%-10.6g\n",
                        r.h, r.dt, r.l1_error_at_T, r.edb_residual, r.c_kappa);
        if (!result.pass) {
            for (const std::string& f : result.failures)
                std::fprintf(stderr, "FAIL: %s\n", f.c_str());
            return 1;
        }
        std::printf("ok: %s\n", result.name.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
