// Command-line driver: reads a key-value experiment configuration, runs the
// selected experiment and writes its artifacts (field snapshots, CSV tables,
// SVG plots, summary.json) to the output directory.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "higgslab/config.hpp"
#include "higgslab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"higgslab: a numerical laboratory for cyclic Higgs bundles on coordinate charts"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out;
    int grid = 0;
    double tol = 0;
    unsigned seed = 0;
    bool have_out = false, have_grid = false, have_tol = false, have_seed = false;
    app.add_option("--config", config_path, "experiment configuration file")->required();
    app.add_option("--out", out, "output directory (overrides config)")->each([&](const std::string&) {
        have_out = true;
    });
    app.add_option("--grid", grid, "grid points per side (overrides config)")->each([&](const std::string&) {
        have_grid = true;
    });
    app.add_option("--tol", tol, "solver residual tolerance (overrides config)")->each([&](const std::string&) {
        have_tol = true;
    });
    app.add_option("--seed", seed, "seed for randomized scans (overrides config)")->each([&](const std::string&) {
        have_seed = true;
    });

    using higgslab::ExperimentKind;
    const std::pair<const char*, ExperimentKind> kinds[] = {
        {"solve", ExperimentKind::Solve},
        {"claims", ExperimentKind::Claims},
        {"sweep-t", ExperimentKind::SweepT},
        {"decouple", ExperimentKind::Decouple},
        {"wkb", ExperimentKind::Wkb},
        {"curvature-scan", ExperimentKind::CurvatureScan},
        {"domination", ExperimentKind::Domination},
    };
    for (const auto& [name, kind] : kinds) app.add_subcommand(name, higgslab::kind_name(kind));

    CLI11_PARSE(app, argc, argv);

    higgslab::CliOverrides ov;
    for (const auto& [name, kind] : kinds)
        if (app.get_subcommand(name)->parsed()) ov.kind = kind;
    if (have_out) ov.out = out;
    if (have_grid) ov.grid = grid;
    if (have_tol) ov.tol = tol;
    if (have_seed) ov.seed = seed;

    try {
        const auto doc = higgslab::ConfigDoc::parse_file(config_path);
        const auto cfg = higgslab::parse_experiment(doc, ov);
        return higgslab::run_experiment(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
