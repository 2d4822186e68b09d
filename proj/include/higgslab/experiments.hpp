#pragma once

// Configuration-driven experiment runners: single solves, claim suites,
// C*-sweeps, decoupling-rate fits, WKB path reports, curvature scans and
// energy-domination checks. Each runner writes field snapshots, CSV tables,
// SVG plots and a summary.json under the configured output directory.

#include "higgslab/config.hpp"
#include "higgslab/geometry.hpp"
#include "higgslab/toda.hpp"

namespace higgslab {

struct SolveOutcome {
    Problem problem;
    TodaSystem sys;
    Solution sol;
};

// Build the configured problem, scale the Higgs field by t and solve.
SolveOutcome solve_problem(const ExperimentConfig& cfg, double t_scale = 1.0);

struct SweepRecord {
    double t = 0;
    bool converged = false;
    int iterations = 0;
    double final_residual = 0;
    double energy = 0;           // total energy E(t)
    double bracket_sup = 0;      // sup ||[t phi, (t phi)^{*_{H_t}}]|| = t^2 * bare_bracket_sup
    double bare_bracket_sup = 0; // sup ||[phi, phi^{*_{H_t}}]||, the decoupling quantity
    int violations_vs_prev = 0;  // pointwise energy-density monotonicity violations
};

struct SweepReport {
    std::vector<SweepRecord> records;  // ordered by t
    // Least-squares fit log s(t) = log C - eps * t on s = bare_bracket_sup
    // over records with s > 0. (The t^2-weighted curvature-norm form of the
    // same quantity is recorded alongside; its polynomial prefactor dominates
    // small t and only the bare bracket exposes the exponential trend there.)
    double c_hat = 0, eps_hat = 0, r_squared = 0;
    bool fit_done = false;
    bool exact_zero = false;    // all bracket sups vanished (exact decoupling)
    bool inconclusive = false;  // fit quality below the acceptance threshold
    bool aborted = false;       // a solve failed; records stop at that t
    std::string failure;
};

// Solves t * phi for every t in the grid (independent solves run concurrently)
// and records energy plus pointwise monotonicity violations at the given
// tolerance. A failed solve aborts the sweep with the partial report.
SweepReport sweep_scale(const ExperimentConfig& cfg, double mono_tol = 1e-8);

// Decoupling quantity s(t) = sup ||[t phi, (t phi)^{*_{H_t}}]|| over the
// evaluation region (interior, inner rho fraction, |z| > exclude_radius, free
// of discriminant nodes) and the exponential-decay fit.
SweepReport decoupling_rate(const ExperimentConfig& cfg);

struct WkbRow {
    double t = 0;
    std::vector<double> d_over_t;  // (1/t) vec-distance of endpoint metrics, descending
};

struct WkbReport {
    std::vector<double> alpha;  // ordered by descending Re(a_i)
    std::vector<WkbRow> rows;
    std::string label = "exploratory: frame-dependent, parallel transport omitted";
};

WkbReport wkb_report(const ExperimentConfig& cfg);

// Dispatch on cfg.kind; writes artifacts under cfg.out. Returns the process
// exit code (0 success, 1 solver/runtime failure).
int run_experiment(const ExperimentConfig& cfg);

} // namespace higgslab
