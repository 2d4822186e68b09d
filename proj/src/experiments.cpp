#include "higgslab/experiments.hpp"

#include <cmath>
#include <future>
#include <iostream>

#include <nlohmann/json.hpp>

#include "higgslab/field_io.hpp"
#include "higgslab/report.hpp"

namespace higgslab {

using json = nlohmann::ordered_json;

SolveOutcome solve_problem(const ExperimentConfig& cfg, double t_scale) {
    SolveOutcome out{materialize(cfg), {}, {}};
    HiggsField phi_t = t_scale == 1.0 ? out.problem.phi : scale_action(t_scale, out.problem.phi);
    AssembleOptions aopts;
    aopts.boundary = cfg.boundary;
    out.sys = assemble_cyclic(phi_t, out.problem.metric, aopts);
    SolverConfig scfg;
    scfg.tol = cfg.tol;
    scfg.max_iter = cfg.max_iter;
    out.sol = solve_newton(out.sys, scfg);
    return out;
}

namespace {

// Evaluation-region predicate: interior, inner rho fraction of the chart,
// outside the excluded disk around the origin.
struct Region {
    const Chart* chart;
    double rho = 1.0;
    double exclude_radius = 0.0;

    bool contains(int i, int j) const {
        const Chart& c = *chart;
        if (!c.is_interior(i, j)) return false;
        if (c.kind == ChartKind::Disk) {
            const double cx = 0.5 * (c.x0 + c.x1), cy = 0.5 * (c.y0 + c.y1);
            if (std::abs(c.x(i) - cx) > 0.5 * rho * (c.x1 - c.x0)) return false;
            if (std::abs(c.y(j) - cy) > 0.5 * rho * (c.y1 - c.y0)) return false;
        }
        if (exclude_radius > 0 && std::abs(c.z(i, j)) < exclude_radius) return false;
        return true;
    }
};

double region_sup(const ScalarField& f, const Region& reg) {
    double m = 0;
    for (int j = 0; j < f.chart->ny; ++j)
        for (int i = 0; i < f.chart->nx; ++i)
            if (reg.contains(i, j)) m = std::max(m, std::abs(f(i, j)));
    return m;
}

ScalarField solved_bracket_norm(const SolveOutcome& so, const HiggsField& phi_t) {
    const MetricField h = harmonic_metric(so.sol);
    const MatrixField star = adjoint_higgs(phi_t, h);
    const MatrixField br = bracket(phi_t, star);
    return bracket_norm(br, h, so.problem.metric);
}

void fit_exponential(SweepReport& rep) {
    std::vector<double> ts, logs;
    for (const auto& r : rep.records)
        if (r.bare_bracket_sup > 0) {
            ts.push_back(r.t);
            logs.push_back(std::log(r.bare_bracket_sup));
        }
    rep.exact_zero = ts.empty();
    if (ts.size() < 2) return;
    const size_t m = ts.size();
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (size_t k = 0; k < m; ++k) {
        st += ts[k];
        sl += logs[k];
        stt += ts[k] * ts[k];
        stl += ts[k] * logs[k];
    }
    const double det = m * stt - st * st;
    if (det == 0) return;
    const double slope = (m * stl - st * sl) / det;
    const double inter = (sl - slope * st) / m;
    rep.eps_hat = -slope;
    rep.c_hat = std::exp(inter);
    double ss_res = 0, ss_tot = 0;
    const double mean = sl / m;
    for (size_t k = 0; k < m; ++k) {
        const double pred = inter + slope * ts[k];
        ss_res += (logs[k] - pred) * (logs[k] - pred);
        ss_tot += (logs[k] - mean) * (logs[k] - mean);
    }
    rep.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    rep.fit_done = true;
    rep.inconclusive = rep.r_squared < 0.95;
}

} // namespace

SweepReport sweep_scale(const ExperimentConfig& cfg, double mono_tol) {
    SweepReport rep;
    std::vector<std::future<std::pair<SolveOutcome, ScalarField>>> futures;
    for (double t : cfg.t_grid)
        futures.push_back(std::async(std::launch::async, [&cfg, t] {
            SolveOutcome so = solve_problem(cfg, t);
            const HiggsField phi_t = scale_action(t, so.problem.phi);
            const ScalarField e = energy_density(phi_t, harmonic_metric(so.sol), so.problem.metric);
            return std::make_pair(std::move(so), e);
        }));

    Region reg;
    ScalarField prev_e;
    for (size_t k = 0; k < futures.size(); ++k) {
        auto [so, e] = futures[k].get();
        if (!so.sol.converged) {
            rep.aborted = true;
            rep.failure = "solve at t=" + format_double(cfg.t_grid[k]) + " failed: " + so.sol.failure;
            break;
        }
        reg.chart = so.problem.chart.get();
        reg.rho = cfg.rho_int;
        SweepRecord rec;
        rec.t = cfg.t_grid[k];
        rec.converged = so.sol.converged;
        rec.iterations = so.sol.iterations;
        rec.final_residual = so.sol.final_residual;
        rec.energy = total_energy(e, so.problem.metric);
        const HiggsField phi_t = scale_action(rec.t, so.problem.phi);
        rec.bracket_sup = region_sup(solved_bracket_norm(so, phi_t), reg);
        rec.bare_bracket_sup = rec.bracket_sup / (rec.t * rec.t);
        if (k > 0) {
            const Chart& c = *e.chart;
            for (int j = 0; j < c.ny; ++j)
                for (int i = 0; i < c.nx; ++i)
                    if (c.is_interior(i, j) && prev_e(i, j) > e(i, j) + mono_tol)
                        ++rec.violations_vs_prev;
        }
        prev_e = e;
        rep.records.push_back(rec);
    }
    fit_exponential(rep);
    return rep;
}

// Nodes within `cells` (Chebyshev) of a set bit.
std::vector<std::uint8_t> mask_halo(const Chart& c, const std::vector<std::uint8_t>& mask, int cells) {
    std::vector<std::uint8_t> halo(c.num_nodes(), 0);
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            if (!mask[c.index(i, j)]) continue;
            for (int dj = -cells; dj <= cells; ++dj)
                for (int di = -cells; di <= cells; ++di) {
                    int ii = i + di, jj = j + dj;
                    if (c.kind == ChartKind::Torus) {
                        ii = c.wrap_x(ii);
                        jj = c.wrap_y(jj);
                    } else if (ii < 0 || jj < 0 || ii >= c.nx || jj >= c.ny) {
                        continue;
                    }
                    halo[c.index(ii, jj)] = 1;
                }
        }
    return halo;
}

SweepReport decoupling_rate(const ExperimentConfig& cfg) {
    // The evaluation region must avoid a neighborhood of the discriminant set
    // (the eigenvalue structure does not depend on t). With an explicit
    // exclude_radius the excluded set is the disk |z| < r around the origin;
    // otherwise a 5-cell halo of the discriminant nodes is excluded.
    Problem pr = materialize(cfg);
    const Chart& c = *pr.chart;
    Region reg{pr.chart.get(), cfg.rho_int, cfg.exclude_radius};
    const auto eig = eigen_field(pr.phi);
    std::vector<std::uint8_t> excluded(c.num_nodes(), 0);
    if (cfg.exclude_radius > 0) {
        for (int j = 0; j < c.ny; ++j)
            for (int i = 0; i < c.nx; ++i)
                if (reg.contains(i, j) && eig.mask[c.index(i, j)])
                    throw std::runtime_error(
                        "decoupling_rate: discriminant node inside the evaluation region at z=(" +
                        format_double(c.x(i)) + "," + format_double(c.y(j)) +
                        "); enlarge exclude_radius");
    } else {
        excluded = mask_halo(c, eig.mask, 5);
    }
    int region_nodes = 0;
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i)
            if (reg.contains(i, j) && !excluded[c.index(i, j)]) ++region_nodes;
    if (region_nodes == 0)
        throw std::runtime_error(
            "decoupling_rate: evaluation region is empty (discriminant covers the chart)");

    SweepReport rep;
    std::vector<std::future<std::pair<SolveOutcome, double>>> futures;
    for (double t : cfg.t_grid)
        futures.push_back(std::async(std::launch::async, [&cfg, t, &excluded] {
            SolveOutcome so = solve_problem(cfg, t);
            Region r{so.problem.chart.get(), cfg.rho_int, cfg.exclude_radius};
            const HiggsField phi_t = scale_action(t, so.problem.phi);
            double s = 0;
            if (so.sol.converged) {
                const ScalarField bn = solved_bracket_norm(so, phi_t);
                const Chart& cc = *so.problem.chart;
                for (int j = 0; j < cc.ny; ++j)
                    for (int i = 0; i < cc.nx; ++i)
                        if (r.contains(i, j) && !excluded[cc.index(i, j)])
                            s = std::max(s, std::abs(bn(i, j)));
            }
            return std::make_pair(std::move(so), s);
        }));
    for (size_t k = 0; k < futures.size(); ++k) {
        auto [so, s] = futures[k].get();
        if (!so.sol.converged)
            throw std::runtime_error("decoupling_rate: solve at t=" + format_double(cfg.t_grid[k]) +
                                     " failed: " + so.sol.failure);
        SweepRecord rec;
        rec.t = cfg.t_grid[k];
        rec.converged = true;
        rec.iterations = so.sol.iterations;
        rec.final_residual = so.sol.final_residual;
        rec.bracket_sup = s;
        rec.bare_bracket_sup = s / (rec.t * rec.t);
        rep.records.push_back(rec);
    }
    fit_exponential(rep);
    return rep;
}

WkbReport wkb_report(const ExperimentConfig& cfg) {
    if (!cfg.path) throw std::runtime_error("wkb: config needs a 'path = x0 y0 x1 y1' entry");
    Problem pr = materialize(cfg);
    const auto pa = path_alpha(pr.phi, *cfg.path);  // throws on critical paths
    WkbReport rep;
    rep.alpha.assign(pa.alpha.data(), pa.alpha.data() + pa.alpha.size());

    for (double t : cfg.t_grid) {
        SolveOutcome so = solve_problem(cfg, t);
        if (!so.sol.converged)
            throw std::runtime_error("wkb: solve at t=" + format_double(t) +
                                     " failed: " + so.sol.failure);
        const int n = so.sys.n;
        Mat h0 = Mat::Zero(n, n), h1 = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            h0(i, i) = std::exp(interp(so.sol.log_h[i], cfg.path->z0));
            h1(i, i) = std::exp(interp(so.sol.log_h[i], cfg.path->z1));
        }
        const Eigen::VectorXd d = vec_distance(h0, h1);
        WkbRow row;
        row.t = t;
        for (int i = 0; i < n; ++i) row.d_over_t.push_back(d(i) / t);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// --- artifact-writing runners -------------------------------------------------

namespace {

json solver_meta(const Solution& sol) {
    json j;
    j["converged"] = sol.converged;
    j["iterations"] = sol.iterations;
    j["final_residual"] = sol.final_residual;
    j["residual_trace"] = sol.residual_trace;
    j["wall_seconds"] = sol.wall_seconds;
    if (!sol.failure.empty()) j["failure"] = sol.failure;
    return j;
}

json config_meta(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = kind_name(cfg.kind);
    j["chart"] = cfg.chart.kind == ChartKind::Disk ? "disk" : "torus";
    j["grid"] = {cfg.chart.nx, cfg.chart.ny};
    if (cfg.chart.kind == ChartKind::Disk) j["r_max"] = cfg.chart.r_max;
    j["metric"] = cfg.metric_kind == BackgroundMetric::Kind::Hyperbolic ? "hyperbolic" : "flat";
    j["rank"] = cfg.higgs.rank;
    j["seed"] = cfg.seed;
    j["tol"] = cfg.tol;
    return j;
}

json stats_json(const FieldStats& st) {
    json j;
    j["min"] = st.min;
    j["max"] = st.max;
    j["mean"] = st.mean;
    return j;
}

// Named field files plus per-field min/max/mean and mask counts.
json write_geometry_report(const std::filesystem::path& dir, const HiggsField& phi,
                           const MetricField& h, const BackgroundMetric& metric, double rho_int) {
    const ScalarField e = energy_density(phi, h, metric);
    const ComplexField hopf = hopf_differential(phi);
    const auto pb = pullback_metric(phi, h);
    const auto ks = sectional_curvature(phi, h);

    write_field(dir / "energy_density.field", e);
    write_field(dir / "hopf.field", hopf);
    write_field(dir / "p11.field", pb.p11);
    write_field(dir / "p20.field", pb.p20);
    write_field(dir / "sectional_curvature.field", ks.k);

    json j;
    j["energy_density"] = stats_json(interior_stats(e, rho_int));
    j["total_energy"] = total_energy(e, metric);
    j["p11"] = stats_json(interior_stats(pb.p11, rho_int));
    double hopf_sup = 0;
    for (cplx v : hopf.v) hopf_sup = std::max(hopf_sup, std::abs(v));
    j["hopf_sup"] = hopf_sup;
    j["degenerate_nodes"] = pb.degenerate_count;
    j["sectional_curvature"] = stats_json(interior_stats(ks.k, rho_int));
    j["sectional_curvature_masked"] = ks.masked_count;
    // Gaussian curvature only exists for conformal (vanishing-Hopf) pullbacks.
    const double p11_sup = sup_norm(pb.p11);
    if (hopf_sup <= 1e-8 * std::max(1.0, p11_sup)) {
        const auto kappa = gaussian_curvature_conformal(pb.p11, hopf);
        write_field(dir / "gaussian_curvature.field", kappa.k);
        j["gaussian_curvature"] = stats_json(interior_stats(kappa.k, rho_int));
        j["gaussian_curvature_masked"] = kappa.masked_count;
    }
    return j;
}

int run_solve(const ExperimentConfig& cfg) {
    SolveOutcome so = solve_problem(cfg);
    const MetricField h = harmonic_metric(so.sol);
    const HiggsField& phi = so.problem.phi;

    std::filesystem::create_directories(cfg.out);
    write_field(cfg.out / "u.field", so.sol.u);
    write_field(cfg.out / "log_h1.field", so.sol.log_h[0]);

    json j = config_meta(cfg);
    j["solver"] = solver_meta(so.sol);
    j["u"] = stats_json(interior_stats(so.sol.u, cfg.rho_int));
    j["geometry"] = write_geometry_report(cfg.out, phi, h, so.problem.metric, cfg.rho_int);
    const auto mr = residual_matrix(so.sol, phi);
    j["matrix_residual_sup"] = mr.sup;
    write_json(cfg.out / "summary.json", j);

    std::cout << "solve: " << (so.sol.converged ? "converged" : "FAILED") << " in "
              << so.sol.iterations << " iterations, residual " << so.sol.final_residual << "\n";
    return so.sol.converged ? 0 : 1;
}

int run_claims(const ExperimentConfig& cfg) {
    SolveOutcome so = solve_problem(cfg);
    if (!so.sol.converged) {
        std::cout << "claims: solve failed: " << so.sol.failure << "\n";
        return 1;
    }
    ClaimsOptions copt;
    copt.rho_int = cfg.rho_int;
    const ClaimsReport rep = claims_margin(so.sys, so.sol, copt);

    std::filesystem::create_directories(cfg.out);
    CsvTable table;
    table.header = {"margin", "min", "i", "j", "x", "y"};
    json jm = json::array();
    for (const auto& m : rep.margins) {
        write_field(cfg.out / (m.name + ".field"), m.margin);
        table.add_row({m.name, format_double(m.min), std::to_string(m.imin), std::to_string(m.jmin),
                       format_double(so.problem.chart->x(m.imin)),
                       format_double(so.problem.chart->y(m.jmin))});
        json e;
        e["name"] = m.name;
        e["min"] = m.min;
        jm.push_back(e);
    }
    table.write(cfg.out / "claims.csv");
    json j = config_meta(cfg);
    j["solver"] = solver_meta(so.sol);
    j["margins"] = jm;
    j["min_margin"] = rep.min_margin;
    j["degenerate_qzero"] = rep.degenerate_qzero;
    write_json(cfg.out / "summary.json", j);

    std::cout << "claims: min interior margin " << rep.min_margin
              << (rep.degenerate_qzero ? " (degenerate: q=0)" : "") << "\n";
    return 0;
}

int run_sweep(const ExperimentConfig& cfg) {
    const SweepReport rep = sweep_scale(cfg);
    std::filesystem::create_directories(cfg.out);
    CsvTable table;
    table.header = {"t", "energy", "bracket_sup", "violations_vs_prev", "iterations", "residual"};
    PlotSeries es{"E(t)", {}, {}};
    for (const auto& r : rep.records) {
        table.add_row({r.t, r.energy, r.bracket_sup, double(r.violations_vs_prev),
                       double(r.iterations), r.final_residual});
        es.x.push_back(r.t);
        es.y.push_back(r.energy);
    }
    table.write(cfg.out / "sweep.csv");
    write_svg_plot(cfg.out / "energy_vs_t.svg",
                   {"total energy along the C*-sweep", "t", "E(t)", false, {es}});

    int violations = 0;
    bool increasing = true;
    for (size_t k = 0; k < rep.records.size(); ++k) {
        violations += rep.records[k].violations_vs_prev;
        if (k > 0 && rep.records[k].energy <= rep.records[k - 1].energy) increasing = false;
    }
    json j = config_meta(cfg);
    j["t_grid"] = cfg.t_grid;
    j["energy_strictly_increasing"] = increasing;
    j["pointwise_violations"] = violations;
    if (rep.aborted) j["aborted"] = rep.failure;
    json recs = json::array();
    for (const auto& r : rep.records) {
        json e;
        e["t"] = r.t;
        e["converged"] = r.converged;
        e["energy"] = r.energy;
        e["bracket_sup"] = r.bracket_sup;
        e["violations_vs_prev"] = r.violations_vs_prev;
        recs.push_back(e);
    }
    j["records"] = recs;
    write_json(cfg.out / "summary.json", j);
    if (rep.aborted) {
        std::cout << "sweep-t: ABORTED after " << rep.records.size() << " records (" << rep.failure
                  << ")\n";
        return 1;
    }
    std::cout << "sweep-t: " << rep.records.size() << " solves, energy "
              << (increasing ? "strictly increasing" : "NOT increasing") << ", " << violations
              << " pointwise violations\n";
    return 0;
}

int run_decouple(const ExperimentConfig& cfg) {
    const SweepReport rep = decoupling_rate(cfg);
    std::filesystem::create_directories(cfg.out);
    CsvTable table;
    table.header = {"t", "s", "t2_weighted_s", "iterations", "residual"};
    PlotSeries ss{"s(t)", {}, {}}, fit{"fit", {}, {}};
    for (const auto& r : rep.records) {
        table.add_row({r.t, r.bare_bracket_sup, r.bracket_sup, double(r.iterations),
                       r.final_residual});
        ss.x.push_back(r.t);
        ss.y.push_back(r.bare_bracket_sup);
        if (rep.fit_done) {
            fit.x.push_back(r.t);
            fit.y.push_back(rep.c_hat * std::exp(-rep.eps_hat * r.t));
        }
    }
    table.write(cfg.out / "decouple.csv");
    PlotSpec plot{"decoupling of the Hitchin equation", "t", "sup ||[phi, phi*_{H_t}]||", true, {ss}};
    if (rep.fit_done) plot.series.push_back(fit);
    write_svg_plot(cfg.out / "decouple.svg", plot);

    json j = config_meta(cfg);
    j["exclude_radius"] = cfg.exclude_radius;
    j["exact_zero"] = rep.exact_zero;
    if (rep.fit_done) {
        j["c_hat"] = rep.c_hat;
        j["eps_hat"] = rep.eps_hat;
        j["r_squared"] = rep.r_squared;
        j["inconclusive"] = rep.inconclusive;
        json fitres = json::array();
        for (const auto& r : rep.records)
            if (r.bare_bracket_sup > 0)
                fitres.push_back(std::log(r.bare_bracket_sup) -
                                 (std::log(rep.c_hat) - rep.eps_hat * r.t));
        j["fit_residuals"] = fitres;
    }
    write_json(cfg.out / "summary.json", j);
    if (rep.exact_zero)
        std::cout << "decouple: bracket norm identically zero (exact decoupling)\n";
    else if (rep.fit_done)
        std::cout << "decouple: eps_hat=" << rep.eps_hat << " R^2=" << rep.r_squared
                  << (rep.inconclusive ? " (inconclusive)" : "") << "\n";
    else
        std::cout << "decouple: not enough nonzero records for a fit\n";
    return 0;
}

int run_wkb(const ExperimentConfig& cfg) {
    const WkbReport rep = wkb_report(cfg);
    std::filesystem::create_directories(cfg.out);
    const int n = static_cast<int>(rep.alpha.size());
    CsvTable table;
    table.header = {"t"};
    for (int i = 1; i <= n; ++i) table.header.push_back("d" + std::to_string(i) + "_over_t");
    for (int i = 1; i <= n; ++i) table.header.push_back("two_alpha_" + std::to_string(i));
    for (int i = 1; i <= n; ++i) table.header.push_back("two_alpha_rev_" + std::to_string(i));
    for (const auto& row : rep.rows) {
        std::vector<double> vals{row.t};
        vals.insert(vals.end(), row.d_over_t.begin(), row.d_over_t.end());
        for (int i = 0; i < n; ++i) vals.push_back(2.0 * rep.alpha[i]);
        for (int i = n - 1; i >= 0; --i) vals.push_back(2.0 * rep.alpha[i]);
        table.add_row(vals);
    }
    table.write(cfg.out / "wkb.csv");

    json j = config_meta(cfg);
    j["label"] = rep.label;
    j["alpha"] = rep.alpha;
    write_json(cfg.out / "summary.json", j);
    std::cout << "wkb: " << rep.rows.size() << " rows (" << rep.label << ")\n";
    return 0;
}

int run_curvature_scan(const ExperimentConfig& cfg) {
    SolveOutcome so = solve_problem(cfg);
    if (!so.sol.converged) {
        std::cout << "curvature-scan: solve failed: " << so.sol.failure << "\n";
        return 1;
    }
    const MetricField h = harmonic_metric(so.sol);
    const HiggsField& phi = so.problem.phi;
    const CurvatureField ks = sectional_curvature(phi, h);
    const MatrixField br = bracket(phi, adjoint_higgs(phi, h));
    const ScalarField bn = bracket_norm(br, h, so.problem.metric);

    const Chart& c = *so.problem.chart;
    Region reg{&c, cfg.rho_int, 0.0};
    double kmax = -std::numeric_limits<double>::infinity();
    double bmin = std::numeric_limits<double>::infinity();
    int ki = -1, kj = -1, bi = -1, bj = -1;
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            if (!reg.contains(i, j)) continue;
            const int p = c.index(i, j);
            if (!ks.mask[p] && ks.k[p] > kmax) {
                kmax = ks.k[p];
                ki = i;
                kj = j;
            }
            if (bn[p] < bmin) {
                bmin = bn[p];
                bi = i;
                bj = j;
            }
        }

    std::filesystem::create_directories(cfg.out);
    write_field(cfg.out / "sectional_curvature.field", ks.k);
    write_field(cfg.out / "bracket_norm.field", bn);
    json j = config_meta(cfg);
    j["solver"] = solver_meta(so.sol);
    j["label"] = "numerical evidence, not proof";
    j["max_sectional_curvature"] = kmax;
    j["max_location"] = {c.x(ki), c.y(kj)};
    j["min_bracket_norm"] = bmin;
    j["min_bracket_location"] = {c.x(bi), c.y(bj)};
    j["masked_nodes"] = ks.masked_count;
    write_json(cfg.out / "summary.json", j);
    std::cout << "curvature-scan: max k_sigma=" << kmax << ", min ||[phi,phi*]||=" << bmin << "\n";
    return 0;
}

int run_domination(const ExperimentConfig& cfg) {
    SolveOutcome so = solve_problem(cfg);
    if (!so.sol.converged) {
        std::cout << "domination: solve failed: " << so.sol.failure << "\n";
        return 1;
    }
    const int n = so.sys.n;
    const double baseline = (std::pow(n, 4) - n * n) / 6.0;
    const ScalarField e =
        energy_density(so.problem.phi, harmonic_metric(so.sol), so.problem.metric);
    const FieldStats st = interior_stats(e, cfg.rho_int);

    double corner_sup = 0;
    for (double v : so.sys.gamma_sq[n - 1].v) corner_sup = std::max(corner_sup, v);

    std::filesystem::create_directories(cfg.out);
    write_field(cfg.out / "energy_density.field", e);
    json j = config_meta(cfg);
    j["solver"] = solver_meta(so.sol);
    j["baseline"] = baseline;
    j["min_interior_energy_density"] = st.min;
    j["min_margin"] = st.min - baseline;
    j["equality_case"] = corner_sup == 0;
    write_json(cfg.out / "summary.json", j);
    std::cout << "domination: min interior e(f) - " << baseline << " = " << st.min - baseline
              << (corner_sup == 0 ? " (equality case: q=0)" : "") << "\n";
    return 0;
}

} // namespace

int run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::Solve: return run_solve(cfg);
        case ExperimentKind::Claims: return run_claims(cfg);
        case ExperimentKind::SweepT: return run_sweep(cfg);
        case ExperimentKind::Decouple: return run_decouple(cfg);
        case ExperimentKind::Wkb: return run_wkb(cfg);
        case ExperimentKind::CurvatureScan: return run_curvature_scan(cfg);
        case ExperimentKind::Domination: return run_domination(cfg);
    }
    return 2;
}

} // namespace higgslab
