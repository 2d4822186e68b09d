// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "higgslab/experiments.hpp"
#include "higgslab/field_io.hpp"
#include "higgslab/geometry.hpp"
#include "higgslab/path.hpp"
#include "higgslab/toda.hpp"

using namespace higgslab;

namespace {

int failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

struct DiskSolve {
    ChartPtr chart;
    BackgroundMetric metric;
    HiggsField phi;
    TodaSystem sys;
    Solution sol;
};

DiskSolve disk_solve(int n, const PolyZ& qn, int nx, double r_max = 0.8) {
    DiskSolve s;
    ChartSpec spec;
    spec.kind = ChartKind::Disk;
    spec.r_max = r_max;
    spec.nx = spec.ny = nx;
    s.chart = build_chart(spec);
    s.metric = hyperbolic_factor(s.chart);
    std::vector<PolyZ> qs(n - 1);
    qs[n - 2] = qn;
    s.phi = build_hitchin_section(s.chart, qs);
    s.sys = assemble_cyclic(s.phi, s.metric);
    s.sol = solve_newton(s.sys);
    return s;
}

std::string fmt(double x) { return format_double(x); }

cplx random_cplx(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return {d(gen), d(gen)};
}

Mat random_traceless(std::mt19937_64& gen, int n) {
    Mat m(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) m(r, c) = random_cplx(gen);
    m -= (m.trace() / double(n)) * Mat::Identity(n, n);
    return m;
}

Mat random_metric(std::mt19937_64& gen, int n) {
    const Mat g = random_traceless(gen, n) + 0.5 * Mat::Identity(n, n);
    Mat h = g * g.adjoint() + 0.3 * Mat::Identity(n, n);
    h /= std::pow(std::abs(h.determinant()), 1.0 / n);
    return h;
}

// 1. Fuchsian oracle, rank 2.
void criterion1() {
    Timer timer;
    DiskSolve s = disk_solve(2, PolyZ(), 129);
    double udev = 0;
    for (int j = 1; j < s.chart->ny - 1; ++j)
        for (int i = 1; i < s.chart->nx - 1; ++i)
            udev = std::max(udev, std::abs(s.sol.u(i, j) - 0.5 * std::log(2.0)));
    const ScalarField e = energy_density(s.phi, harmonic_metric(s.sol), s.metric);
    double edev = 0;
    for (int j = 1; j < s.chart->ny - 1; ++j)
        for (int i = 1; i < s.chart->nx - 1; ++i) edev = std::max(edev, std::abs(e(i, j) - 2.0));
    const double secs = timer.seconds();
    report(1, "Fuchsian oracle, rank 2",
           s.sol.converged && udev <= 1e-8 && edev <= 1e-7 && secs <= 10.0,
           "sup|u-log(2)/2|=" + fmt(udev) + ", sup|e-2|=" + fmt(edev) + ", " + fmt(secs) + "s");
}

// 2. Fuchsian oracle, rank 3.
void criterion2() {
    DiskSolve s = disk_solve(3, PolyZ(), 129);
    const ScalarField e = energy_density(s.phi, harmonic_metric(s.sol), s.metric);
    double edev = 0;
    for (int j = 1; j < s.chart->ny - 1; ++j)
        for (int i = 1; i < s.chart->nx - 1; ++i) edev = std::max(edev, std::abs(e(i, j) - 12.0));
    report(2, "Fuchsian oracle, rank 3", s.sol.converged && edev <= 1e-7,
           "sup|e-12|=" + fmt(edev));
}

// 3. Torus constant oracle.
void criterion3() {
    ChartSpec spec;
    spec.kind = ChartKind::Torus;
    spec.nx = spec.ny = 64;
    spec.x0 = 0;
    spec.x1 = 1;
    spec.y0 = 0;
    spec.y1 = 1;
    auto chart = build_chart(spec);
    auto metric = flat_metric(chart, 1.0);
    HiggsField phi = build_cyclic(chart, {PolyZ(1.0), PolyZ(cplx{0.7, 0})});
    TodaSystem sys = assemble_cyclic(phi, metric);
    Solution sol = solve_newton(sys);
    double hdev = 0;
    const double expect = std::pow(0.7, -0.5);
    for (double v : sol.log_h[0].v) hdev = std::max(hdev, std::abs(std::exp(v) - expect));
    const double mres = residual_matrix(sol, phi).sup;
    const MetricField h = harmonic_metric(sol);
    const double bsup = sup_norm(bracket_norm(bracket(phi, adjoint_higgs(phi, h)), h, metric));
    report(3, "torus constant oracle",
           sol.converged && hdev <= 1e-10 && mres <= 1e-10 && bsup <= 1e-12,
           "sup|h1-0.7^(-1/2)|=" + fmt(hdev) + ", matrix residual=" + fmt(mres) +
               ", bracket=" + fmt(bsup));
}

// 4. Claims suite: rank 2/3 margins, rank 4/6 chains.
void criterion4() {
    bool pass = true;
    std::string detail;
    const struct {
        int n;
        const char* q;
    } cases[] = {{2, "0.3z"}, {3, "z"}, {4, "0.3z"}, {6, "0.3z"}};
    for (const auto& c : cases) {
        DiskSolve s = disk_solve(c.n, PolyZ::parse(c.q), 129);
        if (!s.sol.converged) {
            pass = false;
            detail += "rank " + std::to_string(c.n) + ": no convergence; ";
            continue;
        }
        const ClaimsReport rep = claims_margin(s.sys, s.sol);
        pass = pass && rep.min_margin > 1e-8;
        detail += "rank " + std::to_string(c.n) + " min margin " + fmt(rep.min_margin) + "; ";
    }
    report(4, "claims suite (rank 2/3 margins, rank 4/6 chains)", pass, detail);
}

// 5. Curvature constants.
void criterion5() {
    std::mt19937_64 gen(20240811u);
    double dev2 = 0;
    int used = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const Mat phi = random_traceless(gen, 2);
        const Mat h = random_metric(gen, 2);
        const auto k = sectional_curvature_pt(phi, h);
        if (!k) continue;
        ++used;
        dev2 = std::max(dev2, std::abs(*k + 0.5));
    }
    DiskSolve s = disk_solve(2, PolyZ::parse("0.3z"), 65);
    const auto ks = sectional_curvature(s.phi, harmonic_metric(s.sol));
    for (int p = 0; p < s.chart->num_nodes(); ++p)
        if (!ks.mask[p]) dev2 = std::max(dev2, std::abs(ks.k[p] + 0.5));

    double worst = -std::numeric_limits<double>::infinity();
    for (int n : {2, 3, 4})
        for (int rep = 0; rep < 10000; ++rep) {
            const Mat phi = random_traceless(gen, n);
            const Mat h = random_metric(gen, n);
            const auto k = sectional_curvature_pt(phi, h);
            if (k) worst = std::max(worst, *k);
        }
    report(5, "curvature constants",
           used >= 90 && dev2 <= 1e-9 && worst <= 1e-9,
           "sup|k+1/2|=" + fmt(dev2) + " over " + std::to_string(used) +
               " rank-2 samples + solved family, max k over 3x10^4 samples=" + fmt(worst));
}

// 6. Pullback/Hopf formulas.
void criterion6() {
    DiskSolve s = disk_solve(2, PolyZ::parse("0.3z"), 129);
    const auto pb = pullback_metric(s.phi, harmonic_metric(s.sol));
    const auto q2 = s.phi.cyclic_entries()[1];
    const ScalarField q2n = conformal_norm_sq(q2, 2, s.metric);
    double dev20 = 0, dev11 = 0;
    for (int j = 1; j < s.chart->ny - 1; ++j)
        for (int i = 1; i < s.chart->nx - 1; ++i) {
            const int p = s.chart->index(i, j);
            dev20 = std::max(dev20, std::abs(pb.p20[p] - 8.0 * q2[p]) / (1 + std::abs(8.0 * q2[p])));
            const double u = s.sol.u[p];
            const double want = 4.0 * (std::exp(-2 * u) + q2n[p] * std::exp(2 * u)) * s.metric.g0[p];
            dev11 = std::max(dev11, std::abs(pb.p11[p] - want) / want);
        }
    // Discrete holomorphy of the Hopf field at O(h^2): refinement ratio with a
    // cubic differential (for the 0.3z family the discrete dzbar is exact).
    double sup_lin = 0;
    {
        const ComplexField dh = dzbar(hopf_differential(s.phi));
        for (int j = 1; j < s.chart->ny - 1; ++j)
            for (int i = 1; i < s.chart->nx - 1; ++i) sup_lin = std::max(sup_lin, std::abs(dh(i, j)));
    }
    double sup_cubic[2];
    const int grids[2] = {65, 129};
    for (int k = 0; k < 2; ++k) {
        DiskSolve sc = disk_solve(2, PolyZ::parse("0.2z^3"), grids[k]);
        const ComplexField dh = dzbar(hopf_differential(sc.phi));
        double m = 0;
        for (int j = 1; j < sc.chart->ny - 1; ++j)
            for (int i = 1; i < sc.chart->nx - 1; ++i) m = std::max(m, std::abs(dh(i, j)));
        sup_cubic[k] = m;
    }
    const double ratio = sup_cubic[0] / sup_cubic[1];
    report(6, "pullback/Hopf formulas",
           s.sol.converged && dev20 <= 1e-10 && dev11 <= 1e-10 && sup_lin <= 1e-12 && ratio >= 3.0,
           "rel dev p20=" + fmt(dev20) + ", p11=" + fmt(dev11) +
               ", dzbar Hopf refinement ratio=" + fmt(ratio));
}

// 7. Monotonicity sweep.
void criterion7() {
    Timer timer;
    ConfigDoc doc = ConfigDoc::parse_text(
        "experiment = sweep-t\n"
        "rank = 2\n"
        "grid = 129\n"
        "q = 0.3z\n"
        "t_grid = 1 2 4 8\n");
    const SweepReport rep = sweep_scale(parse_experiment(doc));
    bool increasing = rep.records.size() == 4;
    int violations = 0;
    for (size_t k = 0; k < rep.records.size(); ++k) {
        if (k > 0 && rep.records[k].energy <= rep.records[k - 1].energy) increasing = false;
        violations += rep.records[k].violations_vs_prev;
    }
    const double secs = timer.seconds();
    report(7, "monotonicity sweep", increasing && violations == 0 && secs <= 120.0,
           std::string("E strictly increasing=") + (increasing ? "yes" : "no") +
               ", violations=" + std::to_string(violations) + ", " + fmt(secs) + "s");
}

// 8. Decoupling rate.
void criterion8() {
    ConfigDoc doc = ConfigDoc::parse_text(
        "experiment = decouple\n"
        "rank = 2\n"
        "grid = 129\n"
        "q = z\n"
        "exclude_radius = 0.2\n"
        "t_grid = 1 2 3 4 5 6 7 8\n");
    const SweepReport rep = decoupling_rate(parse_experiment(doc));
    report(8, "decoupling rate",
           rep.fit_done && rep.eps_hat > 0 && rep.r_squared >= 0.98,
           "eps_hat=" + fmt(rep.eps_hat) + ", R^2=" + fmt(rep.r_squared));
}

// 9. Convergence order of u under grid refinement.
void criterion9() {
    const PolyZ q = PolyZ::parse("1.5 + 2z");
    DiskSolve s33 = disk_solve(2, q, 33);
    DiskSolve s65 = disk_solve(2, q, 65);
    DiskSolve s129 = disk_solve(2, q, 129);
    auto diff = [](const DiskSolve& coarse, const DiskSolve& fine, int stride) {
        double d = 0;
        for (int j = 1; j < coarse.chart->ny - 1; ++j)
            for (int i = 1; i < coarse.chart->nx - 1; ++i)
                d = std::max(d, std::abs(coarse.sol.u(i, j) - fine.sol.u(stride * i, stride * j)));
        return d;
    };
    const double d1 = diff(s33, s65, 2);
    const double d2 = diff(s65, s129, 2);
    const double order = std::log2(d1 / d2);
    report(9, "convergence order of u",
           s33.sol.converged && s65.sol.converged && s129.sol.converged && order >= 1.7,
           "|u33-u65|=" + fmt(d1) + ", |u65-u129|=" + fmt(d2) + ", order=" + fmt(order));
}

// 10. Algebra suite over randomized inputs with a fixed seed.
void criterion10() {
    std::mt19937_64 gen(424242u);
    ChartSpec spec;
    spec.kind = ChartKind::Disk;
    spec.r_max = 0.8;
    spec.nx = spec.ny = 17;
    auto chart = build_chart(spec);

    bool pass = true;
    std::string detail;

    // C*-equivariance of the fibration base: p_j(t phi) = t^j p_j(phi).
    double dev_fib = 0;
    for (int n : {2, 3, 4, 5}) {
        std::vector<PolyZ> qs;
        for (int d = 2; d <= n; ++d) qs.push_back(PolyZ(random_cplx(gen)));
        HiggsField phi = build_hitchin_section(chart, qs);
        const cplx t = random_cplx(gen) + cplx{1.5, 0};
        const auto pb = fibration_base(phi);
        const auto ps = fibration_base(scale_action(t, phi));
        for (int jdx = 2; jdx <= n; ++jdx) {
            const cplx tj = std::pow(t, jdx);
            for (int p = 0; p < chart->num_nodes(); ++p) {
                const cplx want = tj * pb[jdx - 2][p];
                dev_fib = std::max(dev_fib,
                                   std::abs(ps[jdx - 2][p] - want) / (1.0 + std::abs(want)));
            }
        }
    }
    pass = pass && dev_fib <= 1e-12;
    detail += "fibration equivariance dev=" + fmt(dev_fib);

    // Adjoint involution, bracket tracelessness and form-level skew-adjointness.
    double dev_inv = 0, dev_tr = 0, dev_skew = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + rep % 3;
        const Mat a = random_traceless(gen, n);
        const Mat h = random_metric(gen, n);
        dev_inv = std::max(dev_inv, (adjoint_pt(adjoint_pt(a, h), h) - a).norm() / a.norm());
        const Mat B = bracket_pt(a, adjoint_pt(a, h));
        dev_tr = std::max(dev_tr, std::abs(B.trace()) / (1 + B.norm()));
        // As a (1,1)-form the bracket is skew-adjoint: conj(dz^dzbar) flips sign.
        dev_skew = std::max(dev_skew, (-adjoint_pt(B, h) + B).norm() / (1 + B.norm()));
    }
    pass = pass && dev_inv <= 1e-10 && dev_tr <= 1e-12 && dev_skew <= 1e-10;
    detail += ", adjoint involution=" + fmt(dev_inv) + ", bracket trace=" + fmt(dev_tr) +
              ", skew=" + fmt(dev_skew);

    // Vector distance: antisymmetry and zero sum.
    double dev_sum = 0, dev_anti = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + rep % 3;
        const Mat ha = random_metric(gen, n);
        const Mat hb = random_metric(gen, n);
        const Eigen::VectorXd ab = vec_distance(ha, hb);
        const Eigen::VectorXd ba = vec_distance(hb, ha);
        dev_sum = std::max(dev_sum, std::abs(ab.sum()));
        for (int i = 0; i < n; ++i) dev_anti = std::max(dev_anti, std::abs(ab(i) + ba(n - 1 - i)));
    }
    pass = pass && dev_sum <= 1e-10 && dev_anti <= 1e-10;
    detail += ", vec distance sum=" + fmt(dev_sum) + ", antisymmetry=" + fmt(dev_anti);

    report(10, "algebra suite", pass, detail);
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
