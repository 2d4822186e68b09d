#include <doctest.h>

#include <cmath>

#include "higgslab/geometry.hpp"
#include "higgslab/toda.hpp"
#include "test_util.hpp"

using namespace higgslab;

namespace {

HiggsField section_with_corner(const ChartPtr& chart, int n, const PolyZ& qn,
                               SectionNormalization norm = SectionNormalization::UnitSubdiagonal) {
    std::vector<PolyZ> qs(n - 1);
    qs[n - 2] = qn;
    return build_hitchin_section(chart, qs, norm);
}

} // namespace

TEST_CASE("constant oracle: torus algebra and Fuchsian constants") {
    auto torus = test::small_torus(16);
    auto flat = flat_metric(torus, 1.0);
    const cplx c{0.7, 0};
    HiggsField phi = build_cyclic(torus, {PolyZ(1.0), PolyZ(c)});
    const auto sol = constant_oracle(phi, flat);
    // h1^{-2} = |c|^2 h1^2 forces h1 = |c|^{-1/2}.
    CHECK(sol.log_h[0] == doctest::Approx(-0.5 * std::log(0.7)).epsilon(1e-14));
    CHECK(sol.log_h[0] + sol.log_h[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sol.weight[0] == 0.0);

    auto disk = test::small_disk(17);
    auto hyp = hyperbolic_factor(disk);
    HiggsField fuchs = section_with_corner(disk, 2, PolyZ());
    const auto fs = constant_oracle(fuchs, hyp);
    // exp(-2u) = 1/2 at rank 2: u = log c_1 = (1/2) log 2, weight 1/2.
    CHECK(fs.log_h[0] == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(fs.weight[0] == doctest::Approx(0.5));

    HiggsField fuchs3 = section_with_corner(disk, 3, PolyZ());
    const auto f3 = constant_oracle(fuchs3, hyp);
    CHECK(f3.log_h[0] == doctest::Approx(0.0).epsilon(1e-14));  // exp(-u) = 1 at rank 3
    CHECK(f3.weight[0] == doctest::Approx(1.0));

    // Nonzero corner on a hyperbolic chart has no constant solution.
    HiggsField withq = section_with_corner(disk, 2, PolyZ(cplx{0.3, 0}));
    CHECK_THROWS_AS(constant_oracle(withq, hyp), std::invalid_argument);
    // Vanishing torus entry likewise.
    HiggsField nil = build_cyclic(torus, {PolyZ(1.0), PolyZ()});
    CHECK_THROWS_AS(constant_oracle(nil, flat), std::invalid_argument);
}

TEST_CASE("rank-4 Fuchsian constants reproduce the energy density (n^4-n^2)/6 = 40") {
    auto disk = test::small_disk(17);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 4, PolyZ(), SectionNormalization::Weights);
    const auto cs = constant_oracle(phi, hyp);
    std::vector<ScalarField> logs;
    for (int i = 0; i < 4; ++i) {
        ScalarField l(disk);
        for (int p = 0; p < l.size(); ++p)
            l[p] = cs.log_h[i] - cs.weight[i] * std::log(hyp.g0[p]);
        logs.push_back(std::move(l));
    }
    const MetricField h = MetricField::from_logs(logs);
    const ScalarField e = energy_density(phi, h, hyp);
    for (int p = 0; p < e.size(); ++p) CHECK(e[p] == doctest::Approx(40.0).epsilon(1e-9));
}

TEST_CASE("assembly reproduces the rank-2 and rank-3 scalar equations") {
    auto disk = test::small_disk(17);
    auto hyp = hyperbolic_factor(disk);

    // rank 2: residual of the assembled system at a nontrivial state equals
    // (1/4) Lap u + g0 e^{-2u} - |q2|^2 g0^{-1} e^{2u} - g0/2 pointwise.
    HiggsField phi2 = section_with_corner(disk, 2, PolyZ::parse("0.3z"));
    TodaSystem sys2 = assemble_cyclic(phi2, hyp);
    CHECK(sys2.k_unknowns == 1);
    std::vector<ScalarField> psi{sample_field<double>(disk, [](cplx z) {
        return 0.05 * z.real() - 0.03 * z.imag() * z.imag();
    })};
    const auto res = sys2.residual(psi);
    // u = psi_1 + log c_1, h1 = g0^{-1/2} e^u.
    ScalarField u(disk);
    for (int p = 0; p < u.size(); ++p) u[p] = psi[0][p] + sys2.log_c[0];
    const ScalarField lap_u = dzbar_dz(u);
    const auto q2 = phi2.cyclic_entries()[1];
    for (int j = 1; j < disk->ny - 1; ++j)
        for (int i = 1; i < disk->nx - 1; ++i) {
            const int p = disk->index(i, j);
            const double g0 = hyp.g0[p];
            const double scalar = lap_u[p] + g0 * std::exp(-2 * u[p]) -
                                  std::norm(q2[p]) / g0 * std::exp(2 * u[p]) - 0.5 * g0;
            CHECK(res[0][p] == doctest::Approx(scalar).epsilon(1e-10));
        }

    // rank 3: dzbar dz log h1 + h1^{-1} - |q3|^2 h1^2 = 0 with the exact
    // background split dzbar dz log h1 = -g0 + (1/4) Lap psi.
    HiggsField phi3 = section_with_corner(disk, 3, PolyZ::parse("z"));
    TodaSystem sys3 = assemble_cyclic(phi3, hyp);
    CHECK(sys3.k_unknowns == 1);
    std::vector<ScalarField> psi3{sample_field<double>(disk, [](cplx z) { return 0.04 * z.imag(); })};
    const auto res3 = sys3.residual(psi3);
    const ScalarField lap_psi3 = dzbar_dz(psi3[0]);
    const auto q3 = phi3.cyclic_entries()[2];
    for (int j = 1; j < disk->ny - 1; ++j)
        for (int i = 1; i < disk->nx - 1; ++i) {
            const int p = disk->index(i, j);
            const double h1 = std::exp(sys3.log_c[0] + psi3[0][p]) / hyp.g0[p];
            const double scalar =
                -hyp.g0[p] + lap_psi3[p] + 1.0 / h1 - std::norm(q3[p]) * h1 * h1;
            CHECK(res3[0][p] == doctest::Approx(scalar).epsilon(1e-10));
        }

    // rank 4 real-cyclic reduction: two independent unknown fields.
    HiggsField phi4 = section_with_corner(disk, 4, PolyZ::parse("0.2z"));
    TodaSystem sys4 = assemble_cyclic(phi4, hyp);
    CHECK(sys4.reduction == Reduction::RealCyclic);
    CHECK(sys4.k_unknowns == 2);

    // Non-cyclic input is rejected.
    std::vector<ComplexField> qs{ComplexField(disk, cplx{0.1, 0}), ComplexField(disk, cplx{0.2, 0})};
    HiggsField noncyc = build_hitchin_section(qs);
    CHECK_THROWS_AS(assemble_cyclic(noncyc, hyp), std::invalid_argument);
}

TEST_CASE("newton solve: Fuchsian Dirichlet problems and the torus constant") {
    SUBCASE("rank 2, q2 = 0, hyperbolic disk") {
        auto disk = test::small_disk(65);
        auto hyp = hyperbolic_factor(disk);
        HiggsField phi = section_with_corner(disk, 2, PolyZ());
        TodaSystem sys = assemble_cyclic(phi, hyp);
        const Solution sol = solve_newton(sys);
        CHECK(sol.converged);
        double dev = 0;
        for (int j = 1; j < disk->ny - 1; ++j)
            for (int i = 1; i < disk->nx - 1; ++i)
                dev = std::max(dev, std::abs(sol.u(i, j) - 0.5 * std::log(2.0)));
        CHECK(dev <= 1e-9);
    }
    SUBCASE("rank 3, q3 = 0, hyperbolic disk") {
        auto disk = test::small_disk(65);
        auto hyp = hyperbolic_factor(disk);
        HiggsField phi = section_with_corner(disk, 3, PolyZ());
        TodaSystem sys = assemble_cyclic(phi, hyp);
        const Solution sol = solve_newton(sys);
        CHECK(sol.converged);
        CHECK(sup_norm_interior(sol.u) <= 1e-9);
    }
    SUBCASE("flat torus, rank 2, constant q2") {
        auto torus = test::small_torus(32);
        auto flat = flat_metric(torus, 1.0);
        HiggsField phi = build_cyclic(torus, {PolyZ(1.0), PolyZ(cplx{0.7, 0})});
        TodaSystem sys = assemble_cyclic(phi, flat);
        const Solution sol = solve_newton(sys);
        CHECK(sol.converged);
        CHECK(sol.final_residual <= 1e-12);
        const double expect = -0.5 * std::log(0.7);
        for (double v : sol.log_h[0].v) CHECK(v == doctest::Approx(expect).epsilon(1e-12));

        const auto mr = residual_matrix(sol, phi);
        CHECK(mr.sup <= 1e-10);

        const MetricField h = harmonic_metric(sol);
        const ScalarField bn = bracket_norm(bracket(phi, adjoint_higgs(phi, h)), h, flat);
        CHECK(sup_norm(bn) <= 1e-12);
    }
}

TEST_CASE("newton residual trace is strictly decreasing") {
    auto disk = test::small_disk(33);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 2, PolyZ::parse("1.5 + 2z"));
    TodaSystem sys = assemble_cyclic(phi, hyp);
    const Solution sol = solve_newton(sys);
    CHECK(sol.converged);
    REQUIRE(sol.residual_trace.size() >= 2);
    for (size_t k = 1; k < sol.residual_trace.size(); ++k)
        CHECK(sol.residual_trace[k] < sol.residual_trace[k - 1]);
}

TEST_CASE("matrix residual: perturbation sanity and h^2 consistency") {
    // Compare the sup over a fixed physical box so both grids see the same
    // region (the raw sup ring sits at grid-dependent distance from the edge).
    auto solve_at = [](int nx) {
        auto disk = test::small_disk(nx);
        auto hyp = hyperbolic_factor(disk);
        HiggsField phi = section_with_corner(disk, 2, PolyZ::parse("0.3z"));
        TodaSystem sys = assemble_cyclic(phi, hyp);
        Solution sol = solve_newton(sys);
        REQUIRE(sol.converged);
        const auto mr = residual_matrix(sol, phi);
        double sup = 0;
        const double box = 0.9 * disk->x1;
        for (int j = 0; j < disk->ny; ++j)
            for (int i = 0; i < disk->nx; ++i)
                if (std::abs(disk->x(i)) <= box && std::abs(disk->y(j)) <= box)
                    sup = std::max(sup, mr.frobenius(i, j));
        return std::make_pair(sup, std::move(sol));
    };
    auto [res33, sol33] = solve_at(33);
    auto [res65, sol65] = solve_at(65);
    CHECK(res65 < res33);
    CHECK(res33 / res65 > 2.5);  // second-order consistency

    // A perturbed metric is far from solving the equation.
    auto disk = test::small_disk(33);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 2, PolyZ::parse("0.3z"));
    auto gen = test::rng(9);
    Solution bad = sol33;
    std::uniform_real_distribution<double> noise(-0.1, 0.1);
    for (auto& l : bad.log_h)
        for (double& v : l.v) v += noise(gen);
    CHECK(residual_matrix(bad, phi).sup > 10.0 * res33);
}

TEST_CASE("matrix residual is second order for every rank 2..6") {
    // C estimated from a refinement pair stays bounded rank by rank. The
    // comparison box must sit inside the depth-2 evaluation ring of the
    // coarser grid.
    for (int n : {2, 3, 4, 5, 6}) {
        double res[2];
        const int grids[2] = {33, 65};
        for (int g = 0; g < 2; ++g) {
            auto disk = test::small_disk(grids[g]);
            auto hyp = hyperbolic_factor(disk);
            HiggsField phi = section_with_corner(disk, n, PolyZ::parse("0.3z"));
            TodaSystem sys = assemble_cyclic(phi, hyp);
            Solution sol = solve_newton(sys);
            REQUIRE(sol.converged);
            const auto mr = residual_matrix(sol, phi);
            double sup = 0;
            const double box = 0.8 * disk->x1;
            for (int j = 0; j < disk->ny; ++j)
                for (int i = 0; i < disk->nx; ++i)
                    if (std::abs(disk->x(i)) <= box && std::abs(disk->y(j)) <= box)
                        sup = std::max(sup, mr.frobenius(i, j));
            res[g] = sup;
        }
        CAPTURE(n);
        CHECK(res[1] < res[0]);
        CHECK(res[0] / res[1] > 2.5);
    }
}

TEST_CASE("real-cyclic symmetry is preserved by the unreduced solve") {
    auto disk = test::small_disk(33);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 4, PolyZ::parse("0.3z"));
    AssembleOptions opts;
    opts.reduction = Reduction::Full;
    TodaSystem sys = assemble_cyclic(phi, hyp, opts);
    CHECK(sys.k_unknowns == 3);
    const Solution sol = solve_newton(sys);
    CHECK(sol.converged);
    double dev = 0;
    for (int i = 0; i < 4; ++i)
        for (int p = 0; p < sol.log_h[i].size(); ++p)
            dev = std::max(dev, std::abs(sol.log_h[i][p] + sol.log_h[3 - i][p]));
    CHECK(dev <= 1e-8);
}

TEST_CASE("phase invariance: |t| = 1 scalings leave the solved metric unchanged") {
    auto disk = test::small_disk(33);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 2, PolyZ::parse("0.3z"));
    const Solution base = solve_newton(assemble_cyclic(phi, hyp));
    REQUIRE(base.converged);
    const cplx phase = std::polar(1.0, 1.234);
    const Solution rotated = solve_newton(assemble_cyclic(scale_action(phase, phi), hyp));
    REQUIRE(rotated.converged);
    double dev = 0;
    for (int i = 0; i < 2; ++i)
        for (int p = 0; p < base.log_h[i].size(); ++p)
            dev = std::max(dev, std::abs(base.log_h[i][p] - rotated.log_h[i][p]));
    CHECK(dev <= 1e-12);
}

TEST_CASE("subdiagonal conventions solve the same bundle: gauge-invariant energy") {
    // Unit subdiagonal with q2 and weighted subdiagonal (r_1 = 1/2) with 2*q2
    // have the same characteristic coefficients, so the solved energy
    // densities must agree pointwise.
    auto disk = test::small_disk(33);
    auto hyp = hyperbolic_factor(disk);
    HiggsField unit = build_hitchin_section(disk, {PolyZ::parse("0.075z")},
                                            SectionNormalization::UnitSubdiagonal);
    HiggsField weighted = build_hitchin_section(disk, {PolyZ::parse("0.15z")},
                                                SectionNormalization::Weights);
    const auto pu = fibration_base(unit);
    const auto pw = fibration_base(weighted);
    for (int p = 0; p < disk->num_nodes(); ++p)
        REQUIRE(std::abs(pu[0][p] - pw[0][p]) < 1e-15);

    const Solution su = solve_newton(assemble_cyclic(unit, hyp));
    const Solution sw = solve_newton(assemble_cyclic(weighted, hyp));
    REQUIRE(su.converged);
    REQUIRE(sw.converged);
    const ScalarField eu = energy_density(unit, harmonic_metric(su), hyp);
    const ScalarField ew = energy_density(weighted, harmonic_metric(sw), hyp);
    double dev = 0;
    for (int p = 0; p < disk->num_nodes(); ++p) dev = std::max(dev, std::abs(eu[p] - ew[p]));
    CHECK(dev <= 1e-9);
}

TEST_CASE("reduced and unreduced solves agree") {
    auto disk = test::small_disk(33);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 4, PolyZ::parse("0.3z"));
    AssembleOptions full;
    full.reduction = Reduction::Full;
    const Solution a = solve_newton(assemble_cyclic(phi, hyp, full));
    const Solution b = solve_newton(assemble_cyclic(phi, hyp));
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    double dev = 0;
    for (int i = 0; i < 4; ++i)
        for (int p = 0; p < a.log_h[i].size(); ++p)
            dev = std::max(dev, std::abs(a.log_h[i][p] - b.log_h[i][p]));
    CHECK(dev <= 1e-8);
}

TEST_CASE("cooperative structure of the linearization") {
    auto disk = test::small_disk(17);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 4, PolyZ::parse("0.3z"));
    TodaSystem sys = assemble_cyclic(phi, hyp);
    const auto coeffs = coupling_matrices(sys);
    double min_off = std::numeric_limits<double>::infinity();
    for (const auto& C : coeffs)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) min_off = std::min(min_off, C(i, j));
    CHECK(min_off >= 0.0);  // exact cooperative sign pattern
    const auto rep = cooperative_check(coeffs);
    CHECK(rep.cooperative);
    CHECK(rep.column_dominant);
    CHECK(rep.fully_coupled);

    // Artificial failures.
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(4, 4);
    block(0, 1) = block(1, 0) = 1.0;
    block(2, 3) = block(3, 2) = 1.0;
    block.diagonal().setConstant(-2.0);
    const auto rep_block = cooperative_check({block});
    CHECK(!rep_block.fully_coupled);

    Eigen::MatrixXd possum = Eigen::MatrixXd::Zero(2, 2);
    possum(0, 0) = 1.0;
    possum(0, 1) = 0.5;
    possum(1, 0) = 0.5;
    possum(1, 1) = -0.25;
    const auto rep_pos = cooperative_check({possum});
    CHECK(rep_pos.cooperative);
    CHECK(!rep_pos.column_dominant);
}

TEST_CASE("v_k difference system from a rank-6 solve passes the maximum-principle checks") {
    auto disk = test::small_disk(33);
    auto hyp = hyperbolic_factor(disk);
    HiggsField phi = section_with_corner(disk, 6, PolyZ::parse("0.3z"));
    TodaSystem sys = assemble_cyclic(phi, hyp);
    const Solution sol = solve_newton(sys);
    REQUIRE(sol.converged);
    const auto vk = vk_coupling(sys, sol);
    REQUIRE(!vk.coeffs.empty());
    CHECK(vk.coeffs[0].rows() == 3);
    const auto rep = cooperative_check(vk.coeffs);
    CHECK(rep.cooperative);
    CHECK(rep.column_dominant);
    CHECK(rep.fully_coupled);

    // c_k quadrature oracle: Simpson integration of exp(t u_{k+1} + (1-t) u_k)
    // against the closed form used in the builder.
    auto simpson = [](double ua, double ub) {
        const int N = 200;
        double acc = 0;
        for (int k = 0; k <= N; ++k) {
            const double t = double(k) / N;
            const double w = (k == 0 || k == N) ? 1 : (k % 2 ? 4 : 2);
            acc += w * std::exp(t * ub + (1 - t) * ua);
        }
        return acc / (3.0 * N);
    };
    const double ua = -0.7, ub = 0.45;
    const double closed = (std::exp(ub) - std::exp(ua)) / (ub - ua);
    CHECK(closed == doctest::Approx(simpson(ua, ub)).epsilon(1e-8));
}

TEST_CASE("claims margins") {
    SUBCASE("rank 2, q2 = 0: degenerate equality case") {
        auto disk = test::small_disk(33);
        auto hyp = hyperbolic_factor(disk);
        HiggsField phi = section_with_corner(disk, 2, PolyZ());
        TodaSystem sys = assemble_cyclic(phi, hyp);
        const Solution sol = solve_newton(sys);
        REQUIRE(sol.converged);
        const auto rep = claims_margin(sys, sol);
        CHECK(rep.degenerate_qzero);
        REQUIRE(rep.margins.size() == 2);
        CHECK(std::abs(rep.margins[0].min) <= 1e-9);  // claim (i) margin identically 0
    }
    SUBCASE("rank 2, q2 = 0.3z: strictly positive interior margins") {
        auto disk = test::small_disk(65);
        auto hyp = hyperbolic_factor(disk);
        HiggsField phi = section_with_corner(disk, 2, PolyZ::parse("0.3z"));
        TodaSystem sys = assemble_cyclic(phi, hyp);
        const Solution sol = solve_newton(sys);
        REQUIRE(sol.converged);
        const auto rep = claims_margin(sys, sol);
        CHECK(!rep.degenerate_qzero);
        CHECK(rep.min_margin > 0.0);
    }
    SUBCASE("rank 4, constant q4 on the hyperbolic disk: strict chain") {
        auto disk = test::small_disk(33);
        auto hyp = hyperbolic_factor(disk);
        HiggsField phi = section_with_corner(disk, 4, PolyZ(cplx{0.4, 0.1}));
        TodaSystem sys = assemble_cyclic(phi, hyp);
        const Solution sol = solve_newton(sys);
        REQUIRE(sol.converged);
        const auto rep = claims_margin(sys, sol);
        REQUIRE(rep.margins.size() == 2);  // ||q4|| < ||r1|| < ||r2||
        CHECK(rep.min_margin > 0.0);
    }
    SUBCASE("constant torus solutions sit exactly on the chain equality") {
        // All fluxes of the flat constant solution coincide, so every chain
        // margin is zero: the strict chain is a hyperbolic-background effect.
        auto torus = test::small_torus(16);
        auto flat = flat_metric(torus, 1.0);
        HiggsField phi = build_cyclic(
            torus, {PolyZ(1.0), PolyZ(1.0), PolyZ(1.0), PolyZ(cplx{0.4, 0.1})});
        TodaSystem sys = assemble_cyclic(phi, flat);
        const Solution sol = solve_newton(sys);
        REQUIRE(sol.converged);
        const auto rep = claims_margin(sys, sol);
        for (const auto& m : rep.margins) CHECK(std::abs(m.min) <= 1e-10);
    }
}
