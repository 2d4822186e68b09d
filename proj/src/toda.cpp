#include "higgslab/toda.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace higgslab {

namespace {

std::optional<cplx> constant_value(const ComplexField& f) {
    const cplx v0 = f[0];
    double dev = 0;
    for (cplx v : f.v) dev = std::max(dev, std::abs(v - v0));
    if (dev <= 1e-12 * (1.0 + std::abs(v0))) return v0;
    return std::nullopt;
}

double cumulative_weight(int gi, int n) {  // sum_{k<=i} w_k = i(n-i)/2 at i = gi+1 (1-based)
    const int i = gi + 1;
    return 0.5 * i * (n - i);
}

// Fuchsian background on a hyperbolic chart: h_i = c_i g0^{-w_i} solves the
// system with vanishing corner when |gamma_i|^2 (c_{i+1}/c_i) = sum_{k<=i} w_k.
void fuchsian_background(const std::vector<ComplexField>& gammas, int n, std::vector<double>& weight,
                         std::vector<double>& log_c) {
    weight.resize(n);
    for (int i = 0; i < n; ++i) weight[i] = 0.5 * (n - 1 - 2 * i);
    log_c.assign(n, 0.0);
    for (int gi = 0; gi < n - 1; ++gi) {
        const auto s = constant_value(gammas[gi]);
        if (!s || *s == cplx{})
            throw std::invalid_argument(
                "Fuchsian boundary data needs constant nonzero subdiagonal entries (gamma_" +
                std::to_string(gi + 1) + " is not)");
        log_c[gi + 1] = log_c[gi] + std::log(cumulative_weight(gi, n)) - std::log(std::norm(*s));
    }
    double mean = 0;
    for (double c : log_c) mean += c;
    mean /= n;
    for (double& c : log_c) c -= mean;
}

void torus_background(const std::vector<ComplexField>& gammas, int n, std::vector<double>& log_c) {
    double logG = 0;
    std::vector<double> lg(n);
    for (int i = 0; i < n; ++i) {
        const auto s = constant_value(gammas[i]);
        if (!s || *s == cplx{})
            throw std::invalid_argument("no positive constant solution: gamma_" + std::to_string(i + 1) +
                                        " is not a nonzero constant");
        lg[i] = std::log(std::norm(*s));
        logG += lg[i];
    }
    logG /= n;
    log_c.assign(n, 0.0);
    for (int i = 0; i < n - 1; ++i) log_c[i + 1] = log_c[i] + logG - lg[i];
    double mean = 0;
    for (double c : log_c) mean += c;
    mean /= n;
    for (double& c : log_c) c -= mean;
}

} // namespace

ConstantSolution constant_oracle(const HiggsField& phi, const BackgroundMetric& metric) {
    const auto gammas = phi.cyclic_entries();
    const int n = phi.n;
    ConstantSolution out;
    if (metric.kind == BackgroundMetric::Kind::Flat) {
        // Dropping the Laplacian forces all fluxes |gamma_i|^2 h_i^{-1} h_{i+1}
        // equal; the closed form below is the unique positive solution.
        torus_background(gammas, n, out.log_h);
        out.weight.assign(n, 0.0);
    } else {
        double corner_sup = 0;
        for (cplx v : gammas[n - 1].v) corner_sup = std::max(corner_sup, std::abs(v));
        if (corner_sup > 0)
            throw std::invalid_argument("constant_oracle: hyperbolic oracle needs a vanishing corner entry");
        fuchsian_background(gammas, n, out.weight, out.log_h);
    }
    return out;
}

TodaSystem assemble_cyclic(const HiggsField& phi, const BackgroundMetric& metric,
                           const AssembleOptions& opts) {
    if (!phi.cyclic_shaped(0.0))
        throw std::invalid_argument("assemble_cyclic: Higgs field is not cyclic");
    require_same_chart(phi.chart, metric.g0.chart, "assemble_cyclic");
    TodaSystem sys;
    sys.n = phi.n;
    sys.chart = phi.chart;
    sys.metric = metric;
    const int n = sys.n;
    const auto gammas = phi.cyclic_entries();

    sys.gamma_sq.reserve(n);
    for (const auto& g : gammas) {
        ScalarField gs(sys.chart);
        for (int k = 0; k < gs.size(); ++k) gs[k] = std::norm(g[k]);
        sys.gamma_sq.push_back(std::move(gs));
    }

    if (metric.kind == BackgroundMetric::Kind::Hyperbolic) {
        fuchsian_background(gammas, n, sys.weight, sys.log_c);
    } else {
        sys.weight.assign(n, 0.0);
        bool all_const = true;
        for (const auto& g : gammas) {
            const auto v = constant_value(g);
            if (!v || *v == cplx{}) all_const = false;
        }
        if (all_const)
            torus_background(gammas, n, sys.log_c);
        else
            sys.log_c.assign(n, 0.0);
    }

    sys.bg_ratio.reserve(n);
    sys.lap_bg.reserve(n);
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        ScalarField ratio(sys.chart), lap(sys.chart);
        const double dc = sys.log_c[ip] - sys.log_c[i];
        const double dw = sys.weight[i] - sys.weight[ip];
        for (int k = 0; k < ratio.size(); ++k) {
            ratio[k] = std::exp(dc + dw * std::log(metric.g0[k]));
            lap[k] = -sys.weight[i] * metric.lap_log_g0(k);
        }
        sys.bg_ratio.push_back(std::move(ratio));
        sys.lap_bg.push_back(std::move(lap));
    }

    bool symmetric = true;
    for (int gi = 0; gi < n - 1 && symmetric; ++gi) {
        const auto& a = sys.gamma_sq[gi];
        const auto& b = sys.gamma_sq[n - 2 - gi];
        double dev = 0, scale = 1;
        for (int k = 0; k < a.size(); ++k) {
            dev = std::max(dev, std::abs(a[k] - b[k]));
            scale = std::max(scale, std::abs(a[k]));
        }
        if (dev > opts.sym_tol * scale) symmetric = false;
    }
    sys.reduction = opts.reduction.value_or(symmetric ? Reduction::RealCyclic : Reduction::Full);
    if (sys.reduction == Reduction::RealCyclic && !symmetric)
        throw std::invalid_argument("assemble_cyclic: real-cyclic reduction requested for asymmetric data");
    sys.k_unknowns = sys.reduction == Reduction::Full ? n - 1 : n / 2;

    sys.psi_map.assign(n, {});
    if (sys.reduction == Reduction::Full) {
        for (int i = 0; i < n - 1; ++i) sys.psi_map[i] = {{i, +1.0}};
        for (int c = 0; c < n - 1; ++c) sys.psi_map[n - 1].push_back({c, -1.0});
    } else {
        const int m = sys.k_unknowns;
        for (int i = 0; i < m; ++i) sys.psi_map[i] = {{i, +1.0}};
        for (int i = n - m; i < n; ++i) sys.psi_map[i] = {{n - 1 - i, -1.0}};
        // odd n: the middle field stays identically zero
    }

    const Chart& c = *sys.chart;
    sys.node_rank.assign(c.num_nodes(), -1);
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i)
            if (c.is_interior(i, j)) {
                sys.node_rank[c.index(i, j)] = static_cast<int>(sys.solve_nodes.size());
                sys.solve_nodes.push_back(c.index(i, j));
            }

    sys.psi0.assign(sys.k_unknowns, ScalarField(sys.chart, 0.0));
    if (opts.boundary == BoundaryData::Decoupled && c.kind == ChartKind::Disk) {
        // Pointwise all-fluxes-equal profile on the boundary ring, expressed
        // as an offset against the background.
        for (int j = 0; j < c.ny; ++j)
            for (int i = 0; i < c.nx; ++i) {
                if (!c.is_boundary(i, j)) continue;
                const int p = c.index(i, j);
                std::vector<double> lg(n);
                double logG = 0;
                for (int gi = 0; gi < n; ++gi) {
                    const double gsq = sys.gamma_sq[gi][p];
                    if (gsq <= 0)
                        throw std::invalid_argument(
                            "assemble_cyclic: decoupled boundary data needs nowhere-zero entries "
                            "on the boundary ring");
                    lg[gi] = std::log(gsq);
                    logG += lg[gi];
                }
                logG /= n;
                std::vector<double> ell(n, 0.0);
                double mean = 0;
                for (int gi = 0; gi < n - 1; ++gi) {
                    ell[gi + 1] = ell[gi] + logG - lg[gi];
                    mean += ell[gi + 1];
                }
                mean /= n;
                for (int gi = 0; gi < n; ++gi) ell[gi] -= mean;
                for (int r = 0; r < sys.k_unknowns; ++r) {
                    const double bg = sys.log_c[r] - sys.weight[r] * std::log(metric.g0[p]);
                    sys.psi0[r][p] = ell[r] - bg;
                }
            }
    }
    return sys;
}

std::vector<ScalarField> TodaSystem::expand_psi(const std::vector<ScalarField>& unknowns) const {
    std::vector<ScalarField> full(n, ScalarField(chart, 0.0));
    for (int i = 0; i < n; ++i)
        for (const auto& t : psi_map[i])
            for (int k = 0; k < full[i].size(); ++k) full[i][k] += t.sign * unknowns[t.col][k];
    return full;
}

std::vector<ScalarField> TodaSystem::flux(const std::vector<ScalarField>& psi_full) const {
    std::vector<ScalarField> G(n, ScalarField(chart, 0.0));
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1) % n;
        for (int k = 0; k < G[i].size(); ++k)
            G[i][k] = gamma_sq[i][k] * bg_ratio[i][k] * std::exp(psi_full[ip][k] - psi_full[i][k]);
    }
    return G;
}

std::vector<ScalarField> TodaSystem::residual(const std::vector<ScalarField>& unknowns) const {
    const auto psi_full = expand_psi(unknowns);
    const auto G = flux(psi_full);
    std::vector<ScalarField> res(k_unknowns, ScalarField(chart, 0.0));
    for (int r = 0; r < k_unknowns; ++r) {
        const ScalarField lap = dzbar_dz(psi_full[r]);
        const int rm = (r - 1 + n) % n;
        for (int p : solve_nodes) res[r][p] = lap_bg[r][p] + lap[p] - (G[rm][p] - G[r][p]);
    }
    return res;
}

double TodaSystem::residual_sup(const std::vector<ScalarField>& res) const {
    double m = 0;
    for (const auto& f : res)
        for (int p : solve_nodes) m = std::max(m, std::abs(f[p]));
    return m;
}

Solution solve_newton(const TodaSystem& sys, const SolverConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    const Chart& c = *sys.chart;
    const int K = sys.k_unknowns;
    const int N = static_cast<int>(sys.solve_nodes.size());
    const int dim = K * N;

    std::vector<ScalarField> psi = sys.psi0;
    auto res = sys.residual(psi);
    double rn = sys.residual_sup(res);

    Solution sol;
    sol.residual_trace.push_back(rn);

    const double ax = 1.0 / (c.hx * c.hx), ay = 1.0 / (c.hy * c.hy);
    auto neighbor_rank = [&](int i, int j) {
        if (c.kind == ChartKind::Torus) return sys.node_rank[c.index(c.wrap_x(i), c.wrap_y(j))];
        if (i < 0 || j < 0 || i >= c.nx || j >= c.ny) return -1;
        return sys.node_rank[c.index(i, j)];
    };

    int it = 0;
    for (; it < cfg.max_iter && rn > cfg.tol; ++it) {
        const auto psi_full = sys.expand_psi(psi);
        const auto G = sys.flux(psi_full);

        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(size_t(dim) * (5 + sys.n));
        Eigen::VectorXd b(dim);
        for (int r = 0; r < K; ++r) {
            const int rm = (r - 1 + sys.n) % sys.n;
            const int rp = (r + 1) % sys.n;
            for (int pi = 0; pi < N; ++pi) {
                const int p = sys.solve_nodes[pi];
                const int i = p % c.nx, j = p / c.nx;
                const int row = r * N + pi;
                b(row) = -res[r][p];

                trip.emplace_back(row, row, -0.5 * (ax + ay));
                const int east = neighbor_rank(i + 1, j), west = neighbor_rank(i - 1, j);
                const int north = neighbor_rank(i, j + 1), south = neighbor_rank(i, j - 1);
                if (east >= 0) trip.emplace_back(row, r * N + east, 0.25 * ax);
                if (west >= 0) trip.emplace_back(row, r * N + west, 0.25 * ax);
                if (north >= 0) trip.emplace_back(row, r * N + north, 0.25 * ay);
                if (south >= 0) trip.emplace_back(row, r * N + south, 0.25 * ay);

                // d/dpsi_j of -(G_{r-1} - G_r): cooperative cyclic pattern.
                std::vector<double> coef(sys.n, 0.0);
                coef[rm] += G[rm][p];
                coef[r] -= G[rm][p] + G[r][p];
                coef[rp] += G[r][p];
                for (int jj = 0; jj < sys.n; ++jj) {
                    if (coef[jj] == 0.0) continue;
                    for (const auto& t : sys.psi_map[jj])
                        trip.emplace_back(row, t.col * N + pi, t.sign * coef[jj]);
                }
            }
        }
        Eigen::SparseMatrix<double> J(dim, dim);
        J.setFromTriplets(trip.begin(), trip.end());

        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> lin;
        lin.setTolerance(cfg.lin_tol);
        lin.setMaxIterations(cfg.lin_max_iter);
        lin.compute(J);
        Eigen::VectorXd d = lin.solve(b);
        if (lin.info() != Eigen::Success || !d.allFinite()) {
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.compute(J);
            if (lu.info() != Eigen::Success) {
                int worst = sys.solve_nodes[0];
                double wr = 0;
                for (int r = 0; r < K; ++r)
                    for (int p : sys.solve_nodes)
                        if (std::abs(res[r][p]) > wr) {
                            wr = std::abs(res[r][p]);
                            worst = p;
                        }
                sol.failure = "singular Jacobian at iteration " + std::to_string(it) +
                              " (worst residual at node i=" + std::to_string(worst % c.nx) +
                              " j=" + std::to_string(worst / c.nx) + ")";
                break;
            }
            d = lu.solve(b);
        }

        // Backtracking on the residual sup-norm.
        double step = 1.0;
        std::vector<ScalarField> trial = psi;
        double trial_rn = rn;
        std::vector<ScalarField> trial_res;
        while (step >= cfg.min_step) {
            for (int r = 0; r < K; ++r)
                for (int pi = 0; pi < N; ++pi)
                    trial[r][sys.solve_nodes[pi]] = psi[r][sys.solve_nodes[pi]] + step * d(r * N + pi);
            trial_res = sys.residual(trial);
            trial_rn = sys.residual_sup(trial_res);
            if (trial_rn < rn) break;
            step *= 0.5;
        }
        if (!(trial_rn < rn)) {
            sol.failure = "line search stalled at residual " + std::to_string(rn);
            break;
        }
        psi.swap(trial);
        res.swap(trial_res);
        rn = trial_rn;
        sol.residual_trace.push_back(rn);
    }

    sol.iterations = it;
    sol.final_residual = rn;
    sol.converged = rn <= cfg.tol;
    if (!sol.converged && sol.failure.empty()) {
        std::ostringstream os;
        os << "no convergence after " << it << " iterations (residual " << rn << ")";
        sol.failure = os.str();
    }

    sol.psi = std::move(psi);
    const auto psi_full = sys.expand_psi(sol.psi);
    sol.log_h.assign(sys.n, ScalarField(sys.chart, 0.0));
    for (int i = 0; i < sys.n; ++i)
        for (int k = 0; k < sol.log_h[i].size(); ++k)
            sol.log_h[i][k] = sys.log_c[i] - sys.weight[i] * std::log(sys.metric.g0[k]) + psi_full[i][k];
    sol.u = ScalarField(sys.chart, 0.0);
    for (int k = 0; k < sol.u.size(); ++k) sol.u[k] = sys.log_c[0] + psi_full[0][k];
    sol.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return sol;
}

MetricField harmonic_metric(const Solution& sol) { return MetricField::from_logs(sol.log_h); }

MatrixResidual residual_matrix(const Solution& sol, const HiggsField& phi) {
    const int n = phi.n;
    const ChartPtr chart = phi.chart;
    require_same_chart(chart, sol.u.chart, "residual_matrix");
    const Chart& c = *chart;

    MetricField h = harmonic_metric(sol);
    std::vector<ComplexField> a(n);  // (h^{-1} dz h)_{ii} = dz(h_i) / h_i
    for (int i = 0; i < n; ++i) {
        ComplexField hi(chart);
        for (int k = 0; k < hi.size(); ++k) hi[k] = h.hdiag[i][k];
        ComplexField dhi = dz(hi);
        a[i] = ComplexField(chart);
        for (int k = 0; k < hi.size(); ++k) a[i][k] = dhi[k] / hi[k];
    }
    std::vector<ComplexField> curv(n);
    for (int i = 0; i < n; ++i) curv[i] = dzbar(a[i]);

    MatrixResidual out;
    out.frobenius = ScalarField(chart, 0.0);
    const int depth = c.kind == ChartKind::Torus ? 0 : 2;
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            if (!c.is_deep_interior(i, j, depth)) continue;
            const int p = c.index(i, j);
            const Mat ph = phi.at(p);
            const Mat ps = h.inv_at(p) * ph.adjoint() * h.at(p);
            Mat R = ph * ps - ps * ph;
            R *= -1.0;
            for (int d = 0; d < n; ++d) R(d, d) += curv[d][p];
            const double fr = R.norm();
            out.frobenius[p] = fr;
            out.sup = std::max(out.sup, fr);
        }
    return out;
}

std::vector<Eigen::MatrixXd> coupling_matrices(const TodaSystem& sys,
                                               const std::vector<ScalarField>* unknowns) {
    if (!unknowns) unknowns = &sys.psi0;
    const auto G = sys.flux(sys.expand_psi(*unknowns));
    std::vector<Eigen::MatrixXd> out;
    out.reserve(sys.solve_nodes.size());
    for (int p : sys.solve_nodes) {
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(sys.n, sys.n);
        for (int i = 0; i < sys.n; ++i) {
            const int im = (i - 1 + sys.n) % sys.n;
            const int ip = (i + 1) % sys.n;
            C(i, im) += G[im][p];
            C(i, i) -= G[im][p] + G[i][p];
            C(i, ip) += G[i][p];
        }
        out.push_back(std::move(C));
    }
    return out;
}

CooperativeReport cooperative_check(const std::vector<Eigen::MatrixXd>& coeffs, double tol) {
    CooperativeReport rep;
    if (coeffs.empty()) return rep;
    const int n = static_cast<int>(coeffs[0].rows());
    double scale = 0;
    for (const auto& C : coeffs) scale = std::max(scale, C.cwiseAbs().maxCoeff());
    if (scale == 0) scale = 1;

    rep.min_offdiag = std::numeric_limits<double>::infinity();
    rep.max_colsum = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd pattern = Eigen::MatrixXd::Zero(n, n);
    for (const auto& C : coeffs) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i != j) {
                    rep.min_offdiag = std::min(rep.min_offdiag, C(i, j));
                    if (std::abs(C(i, j)) > tol * scale) pattern(i, j) = 1;
                }
            }
        for (int j = 0; j < n; ++j) rep.max_colsum = std::max(rep.max_colsum, C.col(j).sum());
    }
    rep.cooperative = rep.min_offdiag >= -tol * scale;
    rep.column_dominant = rep.max_colsum <= tol * scale;

    // Irreducibility: the directed coupling graph is strongly connected.
    auto reachable = [&](int from) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w)
                if (!seen[w] && pattern(v, w) != 0) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        return seen;
    };
    rep.fully_coupled = true;
    for (int v = 0; v < n && rep.fully_coupled; ++v) {
        const auto seen = reachable(v);
        for (bool s : seen)
            if (!s) rep.fully_coupled = false;
    }
    return rep;
}

namespace {

// Nodes within `cells` grid cells (Chebyshev distance) of a zero of the field.
std::vector<std::uint8_t> zero_halo(const ScalarField& absq_sq, double cells) {
    const Chart& c = *absq_sq.chart;
    double scale = 0;
    for (double v : absq_sq.v) scale = std::max(scale, v);
    const double thresh = scale * 1e-24;
    const int r = static_cast<int>(std::ceil(cells));
    std::vector<std::uint8_t> halo(c.num_nodes(), 0);
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            if (absq_sq(i, j) > thresh) continue;
            for (int dj = -r; dj <= r; ++dj)
                for (int di = -r; di <= r; ++di) {
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

std::vector<ScalarField> fluxes_from_solution(const TodaSystem& sys, const Solution& sol) {
    std::vector<ScalarField> G(sys.n, ScalarField(sys.chart, 0.0));
    for (int i = 0; i < sys.n; ++i) {
        const int ip = (i + 1) % sys.n;
        for (int k = 0; k < G[i].size(); ++k)
            G[i][k] = sys.gamma_sq[i][k] * std::exp(sol.log_h[ip][k] - sol.log_h[i][k]);
    }
    return G;
}

} // namespace

VkSystem vk_coupling(const TodaSystem& sys, const Solution& sol, double zero_exclusion_cells) {
    if (sys.n % 2 != 0) throw std::invalid_argument("vk_coupling: needs even rank");
    const int m = sys.n / 2;
    const auto G = fluxes_from_solution(sys, sol);
    const auto halo = zero_halo(sys.gamma_sq[sys.n - 1], zero_exclusion_cells);

    VkSystem out;
    for (int p : sys.solve_nodes) {
        if (halo[p]) continue;
        // u_0 = log ||q_n||^2, u_k = log ||r_k||^2 (flux norms).
        std::vector<double> eu(m + 1);
        eu[0] = G[sys.n - 1][p] / sys.metric.g0[p];
        for (int k = 1; k <= m; ++k) eu[k] = G[k - 1][p] / sys.metric.g0[p];
        if (eu[0] <= 0) continue;
        auto ck = [&](int k) {  // int_0^1 exp(t u_{k+1} + (1-t) u_k) dt
            const double du = std::log(eu[k + 1]) - std::log(eu[k]);
            if (std::abs(du) < 1e-9) return 0.5 * (eu[k] + eu[k + 1]);
            return (eu[k + 1] - eu[k]) / du;
        };
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
        if (m == 1) {
            C(0, 0) = -4.0 * ck(0);
        } else {
            C(0, 0) = -3.0 * ck(0);
            C(0, 1) = ck(1);
            for (int k = 1; k < m - 1; ++k) {
                C(k, k - 1) = ck(k - 1);
                C(k, k) = -2.0 * ck(k);
                C(k, k + 1) = ck(k + 1);
            }
            C(m - 1, m - 2) = ck(m - 2);
            C(m - 1, m - 1) = -3.0 * ck(m - 1);
        }
        out.coeffs.push_back(std::move(C));
        out.nodes.push_back(p);
    }
    return out;
}

ClaimsReport claims_margin(const TodaSystem& sys, const Solution& sol, const ClaimsOptions& opts) {
    const int n = sys.n;
    if (n < 2) throw std::invalid_argument("claims_margin: no claim defined for this rank");
    const Chart& c = *sys.chart;
    const auto G = fluxes_from_solution(sys, sol);
    const auto halo = zero_halo(sys.gamma_sq[n - 1], opts.zero_exclusion_cells);

    double corner_sup = 0;
    for (double v : sys.gamma_sq[n - 1].v) corner_sup = std::max(corner_sup, v);

    ClaimsReport rep;
    rep.degenerate_qzero = corner_sup == 0;

    auto norm_field = [&](int flux_idx) {
        ScalarField f(sys.chart);
        for (int k = 0; k < f.size(); ++k) f[k] = G[flux_idx][k] / sys.metric.g0[k];
        return f;
    };

    std::vector<MarginField> margins;
    const ScalarField qn_norm = norm_field(n - 1);
    const ScalarField r1_norm = norm_field(0);
    if (n == 2 || n == 3) {
        // (i): ||r_1||^2 above its Fuchsian value (= e^{-2u} > 1/2 at rank 2,
        // e^{-u} > 1 at rank 3 in the unit-subdiagonal convention).
        MarginField mi{"claim_i", ScalarField(sys.chart), 0, -1, -1};
        const double fuchs = 0.5 * (n - 1);  // Fuchsian value of ||r_1||^2
        for (int k = 0; k < mi.margin.size(); ++k) mi.margin[k] = r1_norm[k] - fuchs;
        margins.push_back(std::move(mi));
        // (ii): ||q_n||^2 / ||r_1||^2 < 1 (= ||q_2||^2 e^{4u} resp. ||q_3||^2 e^{3u}).
        MarginField mii{"claim_ii", ScalarField(sys.chart), 0, -1, -1};
        for (int k = 0; k < mii.margin.size(); ++k) mii.margin[k] = 1.0 - qn_norm[k] / r1_norm[k];
        margins.push_back(std::move(mii));
    } else {
        const int m = n / 2;
        MarginField m0{"chain_q_r1", ScalarField(sys.chart), 0, -1, -1};
        for (int k = 0; k < m0.margin.size(); ++k) m0.margin[k] = r1_norm[k] - qn_norm[k];
        margins.push_back(std::move(m0));
        for (int kk = 1; kk < m; ++kk) {
            MarginField mk{"chain_r" + std::to_string(kk) + "_r" + std::to_string(kk + 1),
                           ScalarField(sys.chart), 0, -1, -1};
            const ScalarField lo = norm_field(kk - 1), hi = norm_field(kk);
            for (int k = 0; k < mk.margin.size(); ++k) mk.margin[k] = hi[k] - lo[k];
            margins.push_back(std::move(mk));
        }
    }

    // Minima over the inner fraction of the chart, away from zeros of q_n.
    const double cx = 0.5 * (c.x0 + c.x1), cy = 0.5 * (c.y0 + c.y1);
    const double hx_half = 0.5 * opts.rho_int * (c.x1 - c.x0);
    const double hy_half = 0.5 * opts.rho_int * (c.y1 - c.y0);
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (auto& mf : margins) {
        mf.min = std::numeric_limits<double>::infinity();
        for (int j = 0; j < c.ny; ++j)
            for (int i = 0; i < c.nx; ++i) {
                if (!c.is_interior(i, j)) continue;
                if (c.kind == ChartKind::Disk &&
                    (std::abs(c.x(i) - cx) > hx_half || std::abs(c.y(j) - cy) > hy_half))
                    continue;
                const int p = c.index(i, j);
                if (halo[p] && !rep.degenerate_qzero) continue;
                if (mf.margin[p] < mf.min) {
                    mf.min = mf.margin[p];
                    mf.imin = i;
                    mf.jmin = j;
                }
            }
        rep.min_margin = std::min(rep.min_margin, mf.min);
    }
    rep.margins = std::move(margins);
    return rep;
}

} // namespace higgslab
