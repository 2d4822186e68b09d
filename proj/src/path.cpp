#include "higgslab/path.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace higgslab {

namespace {

Mat phi_at_point(const HiggsField& phi, cplx z) {
    if (phi.has_symbolic) return phi.eval(z);
    // Bilinear interpolation of each entry.
    const Chart& c = *phi.chart;
    double fx = (z.real() - c.x0) / c.hx;
    double fy = (z.imag() - c.y0) / c.hy;
    if (c.kind == ChartKind::Disk && (fx < 0 || fy < 0 || fx > c.nx - 1 || fy > c.ny - 1))
        throw std::invalid_argument("path_alpha: path leaves the chart");
    int i = std::min(static_cast<int>(std::floor(fx)), c.nx - 2);
    int j = std::min(static_cast<int>(std::floor(fy)), c.ny - 2);
    const double sx = fx - i, sy = fy - j;
    auto node = [&](int ii, int jj) {
        if (c.kind == ChartKind::Torus) return c.index(c.wrap_x(ii), c.wrap_y(jj));
        return c.index(ii, jj);
    };
    Mat m = (1 - sx) * (1 - sy) * phi.at(node(i, j)) + sx * (1 - sy) * phi.at(node(i + 1, j)) +
            (1 - sx) * sy * phi.at(node(i, j + 1)) + sx * sy * phi.at(node(i + 1, j + 1));
    return m;
}

std::vector<cplx> eigenvalues_at(const HiggsField& phi, cplx z) {
    Eigen::ComplexEigenSolver<Mat> es(phi_at_point(phi, z), false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + phi.n};
}

double min_pair_gap(const std::vector<cplx>& ev) {
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ev.size(); ++i)
        for (size_t j = i + 1; j < ev.size(); ++j) g = std::min(g, std::abs(ev[i] - ev[j]));
    return g;
}

// Optimal assignment of next against prev, minimizing the largest move.
// n <= 7 here, so permutation enumeration is fine.
std::vector<int> match(const std::vector<cplx>& prev, const std::vector<cplx>& next, double& max_move) {
    const int n = static_cast<int>(prev.size());
    std::vector<int> perm(n), best(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0;
        for (int i = 0; i < n; ++i) cost = std::max(cost, std::abs(next[perm[i]] - prev[i]));
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    max_move = best_cost;
    return best;
}

[[noreturn]] void fail_at(const char* what, double s, double value) {
    std::ostringstream os;
    os << "path_alpha: " << what << " near s=" << s << " (gap " << value << ")";
    throw std::runtime_error(os.str());
}

} // namespace

PathAlphaResult path_alpha(const HiggsField& phi, const PathSpec& path, double tol_disc, double tol_crit) {
    if (phi.n > 7) throw std::invalid_argument("path_alpha: rank too large for permutation matching");
    const cplx dz = path.z1 - path.z0;
    int S = std::max(32, path.samples);
    const int S_max = 1 << 16;
    PathAlphaResult res;

    std::vector<std::vector<cplx>> tracks;  // tracks[i][k]: eigenvalue i at sample k
    while (true) {
        std::vector<std::vector<cplx>> lam(S);
        std::vector<double> gaps(S);
        for (int k = 0; k < S; ++k) {
            const double s = double(k) / (S - 1);
            lam[k] = eigenvalues_at(phi, path.z0 + s * dz);
            gaps[k] = min_pair_gap(lam[k]);
            if (gaps[k] < tol_disc) fail_at("path crosses the discriminant", s, gaps[k]);
        }
        bool needs_refine = false;
        tracks.assign(phi.n, std::vector<cplx>(S));
        for (int i = 0; i < phi.n; ++i) tracks[i][0] = lam[0][i];
        std::vector<cplx> prev = lam[0];
        for (int k = 1; k < S && !needs_refine; ++k) {
            // Gap halving between consecutive samples, or a matching that moves
            // an eigenvalue by a sizable fraction of the gap: sample finer.
            if (gaps[k] < 0.5 * gaps[k - 1]) needs_refine = true;
            double max_move = 0;
            const auto perm = match(prev, lam[k], max_move);
            if (max_move > 0.45 * gaps[k - 1]) needs_refine = true;
            for (int i = 0; i < phi.n; ++i) tracks[i][k] = lam[k][perm[i]];
            prev.clear();
            for (int i = 0; i < phi.n; ++i) prev.push_back(tracks[i][k]);
        }
        res.min_eig_gap = *std::min_element(gaps.begin(), gaps.end());
        if (!needs_refine) {
            res.samples_used = S;
            break;
        }
        if (S >= S_max) {
            // The gap keeps collapsing under refinement: the path runs into a
            // genuine eigenvalue collision between samples.
            const auto kmin = std::min_element(gaps.begin(), gaps.end()) - gaps.begin();
            fail_at("path crosses the discriminant", double(kmin) / (S - 1), res.min_eig_gap);
        }
        S *= 2;
        ++res.refinements;
    }

    // a_i(s) = lambda_i(gamma(s)) * gamma'(s); check non-criticality and order.
    const int n = phi.n;
    res.min_re_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < res.samples_used; ++k) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double g = std::abs((tracks[i][k] * dz).real() - (tracks[j][k] * dz).real());
                res.min_re_gap = std::min(res.min_re_gap, g);
                if (g < tol_crit) fail_at("critical path (equal Re a_i)", double(k) / (res.samples_used - 1), g);
            }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return (tracks[i][0] * dz).real() > (tracks[j][0] * dz).real();
    });

    res.alpha.resize(n);
    const double ds = 1.0 / (res.samples_used - 1);
    for (int oi = 0; oi < n; ++oi) {
        const auto& tr = tracks[order[oi]];
        double integral = 0.5 * ((tr.front() * dz).real() + (tr.back() * dz).real());
        for (int k = 1; k + 1 < res.samples_used; ++k) integral += (tr[k] * dz).real();
        res.alpha(oi) = -integral * ds;
    }
    return res;
}

} // namespace higgslab
