#include "higgslab/higgs.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace higgslab {

Mat HiggsField::eval(cplx z) const {
    if (!has_symbolic) throw std::logic_error("HiggsField::eval: no symbolic entries available");
    Mat m(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) m(r, c) = sym[size_t(c) * n + r](z);
    return m;
}

bool HiggsField::cyclic_shaped(double tol) const {
    for (int node = 0; node < chart->num_nodes(); ++node) {
        const auto m = at(node);
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) {
                const bool allowed = (r == c + 1) || (r == 0 && c == n - 1);
                if (!allowed && std::abs(m(r, c)) > tol) return false;
            }
    }
    return true;
}

std::vector<ComplexField> HiggsField::cyclic_entries() const {
    if (!cyclic_shaped(0.0)) throw std::invalid_argument("cyclic_entries: field is not cyclic-shaped");
    std::vector<ComplexField> g(n, ComplexField(chart));
    for (int node = 0; node < chart->num_nodes(); ++node) {
        const auto m = at(node);
        for (int i = 0; i < n - 1; ++i) g[i][node] = m(i + 1, i);
        g[n - 1][node] = m(0, n - 1);
    }
    return g;
}

std::vector<PolyZ> HiggsField::cyclic_entry_polys() const {
    if (!has_symbolic) throw std::logic_error("cyclic_entry_polys: no symbolic entries");
    std::vector<PolyZ> g(n);
    for (int i = 0; i < n - 1; ++i) g[i] = sym[size_t(i) * n + (i + 1)];
    g[n - 1] = sym[size_t(n - 1) * n + 0];
    return g;
}

Mat MetricField::at(int node) const {
    Mat m = Mat::Zero(n, n);
    if (diagonal) {
        for (int i = 0; i < n; ++i) m(i, i) = hdiag[i][node];
    } else {
        m = Eigen::Map<const Mat>(hfull.data() + size_t(node) * n * n, n, n);
    }
    return m;
}

Mat MetricField::inv_at(int node) const {
    if (diagonal) {
        Mat m = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0 / hdiag[i][node];
        return m;
    }
    return at(node).inverse();
}

MetricField MetricField::identity(ChartPtr chart, int n) {
    MetricField h;
    h.n = n;
    h.chart = chart;
    h.diagonal = true;
    h.hdiag.assign(n, ScalarField(chart, 1.0));
    return h;
}

MetricField MetricField::from_logs(const std::vector<ScalarField>& log_h) {
    if (log_h.empty()) throw std::invalid_argument("MetricField::from_logs: empty input");
    MetricField h;
    h.n = static_cast<int>(log_h.size());
    h.chart = log_h[0].chart;
    h.diagonal = true;
    h.hdiag.reserve(h.n);
    for (const auto& l : log_h) {
        ScalarField e(h.chart);
        for (int k = 0; k < e.size(); ++k) e[k] = std::exp(l[k]);
        h.hdiag.push_back(std::move(e));
    }
    return h;
}

// --- builders ---------------------------------------------------------------

namespace {

void check_list(const std::vector<ComplexField>& fs, size_t expected, const char* what) {
    if (fs.size() != expected)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                    " entry fields, got " + std::to_string(fs.size()));
    for (size_t i = 1; i < fs.size(); ++i) require_same_chart(fs[0].chart, fs[i].chart, what);
}

std::vector<PolyZ> zero_sym(int n) { return std::vector<PolyZ>(size_t(n) * n); }

} // namespace

HiggsField build_hitchin_section(const std::vector<ComplexField>& q, SectionNormalization norm) {
    const int n = static_cast<int>(q.size()) + 1;
    if (n < 2) throw std::invalid_argument("build_hitchin_section: need q_2..q_n");
    check_list(q, size_t(n) - 1, "build_hitchin_section");
    HiggsField phi;
    static_cast<MatrixField&>(phi) = MatrixField(n, q[0].chart);
    phi.family = HiggsFamily::HitchinSection;
    for (int node = 0; node < phi.chart->num_nodes(); ++node) {
        auto m = phi.at(node);
        m.setZero();
        for (int i = 1; i < n; ++i)
            m(i, i - 1) = norm == SectionNormalization::UnitSubdiagonal ? 1.0 : section_weight(i, n);
        for (int r = 0; r < n; ++r)
            for (int c = r + 1; c < n; ++c) m(r, c) = q[c - r - 1][node];
    }
    return phi;
}

HiggsField build_hitchin_section(const ChartPtr& chart, const std::vector<PolyZ>& q,
                                 SectionNormalization norm) {
    std::vector<ComplexField> qf;
    qf.reserve(q.size());
    for (const auto& p : q) qf.push_back(sample_poly(chart, p));
    HiggsField phi = build_hitchin_section(qf, norm);
    const int n = phi.n;
    phi.sym = zero_sym(n);
    for (int i = 1; i < n; ++i)
        phi.sym[size_t(i - 1) * n + i] =
            PolyZ(norm == SectionNormalization::UnitSubdiagonal ? 1.0 : section_weight(i, n));
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) phi.sym[size_t(c) * n + r] = q[c - r - 1];
    phi.has_symbolic = true;
    return phi;
}

HiggsField build_cyclic(const std::vector<ComplexField>& gammas) {
    const int n = static_cast<int>(gammas.size());
    if (n < 2) throw std::invalid_argument("build_cyclic: rank must be >= 2");
    check_list(gammas, size_t(n), "build_cyclic");
    HiggsField phi;
    static_cast<MatrixField&>(phi) = MatrixField(n, gammas[0].chart);
    phi.family = HiggsFamily::Cyclic;
    for (int node = 0; node < phi.chart->num_nodes(); ++node) {
        auto m = phi.at(node);
        m.setZero();
        for (int i = 1; i < n; ++i) m(i, i - 1) = gammas[i - 1][node];
        m(0, n - 1) = gammas[n - 1][node];
    }
    return phi;
}

HiggsField build_cyclic(const ChartPtr& chart, const std::vector<PolyZ>& gammas) {
    std::vector<ComplexField> gf;
    gf.reserve(gammas.size());
    for (const auto& p : gammas) gf.push_back(sample_poly(chart, p));
    HiggsField phi = build_cyclic(gf);
    const int n = phi.n;
    phi.sym = zero_sym(n);
    for (int i = 1; i < n; ++i) phi.sym[size_t(i - 1) * n + i] = gammas[i - 1];
    phi.sym[size_t(n - 1) * n + 0] = gammas[n - 1];
    phi.has_symbolic = true;
    return phi;
}

HiggsField build_sp4_maximal(const ComplexField& q2, const ComplexField& mu, const ComplexField& nu) {
    require_same_chart(q2.chart, mu.chart, "build_sp4_maximal");
    require_same_chart(q2.chart, nu.chart, "build_sp4_maximal");
    HiggsField phi;
    static_cast<MatrixField&>(phi) = MatrixField(4, q2.chart);
    bool q2_zero = true;
    for (int node = 0; node < phi.chart->num_nodes(); ++node) {
        auto m = phi.at(node);
        m.setZero();
        m(0, 1) = q2[node];
        m(0, 3) = nu[node];
        m(1, 0) = 1.0;
        m(2, 1) = mu[node];
        m(2, 3) = q2[node];
        m(3, 2) = 1.0;
        if (q2[node] != cplx{}) q2_zero = false;
    }
    phi.family = q2_zero ? HiggsFamily::Cyclic : HiggsFamily::Sp4Maximal;
    return phi;
}

HiggsField build_sp4_maximal(const ChartPtr& chart, const PolyZ& q2, const PolyZ& mu, const PolyZ& nu) {
    HiggsField phi = build_sp4_maximal(sample_poly(chart, q2), sample_poly(chart, mu), sample_poly(chart, nu));
    phi.sym = zero_sym(4);
    phi.sym[4 * 1 + 0] = q2;
    phi.sym[4 * 3 + 0] = nu;
    phi.sym[4 * 0 + 1] = PolyZ(1.0);
    phi.sym[4 * 1 + 2] = mu;
    phi.sym[4 * 3 + 2] = q2;
    phi.sym[4 * 2 + 3] = PolyZ(1.0);
    phi.has_symbolic = true;
    return phi;
}

// --- pointwise algebra -------------------------------------------------------

std::vector<cplx> charpoly_coeffs(const Mat& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<cplx> c(n);
    Mat M = A;
    c[0] = -M.trace();
    const Mat I = Mat::Identity(n, n);
    for (int k = 2; k <= n; ++k) {
        M = A * (M + c[k - 2] * I);
        c[k - 1] = -M.trace() / double(k);
    }
    return {c.begin() + 1, c.end()};  // p_2..p_n
}

Eigen::VectorXd vec_distance(const Mat& h_a, const Mat& h_b) {
    if (h_a.rows() != h_b.rows()) throw std::invalid_argument("vec_distance: size mismatch");
    Eigen::LLT<Mat> llt_a(h_a), llt_b(h_b);
    if (llt_a.info() != Eigen::Success || llt_b.info() != Eigen::Success)
        throw std::invalid_argument("vec_distance: inputs must be positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(h_b, h_a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();  // ascending
    const int n = static_cast<int>(ev.size());
    Eigen::VectorXd k(n);
    for (int j = 0; j < n; ++j) k(j) = 0.5 * std::log(ev(n - 1 - j));
    return k;
}

// --- field operations --------------------------------------------------------

MatrixField adjoint_higgs(const MatrixField& phi, const MetricField& h) {
    require_same_chart(phi.chart, h.chart, "adjoint_higgs");
    if (phi.n != h.n) throw std::invalid_argument("adjoint_higgs: rank mismatch");
    if (h.diagonal)
        for (const auto& d : h.hdiag)
            for (double x : d.v)
                if (!(x > 0)) throw std::invalid_argument("adjoint_higgs: metric not positive definite");
    MatrixField out(phi.n, phi.chart);
    for (int node = 0; node < phi.chart->num_nodes(); ++node)
        out.at(node) = h.inv_at(node) * phi.at(node).adjoint() * h.at(node);
    return out;
}

MatrixField bracket(const MatrixField& a, const MatrixField& b) {
    require_same_chart(a.chart, b.chart, "bracket");
    if (a.n != b.n) throw std::invalid_argument("bracket: rank mismatch");
    MatrixField out(a.n, a.chart);
    for (int node = 0; node < a.chart->num_nodes(); ++node)
        out.at(node) = a.at(node) * b.at(node) - b.at(node) * a.at(node);
    return out;
}

ScalarField bracket_norm(const MatrixField& br, const MetricField& h, const BackgroundMetric& metric) {
    require_same_chart(br.chart, metric.g0.chart, "bracket_norm");
    ScalarField out(br.chart);
    for (int node = 0; node < br.chart->num_nodes(); ++node) {
        const Mat B = br.at(node);
        const Mat Bs = h.inv_at(node) * B.adjoint() * h.at(node);
        const double tr = (B * Bs).trace().real();
        out[node] = std::sqrt(std::max(0.0, tr)) / metric.g0[node];
    }
    return out;
}

std::vector<ComplexField> fibration_base(const MatrixField& phi) {
    std::vector<ComplexField> p(size_t(phi.n) - 1, ComplexField(phi.chart));
    for (int node = 0; node < phi.chart->num_nodes(); ++node) {
        const auto c = charpoly_coeffs(phi.at(node));
        for (size_t k = 0; k < c.size(); ++k) p[k][node] = c[k];
    }
    return p;
}

HiggsField scale_action(cplx t, const HiggsField& phi) {
    HiggsField out = phi;
    for (cplx& x : out.a) x *= t;
    if (out.has_symbolic)
        for (PolyZ& p : out.sym) p = p.scaled(t);
    return out;
}

EigenFieldResult eigen_field(const MatrixField& phi, double tol_disc) {
    EigenFieldResult res;
    res.lambda.assign(phi.n, ComplexField(phi.chart));
    res.mask.assign(phi.chart->num_nodes(), 0);
    Eigen::ComplexEigenSolver<Mat> es;
    for (int node = 0; node < phi.chart->num_nodes(); ++node) {
        es.compute(phi.at(node), /*computeEigenvectors=*/false);
        std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + phi.n);
        std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < phi.n; ++i) {
            res.lambda[i][node] = ev[i];
            for (int j = i + 1; j < phi.n; ++j) min_gap = std::min(min_gap, std::abs(ev[i] - ev[j]));
        }
        if (min_gap < tol_disc) {
            res.mask[node] = 1;
            ++res.masked_count;
        }
    }
    return res;
}

double max_abs_trace(const MatrixField& phi) {
    double m = 0;
    for (int node = 0; node < phi.chart->num_nodes(); ++node)
        m = std::max(m, std::abs(phi.at(node).trace()));
    return m;
}

} // namespace higgslab
