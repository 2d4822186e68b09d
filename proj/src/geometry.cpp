#include "higgslab/geometry.hpp"

#include <cmath>

namespace higgslab {

double energy_trace_pt(const Mat& phi, const Mat& h) {
    const Mat ps = h.inverse() * phi.adjoint() * h;
    return 2.0 * phi.rows() * (phi * ps).trace().real();
}

cplx hopf_pt(const Mat& phi) { return 2.0 * double(phi.rows()) * (phi * phi).trace(); }

std::optional<double> sectional_curvature_pt(const Mat& phi, const Mat& h, double tol_deg) {
    const int n = static_cast<int>(phi.rows());
    const Mat ps = h.inverse() * phi.adjoint() * h;
    const double t11 = (phi * ps).trace().real();
    const cplx t20 = (phi * phi).trace();
    const double den = t11 * t11 - std::norm(t20);
    if (den <= tol_deg * std::max(1.0, t11 * t11)) return std::nullopt;
    const Mat br = phi * ps - ps * phi;
    const double num = (br * br).trace().real();
    return -num / (2.0 * n * den);
}

ScalarField energy_density(const HiggsField& phi, const MetricField& h, const BackgroundMetric& metric) {
    require_same_chart(phi.chart, metric.g0.chart, "energy_density");
    require_same_chart(phi.chart, h.chart, "energy_density");
    ScalarField e(phi.chart);
    for (int p = 0; p < phi.chart->num_nodes(); ++p) {
        const Mat ps = h.inv_at(p) * phi.at(p).adjoint() * h.at(p);
        e[p] = 2.0 * phi.n * (phi.at(p) * ps).trace().real() / metric.g0[p];
    }
    return e;
}

double total_energy(const ScalarField& density, const BackgroundMetric& metric) {
    return integrate_volume(density, metric);
}

ComplexField hopf_differential(const HiggsField& phi) {
    ComplexField out(phi.chart);
    for (int p = 0; p < phi.chart->num_nodes(); ++p) out[p] = hopf_pt(phi.at(p));
    return out;
}

PullbackMetric pullback_metric(const HiggsField& phi, const MetricField& h, double tol_deg) {
    require_same_chart(phi.chart, h.chart, "pullback_metric");
    PullbackMetric out;
    out.p20 = ComplexField(phi.chart);
    out.p11 = ScalarField(phi.chart);
    out.degenerate.assign(phi.chart->num_nodes(), 0);
    double scale = 0;
    for (int p = 0; p < phi.chart->num_nodes(); ++p) {
        out.p20[p] = hopf_pt(phi.at(p));
        out.p11[p] = energy_trace_pt(phi.at(p), h.at(p));
        scale = std::max(scale, out.p11[p] * out.p11[p]);
    }
    for (int p = 0; p < phi.chart->num_nodes(); ++p) {
        if (out.p11[p] * out.p11[p] - std::norm(out.p20[p]) <= tol_deg * scale) {
            out.degenerate[p] = 1;
            ++out.degenerate_count;
        }
    }
    return out;
}

CurvatureField sectional_curvature(const HiggsField& phi, const MetricField& h, double tol_deg) {
    require_same_chart(phi.chart, h.chart, "sectional_curvature");
    CurvatureField out;
    out.k = ScalarField(phi.chart, 0.0);
    out.mask.assign(phi.chart->num_nodes(), 0);
    for (int p = 0; p < phi.chart->num_nodes(); ++p) {
        const auto k = sectional_curvature_pt(phi.at(p), h.at(p), tol_deg);
        if (k) {
            out.k[p] = *k;
        } else {
            out.mask[p] = 1;
            ++out.masked_count;
        }
    }
    return out;
}

CurvatureField gaussian_curvature_conformal(const ScalarField& p11, const ComplexField& hopf,
                                            double tol_conformal) {
    require_same_chart(p11.chart, hopf.chart, "gaussian_curvature_conformal");
    double p11_sup = sup_norm(p11);
    double hopf_sup = 0;
    for (cplx v : hopf.v) hopf_sup = std::max(hopf_sup, std::abs(v));
    if (hopf_sup > tol_conformal * std::max(1.0, p11_sup))
        throw std::invalid_argument("gaussian_curvature_conformal: non-conformal input (Hopf != 0)");

    const Chart& c = *p11.chart;
    CurvatureField out;
    out.k = ScalarField(p11.chart, 0.0);
    out.mask.assign(c.num_nodes(), 1);
    out.masked_count = c.num_nodes();
    ScalarField logp(p11.chart, 0.0);
    for (int p = 0; p < logp.size(); ++p) {
        if (p11[p] <= 0) continue;
        logp[p] = std::log(p11[p]);
    }
    const ScalarField lap = dzbar_dz(logp);  // (1/4) of the Euclidean Laplacian
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            // The log stencil must not touch nonpositive nodes.
            if (!c.is_interior(i, j)) continue;
            bool ok = p11(i, j) > 0;
            const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
            for (int s = 0; s < 4 && ok; ++s) {
                int ii = i + di[s], jj = j + dj[s];
                if (c.kind == ChartKind::Torus) {
                    ii = c.wrap_x(ii);
                    jj = c.wrap_y(jj);
                }
                ok = p11(ii, jj) > 0;
            }
            if (!ok) continue;
            const int p = c.index(i, j);
            out.k[p] = -lap[p] / p11[p];  // -(1/(4 p11)) * Euclidean Laplacian of log p11
            out.mask[p] = 0;
            --out.masked_count;
        }
    return out;
}

FieldStats interior_stats(const ScalarField& f, double rho_int) {
    const Chart& c = *f.chart;
    const double cx = 0.5 * (c.x0 + c.x1), cy = 0.5 * (c.y0 + c.y1);
    const double hx_half = 0.5 * rho_int * (c.x1 - c.x0);
    const double hy_half = 0.5 * rho_int * (c.y1 - c.y0);
    FieldStats st;
    st.min = std::numeric_limits<double>::infinity();
    st.max = -std::numeric_limits<double>::infinity();
    double sum = 0;
    int count = 0;
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            if (!c.is_interior(i, j)) continue;
            if (c.kind == ChartKind::Disk &&
                (std::abs(c.x(i) - cx) > hx_half || std::abs(c.y(j) - cy) > hy_half))
                continue;
            const double v = f(i, j);
            if (v < st.min) {
                st.min = v;
                st.imin = i;
                st.jmin = j;
            }
            if (v > st.max) {
                st.max = v;
                st.imax = i;
                st.jmax = j;
            }
            sum += v;
            ++count;
        }
    st.mean = count ? sum / count : 0.0;
    return st;
}

} // namespace higgslab
