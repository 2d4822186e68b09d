#include "higgslab/chart.hpp"

#include <cmath>

namespace higgslab {

ChartPtr build_chart(const ChartSpec& spec) {
    if (spec.nx < 9 || spec.ny < 9)
        throw std::invalid_argument("build_chart: nx, ny must be at least 9");
    auto chart = std::make_shared<Chart>();
    chart->kind = spec.kind;
    chart->nx = spec.nx;
    chart->ny = spec.ny;
    if (spec.kind == ChartKind::Disk) {
        if (spec.r_max >= 1.0)
            throw std::invalid_argument("build_chart: singular conformal factor (r_max must be < 1)");
        if (spec.r_max <= 0.0)
            throw std::invalid_argument("build_chart: r_max must be positive");
        // Square inscribed in |z| = r_max: corners touch the circle.
        const double a = spec.r_max / std::sqrt(2.0);
        chart->r_max = spec.r_max;
        chart->x0 = -a; chart->x1 = a;
        chart->y0 = -a; chart->y1 = a;
        chart->hx = (chart->x1 - chart->x0) / (spec.nx - 1);
        chart->hy = (chart->y1 - chart->y0) / (spec.ny - 1);
    } else {
        if (spec.x1 <= spec.x0 || spec.y1 <= spec.y0)
            throw std::invalid_argument("build_chart: torus extents must be positive");
        chart->x0 = spec.x0; chart->x1 = spec.x1;
        chart->y0 = spec.y0; chart->y1 = spec.y1;
        // Opposite edges identified: the x1/y1 node row is the x0/y0 one.
        chart->hx = (spec.x1 - spec.x0) / spec.nx;
        chart->hy = (spec.y1 - spec.y0) / spec.ny;
    }
    return chart;
}

BackgroundMetric hyperbolic_factor(const ChartPtr& chart) {
    if (chart->kind != ChartKind::Disk)
        throw std::invalid_argument("hyperbolic_factor: requires a disk chart");
    BackgroundMetric m;
    m.kind = BackgroundMetric::Kind::Hyperbolic;
    m.g0 = sample_field<double>(chart, [](cplx z) {
        const double s = 1.0 - std::norm(z);
        return 2.0 / (s * s);
    });
    return m;
}

BackgroundMetric flat_metric(const ChartPtr& chart, double value) {
    if (value <= 0.0) throw std::invalid_argument("flat_metric: factor must be positive");
    BackgroundMetric m;
    m.kind = BackgroundMetric::Kind::Flat;
    m.g0 = ScalarField(chart, value);
    return m;
}

namespace {

template <typename T>
Field<T> five_point(const Field<T>& u) {
    const Chart& c = *u.chart;
    Field<T> out(u.chart, T{});
    const double ax = 1.0 / (c.hx * c.hx), ay = 1.0 / (c.hy * c.hy);
    if (c.kind == ChartKind::Torus) {
        for (int j = 0; j < c.ny; ++j)
            for (int i = 0; i < c.nx; ++i) {
                const T uij = u(i, j);
                out(i, j) = 0.25 * (ax * (u(c.wrap_x(i + 1), j) - 2.0 * uij + u(c.wrap_x(i - 1), j)) +
                                    ay * (u(i, c.wrap_y(j + 1)) - 2.0 * uij + u(i, c.wrap_y(j - 1))));
            }
    } else {
        for (int j = 1; j < c.ny - 1; ++j)
            for (int i = 1; i < c.nx - 1; ++i) {
                const T uij = u(i, j);
                out(i, j) = 0.25 * (ax * (u(i + 1, j) - 2.0 * uij + u(i - 1, j)) +
                                    ay * (u(i, j + 1) - 2.0 * uij + u(i, j - 1)));
            }
    }
    return out;
}

template <typename T>
Field<cplx> wirtinger(const Field<T>& u, double sign_iy) {
    const Chart& c = *u.chart;
    Field<cplx> out(u.chart, cplx{});
    const double bx = 1.0 / (2.0 * c.hx), by = 1.0 / (2.0 * c.hy);
    auto val = [&](int i, int j) -> cplx {
        if (c.kind == ChartKind::Torus) return cplx(u(c.wrap_x(i), c.wrap_y(j)));
        return cplx(u(i, j));
    };
    const int jlo = c.kind == ChartKind::Torus ? 0 : 1;
    const int jhi = c.kind == ChartKind::Torus ? c.ny : c.ny - 1;
    const int ilo = jlo, ihi = c.kind == ChartKind::Torus ? c.nx : c.nx - 1;
    for (int j = jlo; j < jhi; ++j)
        for (int i = ilo; i < ihi; ++i) {
            const cplx ux = bx * (val(i + 1, j) - val(i - 1, j));
            const cplx uy = by * (val(i, j + 1) - val(i, j - 1));
            out(i, j) = 0.5 * (ux + sign_iy * cplx(0, 1) * uy);
        }
    return out;
}

} // namespace

ScalarField dzbar_dz(const ScalarField& u) { return five_point(u); }
ComplexField dzbar_dz(const ComplexField& u) { return five_point(u); }

ScalarField laplace_beltrami(const ScalarField& u, const BackgroundMetric& metric) {
    require_same_chart(u.chart, metric.g0.chart, "laplace_beltrami");
    ScalarField out = five_point(u);
    for (int k = 0; k < out.size(); ++k) out[k] /= metric.g0[k];
    return out;
}

ComplexField dz(const ComplexField& u) { return wirtinger(u, -1.0); }
ComplexField dzbar(const ComplexField& u) { return wirtinger(u, +1.0); }

ScalarField conformal_norm_sq(const ComplexField& q, int degree, const BackgroundMetric& metric) {
    if (degree < 2) throw std::invalid_argument("conformal_norm_sq: degree must be >= 2");
    require_same_chart(q.chart, metric.g0.chart, "conformal_norm_sq");
    ScalarField out(q.chart);
    for (int k = 0; k < out.size(); ++k)
        out[k] = std::norm(q[k]) * std::pow(metric.g0[k], -degree);
    return out;
}

double integrate_volume(const ScalarField& f, const BackgroundMetric& metric) {
    require_same_chart(f.chart, metric.g0.chart, "integrate_volume");
    const Chart& c = *f.chart;
    double sum = 0;
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            double w = 1.0;
            if (c.kind == ChartKind::Disk) {
                if (i == 0 || i == c.nx - 1) w *= 0.5;
                if (j == 0 || j == c.ny - 1) w *= 0.5;
            }
            const int k = c.index(i, j);
            sum += w * f[k] * 2.0 * metric.g0[k];
        }
    return sum * c.hx * c.hy;
}

double sup_norm(const ScalarField& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double sup_norm_interior(const ScalarField& f, int depth) {
    const Chart& c = *f.chart;
    double m = 0;
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i)
            if (c.is_deep_interior(i, j, depth)) m = std::max(m, std::abs(f(i, j)));
    return m;
}

double interp(const ScalarField& f, cplx z) {
    const Chart& c = *f.chart;
    double fx = (z.real() - c.x0) / c.hx;
    double fy = (z.imag() - c.y0) / c.hy;
    if (c.kind == ChartKind::Disk) {
        if (fx < 0 || fy < 0 || fx > c.nx - 1 || fy > c.ny - 1)
            throw std::invalid_argument("interp: point outside chart bounds");
        fx = std::min(fx, c.nx - 1.000001);
        fy = std::min(fy, c.ny - 1.000001);
    }
    int i = static_cast<int>(std::floor(fx));
    int j = static_cast<int>(std::floor(fy));
    const double sx = fx - i, sy = fy - j;
    auto at = [&](int ii, int jj) {
        if (c.kind == ChartKind::Torus) return f(c.wrap_x(ii), c.wrap_y(jj));
        return f(std::min(ii, c.nx - 1), std::min(jj, c.ny - 1));
    };
    return (1 - sx) * (1 - sy) * at(i, j) + sx * (1 - sy) * at(i + 1, j) +
           (1 - sx) * sy * at(i, j + 1) + sx * sy * at(i + 1, j + 1);
}

} // namespace higgslab
