#pragma once

// Discretized planar coordinate charts, background conformal metrics and the
// differential operators every other module is built on.
//
// Two chart kinds:
//   - disk: a square inscribed in the circle |z| = r_max < 1 (corners touch
//     the circle), uniform grid, Dirichlet boundary ring;
//   - torus: a rectangle with opposite edges identified, uniform grid, no
//     duplicated boundary nodes.
//
// Complex derivatives use the Wirtinger identity d/dzbar d/dz = (1/4) * (d_xx + d_yy).

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace higgslab {

using cplx = std::complex<double>;

enum class ChartKind { Disk, Torus };

struct Chart {
    ChartKind kind = ChartKind::Disk;
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    int nx = 0, ny = 0;
    double hx = 0, hy = 0;
    double r_max = 0;  // disk only

    int num_nodes() const { return nx * ny; }
    int index(int i, int j) const { return j * nx + i; }
    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
    cplx z(int i, int j) const { return {x(i), y(j)}; }

    bool is_boundary(int i, int j) const {
        if (kind == ChartKind::Torus) return false;
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }
    // Nodes whose full 5-point stencil lives on grid nodes (all, for a torus).
    bool is_interior(int i, int j) const { return !is_boundary(i, j); }
    // Nodes at graph distance >= depth from the boundary ring.
    bool is_deep_interior(int i, int j, int depth) const {
        if (kind == ChartKind::Torus) return true;
        return i >= depth && j >= depth && i <= nx - 1 - depth && j <= ny - 1 - depth;
    }
    int wrap_x(int i) const { return (i % nx + nx) % nx; }
    int wrap_y(int j) const { return (j % ny + ny) % ny; }
};

using ChartPtr = std::shared_ptr<const Chart>;

struct ChartSpec {
    ChartKind kind = ChartKind::Disk;
    double r_max = 0.8;                        // disk
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;     // torus bounds
    int nx = 129, ny = 129;
};

ChartPtr build_chart(const ChartSpec& spec);

template <typename T>
struct Field {
    ChartPtr chart;
    std::vector<T> v;

    Field() = default;
    Field(ChartPtr c, T fill = T{}) : chart(std::move(c)), v(chart->num_nodes(), fill) {}

    T& operator()(int i, int j) { return v[chart->index(i, j)]; }
    const T& operator()(int i, int j) const { return v[chart->index(i, j)]; }
    T& operator[](int node) { return v[node]; }
    const T& operator[](int node) const { return v[node]; }
    int size() const { return static_cast<int>(v.size()); }
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

template <typename T, typename F>
Field<T> sample_field(const ChartPtr& chart, F&& fn) {
    Field<T> out(chart);
    for (int j = 0; j < chart->ny; ++j)
        for (int i = 0; i < chart->nx; ++i) out(i, j) = fn(chart->z(i, j));
    return out;
}

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where) {
    if (!a || !b || a->nx != b->nx || a->ny != b->ny || a->kind != b->kind)
        throw std::invalid_argument(std::string(where) + ": fields live on different charts");
}

struct BackgroundMetric {
    enum class Kind { Hyperbolic, Flat };
    Kind kind = Kind::Flat;
    ScalarField g0;
    // d/dzbar d/dz log g0, known in closed form: g0 itself (hyperbolic) or 0 (flat).
    double lap_log_g0(int node) const { return kind == Kind::Hyperbolic ? g0[node] : 0.0; }
};

// Poincare-type factor g0(z) = 2/(1-|z|^2)^2 on a disk chart; satisfies
// d/dzbar d/dz log g0 = g0 (curvature -1 in the convention g0 (dz dzbar + dzbar dz)).
BackgroundMetric hyperbolic_factor(const ChartPtr& chart);
BackgroundMetric flat_metric(const ChartPtr& chart, double value = 1.0);

// (1/4) (u_xx + u_yy) by the 5-point stencil; zero on the boundary ring of a
// disk chart, periodic on a torus.
ScalarField dzbar_dz(const ScalarField& u);
ComplexField dzbar_dz(const ComplexField& u);

// Laplace-Beltrami (1/g0) d/dzbar d/dz.
ScalarField laplace_beltrami(const ScalarField& u, const BackgroundMetric& metric);

// Central-difference Wirtinger derivatives (d/dz = (d_x - i d_y)/2 etc.);
// boundary ring of a disk chart is left zero.
ComplexField dz(const ComplexField& u);
ComplexField dzbar(const ComplexField& u);

// Pointwise |q|^2 g0^{-degree}; degree >= 2.
ScalarField conformal_norm_sq(const ComplexField& q, int degree, const BackgroundMetric& metric);

// Integral against the volume form 2 g0 dx dy (trapezoid weights on a disk,
// plain node sum on a torus).
double integrate_volume(const ScalarField& f, const BackgroundMetric& metric);

double sup_norm(const ScalarField& f);
double sup_norm_interior(const ScalarField& f, int depth = 1);

// Bilinear interpolation at a chart point (disk: point must be inside bounds).
double interp(const ScalarField& f, cplx z);

} // namespace higgslab
