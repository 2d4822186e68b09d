#pragma once

// Derived geometry of the equivariant harmonic map attached to a pair
// (phi, h): energy density and total energy, Hopf differential, pullback
// metric with its degeneracy locus, sectional curvature of the tangent plane
// and the Gaussian curvature of conformal pullbacks.

#include <cstdint>
#include <optional>

#include "higgslab/higgs.hpp"

namespace higgslab {

// --- pointwise forms (single fiber) ------------------------------------------

// 2n tr(phi phi^{*_h}); >= 0.
double energy_trace_pt(const Mat& phi, const Mat& h);
// 2n tr(phi^2).
cplx hopf_pt(const Mat& phi);
// -(1/2n) tr([phi,phi^*]^2) / (tr(phi phi^*)^2 - |tr(phi^2)|^2); empty when the
// denominator is below tol (non-immersed plane).
std::optional<double> sectional_curvature_pt(const Mat& phi, const Mat& h, double tol_deg = 1e-10);

// --- fields -------------------------------------------------------------------

// e(f) = 2n tr(phi phi^{*_h}) / g0.
ScalarField energy_density(const HiggsField& phi, const MetricField& h, const BackgroundMetric& metric);

// Integral of e(f) against the volume form.
double total_energy(const ScalarField& density, const BackgroundMetric& metric);

ComplexField hopf_differential(const HiggsField& phi);

struct PullbackMetric {
    ComplexField p20;  // 2n tr(phi^2); p02 is its conjugate
    ScalarField p11;   // 2n tr(phi phi^{*_h})
    std::vector<std::uint8_t> degenerate;  // p11^2 - |p20|^2 <= tol * scale
    int degenerate_count = 0;
};
PullbackMetric pullback_metric(const HiggsField& phi, const MetricField& h, double tol_deg = 1e-10);

struct CurvatureField {
    ScalarField k;
    std::vector<std::uint8_t> mask;  // 1 where undefined (degenerate plane)
    int masked_count = 0;
};
CurvatureField sectional_curvature(const HiggsField& phi, const MetricField& h, double tol_deg = 1e-10);

// Gaussian curvature -(1/(4 p11)) Lap log(p11) of the conformal pullback
// metric; requires a vanishing Hopf differential (sup |hopf| <= tol * sup p11)
// and positive p11 on the interior. Boundary ring left masked.
CurvatureField gaussian_curvature_conformal(const ScalarField& p11, const ComplexField& hopf,
                                            double tol_conformal = 1e-8);

// Summary of a field restricted to interior nodes.
struct FieldStats {
    double min = 0, max = 0, mean = 0;
    int imin = -1, jmin = -1, imax = -1, jmax = -1;
};
FieldStats interior_stats(const ScalarField& f, double rho_int = 1.0);

} // namespace higgslab
