#pragma once

// Fiberwise and fieldwise algebra of Higgs data: the explicit matrix families
// (Hitchin section, cyclic, Sp(4)-maximal), metric adjoints, brackets,
// fibration invariants, eigenvalue fields and the vector distance between
// Hermitian metrics on a fiber.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "higgslab/chart.hpp"
#include "higgslab/poly.hpp"

namespace higgslab {

using Mat = Eigen::MatrixXcd;

enum class HiggsFamily { HitchinSection, Cyclic, Sp4Maximal, Generic };

// Subdiagonal convention for the Hitchin section. The worked low-rank examples
// use subdiagonal 1; the general section uses r_i = i(n-i)/2. Both are the
// same family up to a constant diagonal gauge and a rescaling of the q's.
enum class SectionNormalization { UnitSubdiagonal, Weights };

inline double section_weight(int i, int n) { return 0.5 * i * (n - i); }  // r_i, 1 <= i <= n-1

// n x n complex-matrix field on a chart, node-major, column-major per node.
struct MatrixField {
    int n = 0;
    ChartPtr chart;
    std::vector<cplx> a;

    MatrixField() = default;
    MatrixField(int n_, ChartPtr c) : n(n_), chart(std::move(c)), a(size_t(n_) * n_ * chart->num_nodes()) {}

    Eigen::Map<const Mat> at(int node) const { return {a.data() + size_t(node) * n * n, n, n}; }
    Eigen::Map<Mat> at(int node) { return {a.data() + size_t(node) * n * n, n, n}; }
};

struct HiggsField : MatrixField {
    HiggsFamily family = HiggsFamily::Generic;
    // Entry polynomials (n x n, column-major) when the field was built from
    // polynomial data; enables off-grid evaluation for path tracking.
    std::vector<PolyZ> sym;
    bool has_symbolic = false;

    Mat eval(cplx z) const;  // requires has_symbolic
    bool cyclic_shaped(double tol = 0.0) const;
    // gamma_1..gamma_{n-1} (subdiagonal) and gamma_n (corner) as fields.
    std::vector<ComplexField> cyclic_entries() const;
    std::vector<PolyZ> cyclic_entry_polys() const;  // requires has_symbolic
};

// Pointwise positive-definite Hermitian metric of unit determinant; diagonal
// in the cyclic case.
struct MetricField {
    int n = 0;
    ChartPtr chart;
    bool diagonal = true;
    std::vector<ScalarField> hdiag;  // size n when diagonal
    std::vector<cplx> hfull;         // node-major n x n otherwise

    Mat at(int node) const;
    Mat inv_at(int node) const;

    static MetricField identity(ChartPtr chart, int n);
    static MetricField from_logs(const std::vector<ScalarField>& log_h);
};

// --- builders ---------------------------------------------------------------

// Companion-like matrix with subdiagonal constants and the upper q-bands;
// q = (q_2, ..., q_n).
HiggsField build_hitchin_section(const std::vector<ComplexField>& q,
                                 SectionNormalization norm = SectionNormalization::UnitSubdiagonal);
HiggsField build_hitchin_section(const ChartPtr& chart, const std::vector<PolyZ>& q,
                                 SectionNormalization norm = SectionNormalization::UnitSubdiagonal);

// gammas = (gamma_1, ..., gamma_n): subdiagonal entries and the top-right corner.
HiggsField build_cyclic(const std::vector<ComplexField>& gammas);
HiggsField build_cyclic(const ChartPtr& chart, const std::vector<PolyZ>& gammas);

// The 4x4 family covering Hitchin and Gothen components of maximal Sp(4,R)
// representations; degenerates to cyclic shape when q2 vanishes identically.
HiggsField build_sp4_maximal(const ComplexField& q2, const ComplexField& mu, const ComplexField& nu);
HiggsField build_sp4_maximal(const ChartPtr& chart, const PolyZ& q2, const PolyZ& mu, const PolyZ& nu);

// --- pointwise algebra -------------------------------------------------------

inline Mat adjoint_pt(const Mat& phi, const Mat& h) { return h.inverse() * phi.adjoint() * h; }
inline Mat bracket_pt(const Mat& a, const Mat& b) { return a * b - b * a; }

// Characteristic polynomial coefficients p_2..p_n of det(lambda I - A) =
// lambda^n + p_2 lambda^{n-2} + ... + p_n (Faddeev-LeVerrier; p_1 dropped,
// the inputs are traceless).
std::vector<cplx> charpoly_coeffs(const Mat& A);

// k_j = (1/2) log of the generalized eigenvalues of the pencil (h_b, h_a),
// sorted descending. Throws if either matrix is not positive definite.
Eigen::VectorXd vec_distance(const Mat& h_a, const Mat& h_b);

// --- field operations --------------------------------------------------------

// phi^{*_H} = h^{-1} conj(phi)^t h, pointwise.
MatrixField adjoint_higgs(const MatrixField& phi, const MetricField& h);

MatrixField bracket(const MatrixField& a, const MatrixField& b);

// Norm of the 2-form [phi, phi^*] dz wedge dzbar: h-weighted Frobenius norm of
// the coefficient divided by g0.
ScalarField bracket_norm(const MatrixField& br, const MetricField& h, const BackgroundMetric& metric);

std::vector<ComplexField> fibration_base(const MatrixField& phi);

HiggsField scale_action(cplx t, const HiggsField& phi);

struct EigenFieldResult {
    std::vector<ComplexField> lambda;  // n fields, sorted by (Re, Im) per node
    std::vector<std::uint8_t> mask;    // 1 where the min pairwise gap < tol
    int masked_count = 0;
};
EigenFieldResult eigen_field(const MatrixField& phi, double tol_disc = 1e-8);

double max_abs_trace(const MatrixField& phi);

} // namespace higgslab
