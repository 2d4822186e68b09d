#pragma once

// Discrete Hitchin equation for cyclic Higgs data under the diagonal-metric
// ansatz: the coupled semilinear elliptic system
//
//   dzbar dz log h_i - (|gamma_{i-1}|^2 h_{i-1}^{-1} h_i - |gamma_i|^2 h_i^{-1} h_{i+1}) = 0
//
// (indices cyclic) in the log unknowns, with the unit-determinant constraint
// eliminated structurally and an optional real-cyclic reduction.
//
// Unknowns are offsets against an analytic background profile
// h_i = c_i g0^{-w_i} e^{psi_i}; the background Laplacian uses the hyperbolic
// identity dzbar dz log g0 = g0 in closed form, so the Fuchsian and torus
// constant solutions are exact solutions of the discrete system.

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "higgslab/higgs.hpp"

namespace higgslab {

enum class Reduction { Full, RealCyclic };

struct SolverConfig {
    double tol = 1e-10;  // residual sup-norm
    int max_iter = 50;
    double min_step = 1.0 / 1048576.0;  // 2^-20
    double lin_tol = 1e-3;              // relative linear tolerance (inexact Newton)
    int lin_max_iter = 20000;
};

struct ConstantSolution {
    // h_i = exp(log_h[i]) * g0^{-weight[i]}; weights are zero on a flat chart.
    std::vector<double> log_h;
    std::vector<double> weight;
};

// Exact solution of the Laplacian-free algebraic system: constant cyclic data
// on a flat chart, or vanishing corner entry on a hyperbolic chart. Throws
// when no positive solution exists.
ConstantSolution constant_oracle(const HiggsField& phi, const BackgroundMetric& metric);

struct TodaSystem {
    int n = 0;
    Reduction reduction = Reduction::Full;
    int k_unknowns = 0;
    ChartPtr chart;
    BackgroundMetric metric;
    std::vector<ScalarField> gamma_sq;  // |gamma_i|^2, 0-based; [n-1] is the corner
    std::vector<double> weight;         // background exponents w_i
    std::vector<double> log_c;          // background constants log c_i
    std::vector<ScalarField> bg_ratio;  // B_{i+1}/B_i (cyclic), B_i = c_i g0^{-w_i}
    std::vector<ScalarField> lap_bg;    // analytic dzbar dz log B_i
    std::vector<int> solve_nodes;
    std::vector<int> node_rank;  // node -> position in solve_nodes, or -1

    struct PsiTerm {
        int col;
        double sign;
    };
    std::vector<std::vector<PsiTerm>> psi_map;  // psi_i = sum sign * unknown[col]
    std::vector<ScalarField> psi0;  // initial state; nonzero only at Dirichlet nodes

    std::vector<ScalarField> expand_psi(const std::vector<ScalarField>& unknowns) const;
    // Flux fields G_i = |gamma_i|^2 h_i^{-1} h_{i+1} at the given state.
    std::vector<ScalarField> flux(const std::vector<ScalarField>& psi_full) const;
    std::vector<ScalarField> residual(const std::vector<ScalarField>& unknowns) const;
    double residual_sup(const std::vector<ScalarField>& res) const;
};

// Dirichlet data on disk charts: the vanishing-corner constant solution (the
// Fuchsian baseline), or the abelianized profile with all fluxes equal
// pointwise (the large-t decoupled limit; needs nowhere-zero entries on the
// boundary ring).
enum class BoundaryData { Fuchsian, Decoupled };

struct AssembleOptions {
    std::optional<Reduction> reduction;  // default: RealCyclic when the data is symmetric
    BoundaryData boundary = BoundaryData::Fuchsian;
    double sym_tol = 1e-12;
};

TodaSystem assemble_cyclic(const HiggsField& phi, const BackgroundMetric& metric,
                           const AssembleOptions& opts = {});

struct Solution {
    bool converged = false;
    int iterations = 0;
    double final_residual = 0;
    std::vector<double> residual_trace;  // sup-norm per accepted step, [0] = initial
    double wall_seconds = 0;
    std::string failure;

    std::vector<ScalarField> psi;    // unknown fields
    std::vector<ScalarField> log_h;  // all n log h_i fields
    ScalarField u;                   // u with h_1 = g0^{-w_1} e^u
};

Solution solve_newton(const TodaSystem& sys, const SolverConfig& cfg = {});

MetricField harmonic_metric(const Solution& sol);

// Full n x n matrix residual of dzbar(h^{-1} dz h) - [phi, phi^{*_h}] with
// central differences on the h entries; a cross-check independent of the
// scalar reduction. Evaluated where the double stencil fits.
struct MatrixResidual {
    double sup = 0;
    ScalarField frobenius;  // per-node Frobenius norm
};
MatrixResidual residual_matrix(const Solution& sol, const HiggsField& phi);

// Coupling coefficient matrices c_ij of the linearized cyclic system at each
// solve node (Laplacian excluded): the pattern checked by the maximum
// principle for cooperative systems.
std::vector<Eigen::MatrixXd> coupling_matrices(const TodaSystem& sys,
                                               const std::vector<ScalarField>* unknowns = nullptr);

struct CooperativeReport {
    bool cooperative = false;      // off-diagonal entries >= 0
    bool column_dominant = false;  // column sums <= 0 (within roundoff)
    bool fully_coupled = false;    // coupling graph irreducible
    double min_offdiag = 0;
    double max_colsum = 0;
    bool all() const { return cooperative && column_dominant && fully_coupled; }
};
CooperativeReport cooperative_check(const std::vector<Eigen::MatrixXd>& coeffs, double tol = 1e-12);

// Coefficient matrices of the difference system v_k = u_{k+1} - u_k built from
// a converged real-cyclic solve, with c_k = int_0^1 exp(t u_{k+1} + (1-t) u_k) dt.
// Nodes near zeros of the corner entry are excluded.
struct VkSystem {
    std::vector<Eigen::MatrixXd> coeffs;
    std::vector<int> nodes;
};
VkSystem vk_coupling(const TodaSystem& sys, const Solution& sol, double zero_exclusion_cells = 2.0);

// Margins of the strict inequalities satisfied by Hitchin-section cyclic
// solves: rank 2/3 claims (i)/(ii) and the rank-n chain
// ||q_n||^2 < ||r_1||^2 < ... < ||r_m||^2, all reduced to flux norms.
struct ClaimsOptions {
    double rho_int = 0.8;             // inner fraction of the chart evaluated
    double zero_exclusion_cells = 2;  // radius (in h) excluded around zeros of q_n
};
struct MarginField {
    std::string name;
    ScalarField margin;
    double min = 0;
    int imin = -1, jmin = -1;
};
struct ClaimsReport {
    std::vector<MarginField> margins;
    bool degenerate_qzero = false;  // corner identically zero: equality case
    double min_margin = 0;
};
ClaimsReport claims_margin(const TodaSystem& sys, const Solution& sol,
                           const ClaimsOptions& opts = {});

} // namespace higgslab
