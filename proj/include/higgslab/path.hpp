#pragma once

// Eigenvalue tracking along chart paths and the alpha functionals
// alpha_i = -int_0^1 Re(a_i(s)) ds, where a_i ds is the pullback of the i-th
// eigen 1-form and the a_i are ordered Re(a_1) > ... > Re(a_n).

#include <Eigen/Dense>

#include "higgslab/higgs.hpp"

namespace higgslab {

// Straight segment gamma(s) = z0 + s (z1 - z0), s in [0,1].
struct PathSpec {
    cplx z0{};
    cplx z1{};
    int samples = 129;  // initial sampling; refined adaptively, min 32
};

struct PathAlphaResult {
    Eigen::VectorXd alpha;   // ordered by descending Re(a_i)
    double min_eig_gap = 0;  // over samples, min pairwise |lambda_i - lambda_j|
    double min_re_gap = 0;   // over samples, min pairwise |Re a_i - Re a_j|
    int samples_used = 0;
    int refinements = 0;
};

// Throws std::runtime_error naming the parameter s when the path crosses the
// discriminant (eigenvalue gap < tol_disc) or is critical (real-part gap of
// the a_i < tol_crit).
PathAlphaResult path_alpha(const HiggsField& phi, const PathSpec& path, double tol_disc = 1e-8,
                           double tol_crit = 1e-8);

} // namespace higgslab
