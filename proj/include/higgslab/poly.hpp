#pragma once

// Polynomials in the chart coordinate z with complex coefficients. This is the
// entry type of the Higgs-data configuration format: every q / gamma entry is
// either a constant complex number or such a polynomial.
//
// Accepted syntax (whitespace-insensitive):
//   0.7            constant
//   (0.3,-1)       constant re,im
//   0.3z           monomial, '*' optional: 0.3*z
//   z^3            powers with '^'
//   1 + 2z - (0,1)z^2

#include <string>
#include <string_view>
#include <vector>

#include "higgslab/chart.hpp"

namespace higgslab {

struct PolyZ {
    std::vector<cplx> c;  // c[k] multiplies z^k

    PolyZ() = default;
    explicit PolyZ(cplx constant) : c{constant} {}

    static PolyZ parse(std::string_view text);

    cplx operator()(cplx z) const;
    bool is_zero() const;
    bool is_constant() const;
    int degree() const;  // -1 for the zero polynomial
    PolyZ scaled(cplx factor) const;
    std::string str() const;
};

ComplexField sample_poly(const ChartPtr& chart, const PolyZ& p);

} // namespace higgslab
