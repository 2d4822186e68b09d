#pragma once

// Plain-text snapshots of chart fields.
//
// Format: a header line "nx ny x0 x1 y0 y1 kind" (kind is "disk" or "torus"),
// then one node per line "i j value" (scalar) or "i j re im" (complex) in
// row-major order (j outer, i inner). Decimal formatting is locale-independent
// and round-trips doubles exactly.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "higgslab/chart.hpp"

namespace higgslab {

std::string format_double(double x);  // shortest exact round-trip decimal
double parse_double(const std::string& s);

void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const ComplexField& f);
void write_field(const std::filesystem::path& path, const ScalarField& f);
void write_field(const std::filesystem::path& path, const ComplexField& f);

ScalarField read_scalar_field(std::istream& is);
ComplexField read_complex_field(std::istream& is);
ScalarField read_scalar_field(const std::filesystem::path& path);
ComplexField read_complex_field(const std::filesystem::path& path);

} // namespace higgslab
