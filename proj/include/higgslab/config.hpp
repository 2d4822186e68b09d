#pragma once

// Key-value experiment configuration. One "key = value" pair per line,
// '#' starts a comment. Unknown keys are rejected with a line diagnostic.
//
// Keys (see README for the full reference):
//   experiment   solve | claims | sweep-t | decouple | wkb | curvature-scan | domination
//   chart        disk | torus          r_max, grid / nx ny, bounds
//   metric       hyperbolic | flat     flat_value
//   rank         2..6
//   family       hitchin | cyclic      normalization = unit | weights
//   q, q2..q9    polynomial entries (hitchin); q is an alias for the top one
//   gamma1..     polynomial entries (cyclic)
//   t_grid       positive, strictly increasing list; or t_min/t_max/t_count geometric
//   tol, max_iter, seed, rho_int, exclude_radius, path, path_samples, out

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "higgslab/chart.hpp"
#include "higgslab/higgs.hpp"
#include "higgslab/path.hpp"
#include "higgslab/toda.hpp"

namespace higgslab {

struct ConfigDoc {
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string source = "<config>";
    std::map<std::string, Entry> entries;

    static ConfigDoc parse_file(const std::filesystem::path& path);
    static ConfigDoc parse_text(const std::string& text, const std::string& source_name = "<config>");

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    std::string str(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
};

enum class ExperimentKind { Solve, Claims, SweepT, Decouple, Wkb, CurvatureScan, Domination };

std::string kind_name(ExperimentKind k);

struct HiggsSpec {
    int rank = 2;
    HiggsFamily family = HiggsFamily::HitchinSection;
    SectionNormalization normalization = SectionNormalization::UnitSubdiagonal;
    std::vector<PolyZ> q;       // q_2..q_n (hitchin)
    std::vector<PolyZ> gammas;  // gamma_1..gamma_n (cyclic)
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Solve;
    ChartSpec chart;
    BackgroundMetric::Kind metric_kind = BackgroundMetric::Kind::Hyperbolic;
    double flat_value = 1.0;
    HiggsSpec higgs;
    // Dirichlet data on disk charts; the decouple experiment defaults to the
    // abelianized profile, everything else to the Fuchsian values.
    BoundaryData boundary = BoundaryData::Fuchsian;
    std::vector<double> t_grid;  // positive, strictly increasing
    double tol = 1e-10;
    int max_iter = 50;
    unsigned seed = 1234;
    double rho_int = 0.8;
    double exclude_radius = 0.0;
    std::optional<PathSpec> path;
    std::filesystem::path out = "out";
};

struct CliOverrides {
    std::optional<ExperimentKind> kind;
    std::optional<std::string> out;
    std::optional<int> grid;
    std::optional<double> tol;
    std::optional<unsigned> seed;
};

ExperimentConfig parse_experiment(const ConfigDoc& doc, const CliOverrides& overrides = {});

struct Problem {
    ChartPtr chart;
    BackgroundMetric metric;
    HiggsField phi;
};

Problem materialize(const ExperimentConfig& cfg);

} // namespace higgslab
