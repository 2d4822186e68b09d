#include "higgslab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "higgslab/field_io.hpp"

namespace higgslab {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

} // namespace

ConfigDoc ConfigDoc::parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_text(ss.str(), path.string());
}

ConfigDoc ConfigDoc::parse_text(const std::string& text, const std::string& source_name) {
    ConfigDoc doc;
    doc.source = source_name;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                                     ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": empty key");
        if (doc.entries.count(key))
            throw std::runtime_error(source_name + ":" + std::to_string(lineno) + ": duplicate key '" +
                                     key + "' (first at line " + std::to_string(doc.entries[key].line) + ")");
        doc.entries[key] = {value, lineno};
    }
    return doc;
}

void ConfigDoc::fail(const std::string& key, const std::string& what) const {
    auto it = entries.find(key);
    const std::string loc =
        it == entries.end() ? source : source + ":" + std::to_string(it->second.line);
    throw std::runtime_error(loc + ": key '" + key + "': " + what);
}

std::string ConfigDoc::str(const std::string& key, const std::string& fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.value;
}

double ConfigDoc::number(const std::string& key, double fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        return parse_double(it->second.value);
    } catch (const std::exception&) {
        fail(key, "expected a number, got '" + it->second.value + "'");
    }
}

int ConfigDoc::integer(const std::string& key, int fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    int v = 0;
    const auto& s = it->second.value;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail(key, "expected an integer, got '" + s + "'");
    return v;
}

std::vector<double> ConfigDoc::numbers(const std::string& key) const {
    auto it = entries.find(key);
    std::vector<double> out;
    if (it == entries.end()) return out;
    std::istringstream is(it->second.value);
    std::string tok;
    while (is >> tok) {
        try {
            out.push_back(parse_double(tok));
        } catch (const std::exception&) {
            fail(key, "expected a list of numbers, got '" + it->second.value + "'");
        }
    }
    return out;
}

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Solve: return "solve";
        case ExperimentKind::Claims: return "claims";
        case ExperimentKind::SweepT: return "sweep-t";
        case ExperimentKind::Decouple: return "decouple";
        case ExperimentKind::Wkb: return "wkb";
        case ExperimentKind::CurvatureScan: return "curvature-scan";
        case ExperimentKind::Domination: return "domination";
    }
    return "?";
}

namespace {

ExperimentKind parse_kind(const ConfigDoc& doc, const std::string& value) {
    for (ExperimentKind k : {ExperimentKind::Solve, ExperimentKind::Claims, ExperimentKind::SweepT,
                             ExperimentKind::Decouple, ExperimentKind::Wkb,
                             ExperimentKind::CurvatureScan, ExperimentKind::Domination})
        if (kind_name(k) == value) return k;
    doc.fail("experiment", "unknown experiment kind '" + value + "'");
}

PolyZ poly_key(const ConfigDoc& doc, const std::string& key, const PolyZ& fallback) {
    if (!doc.has(key)) return fallback;
    try {
        return PolyZ::parse(doc.entries.at(key).value);
    } catch (const std::exception& e) {
        doc.fail(key, e.what());
    }
}

const std::set<std::string> kKnownKeys = {
    "experiment", "chart", "r_max", "grid", "nx", "ny", "bounds", "metric", "flat_value",
    "rank", "family", "normalization", "q", "boundary", "t_grid", "t_min", "t_max", "t_count",
    "tol", "max_iter", "seed", "rho_int", "exclude_radius", "path", "path_samples", "out"};

bool known_key(const std::string& key) {
    if (kKnownKeys.count(key)) return true;
    auto numbered = [&](const std::string& prefix) {
        if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) return false;
        return std::all_of(key.begin() + prefix.size(), key.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    return numbered("q") || numbered("gamma");
}

} // namespace

ExperimentConfig parse_experiment(const ConfigDoc& doc, const CliOverrides& overrides) {
    for (const auto& [key, entry] : doc.entries)
        if (!known_key(key))
            throw std::runtime_error(doc.source + ":" + std::to_string(entry.line) +
                                     ": unknown key '" + key + "'");

    ExperimentConfig cfg;
    cfg.kind = overrides.kind ? *overrides.kind : parse_kind(doc, doc.str("experiment", "solve"));

    const std::string chart_kind = doc.str("chart", "disk");
    if (chart_kind == "disk") {
        cfg.chart.kind = ChartKind::Disk;
        cfg.chart.r_max = doc.number("r_max", 0.8);
    } else if (chart_kind == "torus") {
        cfg.chart.kind = ChartKind::Torus;
        const auto b = doc.numbers("bounds");
        if (!b.empty()) {
            if (b.size() != 4) doc.fail("bounds", "expected 'x0 x1 y0 y1'");
            cfg.chart.x0 = b[0];
            cfg.chart.x1 = b[1];
            cfg.chart.y0 = b[2];
            cfg.chart.y1 = b[3];
        }
    } else {
        doc.fail("chart", "expected 'disk' or 'torus'");
    }
    const int grid = overrides.grid ? *overrides.grid : doc.integer("grid", 129);
    cfg.chart.nx = doc.integer("nx", grid);
    cfg.chart.ny = doc.integer("ny", grid);

    const std::string metric = doc.str("metric", chart_kind == "disk" ? "hyperbolic" : "flat");
    if (metric == "hyperbolic")
        cfg.metric_kind = BackgroundMetric::Kind::Hyperbolic;
    else if (metric == "flat")
        cfg.metric_kind = BackgroundMetric::Kind::Flat;
    else
        doc.fail("metric", "expected 'hyperbolic' or 'flat'");
    cfg.flat_value = doc.number("flat_value", 1.0);
    if (cfg.flat_value <= 0) doc.fail("flat_value", "must be positive");

    cfg.higgs.rank = doc.integer("rank", 2);
    if (cfg.higgs.rank < 2 || cfg.higgs.rank > 9) doc.fail("rank", "must be between 2 and 9");
    const std::string family = doc.str("family", "hitchin");
    const std::string norm = doc.str("normalization", "unit");
    if (norm == "unit")
        cfg.higgs.normalization = SectionNormalization::UnitSubdiagonal;
    else if (norm == "weights")
        cfg.higgs.normalization = SectionNormalization::Weights;
    else
        doc.fail("normalization", "expected 'unit' or 'weights'");
    const int n = cfg.higgs.rank;
    if (family == "hitchin") {
        cfg.higgs.family = HiggsFamily::HitchinSection;
        cfg.higgs.q.assign(n - 1, PolyZ());
        for (int d = 2; d <= n; ++d)
            cfg.higgs.q[d - 2] = poly_key(doc, "q" + std::to_string(d), PolyZ());
        if (doc.has("q")) cfg.higgs.q[n - 2] = poly_key(doc, "q", PolyZ());
    } else if (family == "cyclic") {
        cfg.higgs.family = HiggsFamily::Cyclic;
        cfg.higgs.gammas.assign(n, PolyZ(1.0));
        cfg.higgs.gammas[n - 1] = PolyZ();  // corner defaults to 0
        for (int i = 1; i <= n; ++i)
            cfg.higgs.gammas[i - 1] =
                poly_key(doc, "gamma" + std::to_string(i), cfg.higgs.gammas[i - 1]);
        if (doc.has("q")) cfg.higgs.gammas[n - 1] = poly_key(doc, "q", PolyZ());
    } else {
        doc.fail("family", "expected 'hitchin' or 'cyclic'");
    }

    const std::string boundary =
        doc.str("boundary", cfg.kind == ExperimentKind::Decouple ? "decoupled" : "fuchsian");
    if (boundary == "fuchsian")
        cfg.boundary = BoundaryData::Fuchsian;
    else if (boundary == "decoupled")
        cfg.boundary = BoundaryData::Decoupled;
    else
        doc.fail("boundary", "expected 'fuchsian' or 'decoupled'");

    cfg.t_grid = doc.numbers("t_grid");
    if (cfg.t_grid.empty()) {
        const double t0 = doc.number("t_min", 1.0), t1 = doc.number("t_max", 8.0);
        const int count = doc.integer("t_count", 8);
        if (count < 1) doc.fail("t_count", "must be >= 1");
        if (t0 <= 0 || t1 < t0) doc.fail("t_min", "need 0 < t_min <= t_max");
        for (int k = 0; k < count; ++k)
            cfg.t_grid.push_back(count == 1 ? t0 : t0 * std::pow(t1 / t0, double(k) / (count - 1)));
    }
    for (size_t k = 0; k < cfg.t_grid.size(); ++k) {
        if (cfg.t_grid[k] <= 0) doc.fail("t_grid", "t values must be positive");
        if (k > 0 && cfg.t_grid[k] <= cfg.t_grid[k - 1])
            doc.fail("t_grid", "t values must be strictly increasing");
    }

    cfg.tol = overrides.tol ? *overrides.tol : doc.number("tol", 1e-10);
    if (cfg.tol <= 0) doc.fail("tol", "must be positive");
    cfg.max_iter = doc.integer("max_iter", 50);
    cfg.seed = overrides.seed ? *overrides.seed : static_cast<unsigned>(doc.integer("seed", 1234));
    cfg.rho_int = doc.number("rho_int", 0.8);
    if (cfg.rho_int <= 0 || cfg.rho_int > 1) doc.fail("rho_int", "must be in (0, 1]");
    cfg.exclude_radius = doc.number("exclude_radius", 0.0);

    const auto pv = doc.numbers("path");
    if (!pv.empty()) {
        if (pv.size() != 4) doc.fail("path", "expected 'x0 y0 x1 y1'");
        PathSpec ps;
        ps.z0 = {pv[0], pv[1]};
        ps.z1 = {pv[2], pv[3]};
        ps.samples = doc.integer("path_samples", 129);
        cfg.path = ps;
    }
    cfg.out = overrides.out ? *overrides.out : doc.str("out", "out");
    return cfg;
}

Problem materialize(const ExperimentConfig& cfg) {
    Problem pr;
    pr.chart = build_chart(cfg.chart);
    if (cfg.metric_kind == BackgroundMetric::Kind::Hyperbolic) {
        pr.metric = hyperbolic_factor(pr.chart);
    } else {
        pr.metric = flat_metric(pr.chart, cfg.flat_value);
    }
    if (cfg.higgs.family == HiggsFamily::HitchinSection)
        pr.phi = build_hitchin_section(pr.chart, cfg.higgs.q, cfg.higgs.normalization);
    else
        pr.phi = build_cyclic(pr.chart, cfg.higgs.gammas);
    return pr;
}

} // namespace higgslab
