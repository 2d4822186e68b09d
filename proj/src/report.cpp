#include "higgslab/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "higgslab/field_io.hpp"

namespace higgslab {

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_double(v));
    rows.push_back(std::move(row));
}

void CsvTable::add_row(std::vector<std::string> values) { rows.push_back(std::move(values)); }

std::string CsvTable::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text_atomic(path, str()); }

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

namespace {

std::string fmt_tick(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

} // namespace

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec) {
    const int W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    const int pw = W - ml - mr, ph = H - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : spec.series)
        for (size_t k = 0; k < s.x.size(); ++k) {
            double yv = s.y[k];
            if (spec.log_y) {
                if (yv <= 0) continue;
                yv = std::log10(yv);
            }
            if (first) {
                xmin = xmax = s.x[k];
                ymin = ymax = yv;
                first = false;
            } else {
                xmin = std::min(xmin, s.x[k]);
                xmax = std::max(xmax, s.x[k]);
                ymin = std::min(ymin, yv);
                ymax = std::max(ymax, yv);
            }
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
    auto py = [&](double y) {
        if (spec.log_y) y = std::log10(std::max(y, 1e-300));
        return mt + ph * (1.0 - (y - ymin) / (ymax - ymin));
    };

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
       << spec.title << "</text>\n"
       << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double tx = xmin + (xmax - xmin) * k / 4.0;
        const double tyv = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << px(tx) << "\" y=\"" << H - mb + 18
           << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_tick(tx) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph * (1.0 - k / 4.0) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">"
           << fmt_tick(spec.log_y ? std::pow(10.0, tyv) : tyv) << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << spec.xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << mt + ph / 2
       << ")\">" << spec.ylabel << (spec.log_y ? " (log scale)" : "") << "</text>\n";

    int ci = 0;
    for (const auto& s : spec.series) {
        std::ostringstream pts;
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (spec.log_y && s.y[k] <= 0) continue;
            pts << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
        }
        const char* col = colors[ci % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\""
           << pts.str() << "\"/>\n";
        for (size_t k = 0; k < s.x.size(); ++k) {
            if (spec.log_y && s.y[k] <= 0) continue;
            os << "<circle cx=\"" << px(s.x[k]) << "\" cy=\"" << py(s.y[k])
               << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
        }
        os << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 14 * ci
           << "\" font-size=\"12\" fill=\"" << col << "\">" << s.name << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    write_text_atomic(path, os.str());
}

} // namespace higgslab
