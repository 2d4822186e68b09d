#include "higgslab/field_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace higgslab {

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double x = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: bad number '" + s + "'");
    return x;
}

namespace {

void write_header(std::ostream& os, const Chart& c) {
    os << c.nx << ' ' << c.ny << ' ' << format_double(c.x0) << ' ' << format_double(c.x1) << ' '
       << format_double(c.y0) << ' ' << format_double(c.y1) << ' '
       << (c.kind == ChartKind::Disk ? "disk" : "torus") << '\n';
}

ChartPtr read_header(std::istream& is) {
    int nx, ny;
    std::string sx0, sx1, sy0, sy1, kind;
    if (!(is >> nx >> ny >> sx0 >> sx1 >> sy0 >> sy1 >> kind))
        throw std::runtime_error("field snapshot: malformed header");
    auto chart = std::make_shared<Chart>();
    chart->nx = nx;
    chart->ny = ny;
    chart->x0 = parse_double(sx0);
    chart->x1 = parse_double(sx1);
    chart->y0 = parse_double(sy0);
    chart->y1 = parse_double(sy1);
    if (kind == "disk") {
        chart->kind = ChartKind::Disk;
        chart->hx = (chart->x1 - chart->x0) / (nx - 1);
        chart->hy = (chart->y1 - chart->y0) / (ny - 1);
        chart->r_max = std::hypot(std::max(std::abs(chart->x0), std::abs(chart->x1)),
                                  std::max(std::abs(chart->y0), std::abs(chart->y1)));
    } else if (kind == "torus") {
        chart->kind = ChartKind::Torus;
        chart->hx = (chart->x1 - chart->x0) / nx;
        chart->hy = (chart->y1 - chart->y0) / ny;
    } else {
        throw std::runtime_error("field snapshot: unknown chart kind '" + kind + "'");
    }
    return chart;
}

template <typename F, typename WriteVal>
void write_nodes(std::ostream& os, const F& f, WriteVal&& wv) {
    const Chart& c = *f.chart;
    write_header(os, c);
    for (int j = 0; j < c.ny; ++j)
        for (int i = 0; i < c.nx; ++i) {
            os << i << ' ' << j << ' ';
            wv(os, f(i, j));
            os << '\n';
        }
}

} // namespace

void write_field(std::ostream& os, const ScalarField& f) {
    write_nodes(os, f, [](std::ostream& o, double v) { o << format_double(v); });
}

void write_field(std::ostream& os, const ComplexField& f) {
    write_nodes(os, f, [](std::ostream& o, cplx v) {
        o << format_double(v.real()) << ' ' << format_double(v.imag());
    });
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_field: cannot open " + path.string());
    write_field(os, f);
}

void write_field(const std::filesystem::path& path, const ComplexField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_field: cannot open " + path.string());
    write_field(os, f);
}

ScalarField read_scalar_field(std::istream& is) {
    auto chart = read_header(is);
    ScalarField f(chart);
    int i, j;
    std::string sv;
    for (int k = 0; k < chart->num_nodes(); ++k) {
        if (!(is >> i >> j >> sv)) throw std::runtime_error("field snapshot: truncated");
        f(i, j) = parse_double(sv);
    }
    return f;
}

ComplexField read_complex_field(std::istream& is) {
    auto chart = read_header(is);
    ComplexField f(chart);
    int i, j;
    std::string sre, sim;
    for (int k = 0; k < chart->num_nodes(); ++k) {
        if (!(is >> i >> j >> sre >> sim)) throw std::runtime_error("field snapshot: truncated");
        f(i, j) = {parse_double(sre), parse_double(sim)};
    }
    return f;
}

ScalarField read_scalar_field(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_scalar_field: cannot open " + path.string());
    return read_scalar_field(is);
}

ComplexField read_complex_field(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_complex_field: cannot open " + path.string());
    return read_complex_field(is);
}

} // namespace higgslab
