#include "higgslab/poly.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "higgslab/field_io.hpp"

namespace higgslab {

namespace {

struct Cursor {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char ch) {
        if (peek() == ch) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("polynomial '" + std::string(s) + "': " + what + " at position " +
                                    std::to_string(pos));
    }

    double number() {
        skip_ws();
        double x = 0;
        auto res = std::from_chars(s.data() + pos, s.data() + s.size(), x);
        if (res.ec != std::errc()) fail("expected a number");
        pos = res.ptr - s.data();
        return x;
    }

    unsigned exponent() {
        skip_ws();
        unsigned e = 0;
        auto res = std::from_chars(s.data() + pos, s.data() + s.size(), e);
        if (res.ec != std::errc()) fail("expected an exponent");
        pos = res.ptr - s.data();
        return e;
    }
};

} // namespace

PolyZ PolyZ::parse(std::string_view text) {
    Cursor cur{text};
    PolyZ p;
    auto add = [&](unsigned k, cplx coef) {
        if (p.c.size() <= k) p.c.resize(k + 1, cplx{});
        p.c[k] += coef;
    };
    if (cur.done()) cur.fail("empty");
    bool first = true;
    while (!cur.done()) {
        double sign = 1.0;
        if (cur.eat('+')) {
            sign = 1.0;
        } else if (cur.eat('-')) {
            sign = -1.0;
        } else if (!first) {
            cur.fail("expected '+' or '-'");
        }
        first = false;

        cplx coef = 1.0;
        bool have_coef = false;
        const char ch = cur.peek();
        if (ch == '(') {
            cur.eat('(');
            const double re = cur.number();
            if (!cur.eat(',')) cur.fail("expected ',' in complex literal");
            const double im = cur.number();
            if (!cur.eat(')')) cur.fail("expected ')' in complex literal");
            coef = {re, im};
            have_coef = true;
        } else if (ch != 'z') {
            coef = cur.number();
            have_coef = true;
        }
        cur.eat('*');

        unsigned k = 0;
        if (cur.peek() == 'z') {
            cur.eat('z');
            k = cur.eat('^') ? cur.exponent() : 1;
        } else if (!have_coef) {
            cur.fail("expected a coefficient or 'z'");
        }
        add(k, sign * coef);
    }
    while (!p.c.empty() && p.c.back() == cplx{}) p.c.pop_back();
    return p;
}

cplx PolyZ::operator()(cplx z) const {
    cplx acc{};
    for (size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

bool PolyZ::is_zero() const {
    for (cplx a : c)
        if (a != cplx{}) return false;
    return true;
}

bool PolyZ::is_constant() const { return degree() <= 0; }

int PolyZ::degree() const {
    for (size_t k = c.size(); k-- > 0;)
        if (c[k] != cplx{}) return static_cast<int>(k);
    return -1;
}

PolyZ PolyZ::scaled(cplx factor) const {
    PolyZ out = *this;
    for (cplx& a : out.c) a *= factor;
    return out;
}

std::string PolyZ::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k] == cplx{}) continue;
        if (!first) os << " + ";
        first = false;
        os << '(' << format_double(c[k].real()) << ',' << format_double(c[k].imag()) << ')';
        if (k == 1) os << "z";
        if (k > 1) os << "z^" << k;
    }
    return os.str();
}

ComplexField sample_poly(const ChartPtr& chart, const PolyZ& p) {
    return sample_field<cplx>(chart, [&](cplx z) { return p(z); });
}

} // namespace higgslab
