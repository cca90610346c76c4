#pragma once

// Text and JSON forms of zeons and zeon polynomials.
//
// Text grammar (whitespace insignificant):
//   expr  := [sign] term { sign term }
//   term  := coeff [ '*' blade ] | blade
//   coeff := real ['i'] | 'i' | '(' [sign] real ['i'] { sign real ['i'] } ')'
//   blade := 'z{' [ index { ',' index } ] '}'
// Polynomials are written as their coefficients separated by ';', constant
// term first.
//
// JSON: {"n": int, "terms": [{"index": [sorted ints], "re": num, "im": num}]}
// for a zeon, {"n": int, "coeffs": [zeon-json | text, ...]} for a polynomial.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "zeon/poly.hpp"
#include "zeon/quadratic.hpp"
#include "zeon/solve.hpp"
#include "zeon/zeon.hpp"

namespace zeon::io {

using json = nlohmann::json;

/// Significant digits in text output; 0 selects the shortest representation
/// that parses back to the identical double.
struct PrintOptions {
    int precision = 12;
};

inline std::string format_real(double x, const PrintOptions& opts = {})
{
    if (x == 0.0) return "0";
    char buf[64];
    if (opts.precision <= 0) {
        auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    }
    std::snprintf(buf, sizeof buf, "%.*g", opts.precision, x);
    return buf;
}

inline std::string format_complex(Complex c, const PrintOptions& opts = {})
{
    if (c.imag() == 0.0) return format_real(c.real(), opts);
    if (c.real() == 0.0) return format_real(c.imag(), opts) + "i";
    std::string s = "(" + format_real(c.real(), opts);
    s += c.imag() < 0 ? "-" : "+";
    s += format_real(std::abs(c.imag()), opts) + "i)";
    return s;
}

inline std::string format_blade(MultiIndex m)
{
    std::string s = "z{";
    bool first = true;
    for (int g : m.generators()) {
        if (!first) s += ",";
        s += std::to_string(g);
        first = false;
    }
    return s + "}";
}

/// Terms in ascending mask order, e.g. "3 + 0.5*z{1,2} - (1+2i)*z{3}".
inline std::string to_text(const Zeon& u, const PrintOptions& opts = {})
{
    if (u.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : u.terms()) {
        bool negative = false;
        std::string coeff;
        const Complex c = t.coeff;
        if (c.imag() == 0.0) {
            negative = c.real() < 0;
            coeff = format_real(std::abs(c.real()), opts);
        } else if (c.real() == 0.0) {
            negative = c.imag() < 0;
            coeff = format_real(std::abs(c.imag()), opts) + "i";
        } else {
            coeff = format_complex(c, opts);
        }
        std::string term;
        if (t.index.empty()) term = coeff;
        else if (coeff == "1") term = format_blade(t.index);
        else term = coeff + "*" + format_blade(t.index);

        if (first) out += negative ? "-" + term : term;
        else out += (negative ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

inline std::string to_text(const ZeonPoly& p, const PrintOptions& opts = {})
{
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        if (i) out += "; ";
        out += to_text(p.coeffs()[i], opts);
    }
    return out;
}

namespace detail {

class Parser {
public:
    Parser(std::string_view text, int n) : s_(text), n_(n) {}

    Zeon parse_zeon()
    {
        std::vector<Zeon::Term> terms;
        skip();
        if (at_end()) fail("empty expression");
        bool first = true;
        while (true) {
            skip();
            double sign = 1.0;
            if (peek() == '+' || peek() == '-') {
                sign = get() == '-' ? -1.0 : 1.0;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            skip();
            auto t = parse_term();
            t.coeff *= sign;
            terms.push_back(t);
            first = false;
            skip();
            if (at_end()) break;
        }
        try {
            return Zeon::from_terms(n_, std::move(terms), 0.0);
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    Complex parse_complex_only()
    {
        skip();
        Complex c = peek() == '(' ? parse_paren() : parse_signed_sum();
        skip();
        if (!at_end()) fail("trailing characters");
        return c;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::ParseError, msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }
    char get() { return at_end() ? '\0' : s_[pos_++]; }
    void skip()
    {
        while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
    }
    void expect(char c)
    {
        skip();
        if (get() != c) {
            --pos_;
            fail(std::string("expected '") + c + "'");
        }
    }

    double parse_real()
    {
        skip();
        const char c = peek();
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.')) fail("expected a number");
        double x = 0.0;
        auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), x);
        if (res.ec != std::errc{}) fail("malformed number");
        if (!std::isfinite(x)) fail("non-finite number");
        pos_ = static_cast<std::size_t>(res.ptr - s_.data());
        return x;
    }

    // real ['i'] | 'i'
    Complex parse_unsigned_part()
    {
        skip();
        if (peek() == 'i') {
            ++pos_;
            return {0.0, 1.0};
        }
        const double x = parse_real();
        skip();
        if (peek() == 'i') {
            ++pos_;
            return {0.0, x};
        }
        return {x, 0.0};
    }

    Complex parse_signed_sum()
    {
        Complex acc{};
        bool first = true;
        while (true) {
            skip();
            double sign = 1.0;
            if (peek() == '+' || peek() == '-') sign = get() == '-' ? -1.0 : 1.0;
            else if (!first) break;
            acc += sign * parse_unsigned_part();
            first = false;
            skip();
            if (peek() != '+' && peek() != '-') break;
        }
        return acc;
    }

    Complex parse_paren()
    {
        expect('(');
        Complex c = parse_signed_sum();
        expect(')');
        return c;
    }

    MultiIndex parse_blade()
    {
        expect('z');
        expect('{');
        std::vector<int> gens;
        skip();
        if (peek() != '}') {
            while (true) {
                skip();
                int g = 0;
                auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), g);
                if (res.ec != std::errc{}) fail("expected a generator index");
                pos_ = static_cast<std::size_t>(res.ptr - s_.data());
                if (g < 1 || g > n_) fail("generator " + std::to_string(g) + " outside 1.." + std::to_string(n_));
                for (int h : gens)
                    if (h == g) fail("repeated generator " + std::to_string(g));
                gens.push_back(g);
                skip();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect('}');
        return MultiIndex::from_generators(gens);
    }

    Zeon::Term parse_term()
    {
        skip();
        if (peek() == 'z') return {parse_blade(), 1.0};
        const Complex c = peek() == '(' ? parse_paren() : parse_unsigned_part();
        skip();
        if (peek() == '*') {
            ++pos_;
            skip();
            return {parse_blade(), c};
        }
        return {MultiIndex{}, c};
    }

    std::string_view s_;
    int n_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Zeon parse_zeon(std::string_view text, int n) { return detail::Parser(text, n).parse_zeon(); }

inline Complex parse_complex(std::string_view text) { return detail::Parser(text, 0).parse_complex_only(); }

/// Coefficients separated by ';', constant term first.
inline ZeonPoly parse_poly(std::string_view text, int n)
{
    std::vector<Zeon> coeffs;
    std::size_t start = 0;
    while (true) {
        const auto end = text.find(';', start);
        coeffs.push_back(parse_zeon(text.substr(start, end == std::string_view::npos ? end : end - start), n));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return ZeonPoly(n, std::move(coeffs));
}

// + 0.0 maps -0.0 to 0.0
inline json to_json(Complex c) { return {{"re", c.real() + 0.0}, {"im", c.imag() + 0.0}}; }

inline json to_json(const Zeon& u)
{
    json terms = json::array();
    for (const auto& t : u.terms())
        terms.push_back({{"index", t.index.generators()}, {"re", t.coeff.real() + 0.0}, {"im", t.coeff.imag() + 0.0}});
    return {{"n", u.n()}, {"terms", std::move(terms)}};
}

inline json to_json(const ZeonPoly& p)
{
    json coeffs = json::array();
    for (const auto& c : p.coeffs()) coeffs.push_back(to_json(c));
    return {{"n", p.n()}, {"coeffs", std::move(coeffs)}};
}

namespace detail {
[[noreturn]] inline void schema(const std::string& msg) { throw Error(ErrorKind::ParseError, "ZeonJson: " + msg); }

inline double number(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number()) schema(std::string("missing numeric '") + key + "'");
    return j.at(key).get<double>();
}
} // namespace detail

/// Strict reader: indices sorted, unique and within 1..n; no zero terms.
inline Zeon zeon_from_json(const json& j, std::optional<int> expected_n = std::nullopt)
{
    if (!j.is_object()) detail::schema("expected an object");
    int n = 0;
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) detail::schema("'n' must be an integer");
        n = j.at("n").get<int>();
    } else if (expected_n) {
        n = *expected_n;
    } else {
        detail::schema("missing 'n'");
    }
    if (n < 0 || n > kMaxGenerators) detail::schema("'n' outside 0..32");
    if (expected_n && n != *expected_n) detail::schema("coefficient dimension differs from polynomial");
    if (!j.contains("terms") || !j.at("terms").is_array()) detail::schema("missing 'terms' array");

    std::vector<Zeon::Term> terms;
    std::vector<MultiIndex::mask_type> seen;
    for (const auto& t : j.at("terms")) {
        if (!t.is_object() || !t.contains("index") || !t.at("index").is_array()) detail::schema("term needs 'index'");
        std::vector<int> gens;
        int prev = 0;
        for (const auto& g : t.at("index")) {
            if (!g.is_number_integer()) detail::schema("index entries must be integers");
            const int v = g.get<int>();
            if (v <= prev) detail::schema("index must be strictly increasing");
            if (v > n) detail::schema("index entry outside 1..n");
            gens.push_back(v);
            prev = v;
        }
        const Complex c{detail::number(t, "re"), detail::number(t, "im")};
        if (c == Complex{}) detail::schema("zero coefficient");
        const auto m = MultiIndex::from_generators(gens);
        if (std::find(seen.begin(), seen.end(), m.bits()) != seen.end()) detail::schema("duplicate index");
        seen.push_back(m.bits());
        terms.push_back({m, c});
    }
    return Zeon::from_terms(n, std::move(terms), 0.0);
}

inline ZeonPoly poly_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer()) detail::schema("polynomial needs 'n'");
    const int n = j.at("n").get<int>();
    if (!j.contains("coeffs") || !j.at("coeffs").is_array()) detail::schema("polynomial needs 'coeffs'");
    std::vector<Zeon> coeffs;
    for (const auto& c : j.at("coeffs")) {
        if (c.is_string()) coeffs.push_back(parse_zeon(c.get<std::string>(), n));
        else if (c.is_number()) coeffs.emplace_back(n, c.get<double>());
        else coeffs.push_back(zeon_from_json(c, n));
    }
    return ZeonPoly(n, std::move(coeffs));
}

inline json to_json(const ScalarRoot& r)
{
    return {{"re", r.value.real() + 0.0}, {"im", r.value.imag() + 0.0}, {"multiplicity", r.multiplicity}, {"simple", r.simple}};
}

inline json to_json(const SpectralZero& z)
{
    return {{"zero", to_json(z.zero)},
            {"seed", to_json(z.seed)},
            {"iterations", z.iterations},
            {"residual", z.residual},
            {"residual_grades", z.residual_grades}};
}

inline json to_json(const ZeroSetDescription& d)
{
    json zeros = json::array();
    for (const auto& z : d.zeros) zeros.push_back(to_json(z));
    json j = {{"kind", std::string(kind_name(d.kind))},
              {"zeros", std::move(zeros)},
              {"scalar", to_json(d.scalar)},
              {"text", d.text}};
    j["bound"] = d.bound ? json(*d.bound) : json(nullptr);
    j["base"] = d.base ? to_json(*d.base) : json(nullptr);
    return j;
}

inline json to_json(const SolveReport& r)
{
    json spectrum = json::array(), zeros = json::array(), families = json::array();
    for (const auto& s : r.spectrum) spectrum.push_back(to_json(s));
    for (const auto& z : r.zeros) zeros.push_back(to_json(z));
    for (const auto& f : r.families) families.push_back(to_json(f));
    return {{"digest", r.digest},
            {"spectrum", std::move(spectrum)},
            {"zeros", std::move(zeros)},
            {"families", std::move(families)},
            {"warnings", r.warnings},
            {"splits", r.splits}};
}

inline json to_json(const QuadraticOutcome& q)
{
    json zeros = json::array();
    for (const auto& z : q.zeros) zeros.push_back(to_json(z));
    json j = {{"kind", std::string(kind_name(q.kind))},
              {"zeros", std::move(zeros)},
              {"discriminant", to_json(q.discriminant)},
              {"note", q.note}};
    j["family_base"] = q.family_base ? to_json(*q.family_base) : json(nullptr);
    return j;
}

} // namespace zeon::io
