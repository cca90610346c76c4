#include <cstring>

#include "support.hpp"
#include "zeon/io.hpp"

using namespace zeon;
using namespace testing_support;
using nlohmann::json;

namespace {

// Bitwise equality of every coefficient, not just ==.
bool identical(const Zeon& a, const Zeon& b)
{
    if (a.n() != b.n() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.terms()[i];
        const auto& y = b.terms()[i];
        if (x.index != y.index) return false;
        const double xs[2] = {x.coeff.real() + 0.0, x.coeff.imag() + 0.0};
        const double ys[2] = {y.coeff.real() + 0.0, y.coeff.imag() + 0.0};
        if (std::memcmp(xs, ys, sizeof xs) != 0) return false;
    }
    return true;
}

// Coefficients with awkward decimal expansions, exact integers and pure
// real / imaginary values mixed in.
Zeon awkward(Gen& g, int n)
{
    std::vector<Zeon::Term> terms;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        if (!g.coin(0.4)) continue;
        Complex c;
        switch (g.uniform_int(0, 3)) {
        case 0: c = g.complex(1e3); break;
        case 1: c = {std::ldexp(g.uniform(-1, 1), g.uniform_int(-60, 60)), 0.0}; break;
        case 2: c = {0.0, static_cast<double>(g.uniform_int(-9, 9))}; break;
        default: c = {1.0, 0.0};
        }
        if (c != Complex{}) terms.push_back({MultiIndex(m), c});
    }
    return Zeon::from_terms(n, std::move(terms), 0.0);
}

} // namespace

TEST(Text, Formatting)
{
    const int n = 4;
    EXPECT_EQ(io::to_text(1.0 - z(1, {1})), "1 - z{1}");
    EXPECT_EQ(io::to_text(3.0 + 0.5 * (z(n, {1, 2}) + z(n, {1, 3}) + z(n, {1, 4}))),
              "3 + 0.5*z{1,2} + 0.5*z{1,3} + 0.5*z{1,4}");
    EXPECT_EQ(io::to_text(Zeon(n)), "0");
    EXPECT_EQ(io::to_text(-z(n, {2}, 2.0)), "-2*z{2}");
    EXPECT_EQ(io::to_text(Zeon(n, Complex(1, -2)) + z(n, {3}, Complex(0, 1))), "(1-2i) + 1i*z{3}");
    EXPECT_EQ(io::to_text(z(n, {3}, Complex(0, 1.5))), "1.5i*z{3}");
    EXPECT_EQ(io::to_text(Zeon(n, 1.0 / 3.0)), "0.333333333333");
}

TEST(Text, Parsing)
{
    const int n = 3;
    EXPECT_EQ(io::parse_zeon("1 + z{1}", n), 1.0 + z(n, {1}));
    EXPECT_EQ(io::parse_zeon("  -z{2,1}  ", n), -z(n, {1, 2}));
    EXPECT_EQ(io::parse_zeon("(1+2i)*z{3} - 2i", n), z(n, {3}, Complex(1, 2)) - Complex(0, 2));
    EXPECT_EQ(io::parse_zeon("i*z{1}", n), z(n, {1}, Complex(0, 1)));
    EXPECT_EQ(io::parse_zeon("z{}", n), scalar(n, 1.0));
    EXPECT_EQ(io::parse_zeon("2*z{1} + 3*z{1}", n), z(n, {1}, 5.0));
    EXPECT_EQ(io::parse_zeon("1e-3 + 2.5E2*z{3}", n), 1e-3 + z(n, {3}, 250.0));
    EXPECT_EQ(io::parse_zeon("0", n), Zeon(n));
    EXPECT_EQ(io::parse_complex("(-1.5+0.25i)"), Complex(-1.5, 0.25));
    EXPECT_EQ(io::parse_complex("3"), Complex(3.0));
}

TEST(Text, ParseErrors)
{
    for (const char* bad : {"", "1 +", "z{4}", "z{1,1}", "z{0}", "1 2", "(1+2i", "z{1", "1**z{1}", "abc", "1 + + 2"}) {
        try {
            io::parse_zeon(bad, 3);
            ADD_FAILURE() << "accepted '" << bad << "'";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError) << bad;
        }
    }
}

TEST(Text, Polynomials)
{
    const int n = 2;
    const auto p = io::parse_poly("1; -z{1}; 2 + z{1,2}", n);
    ASSERT_EQ(p.degree(), 2);
    EXPECT_EQ(p.coeff(1), -z(n, {1}));
    EXPECT_EQ(io::to_text(p), "1; -z{1}; 2 + z{1,2}");
    EXPECT_EQ(io::parse_poly(io::to_text(p), n), p);
}

TEST(Text, ShortestRoundTripIsBitIdentical)
{
    Gen g(71);
    const io::PrintOptions shortest{0};
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = g.uniform_int(1, 6);
        const Zeon u = rep % 2 ? g.zeon(n) : awkward(g, n);
        const std::string s = io::to_text(u, shortest);
        EXPECT_TRUE(identical(io::parse_zeon(s, n), u)) << s;
    }
}

TEST(Text, TwelveDigitOutputIsStable)
{
    Gen g(72);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = g.uniform_int(1, 6);
        const Zeon u = g.zeon(n);
        const std::string s = io::to_text(u);
        const Zeon back = io::parse_zeon(s, n);
        EXPECT_EQ(io::to_text(back), s);
        EXPECT_LE(max_abs_diff(back, u), 1e-11);
    }
}

TEST(Json, Schema)
{
    const int n = 3;
    const Zeon u = 2.0 + z(n, {1, 3}, Complex(0.5, -1));
    const json j = io::to_json(u);
    EXPECT_EQ(j.dump(),
              R"({"n":3,"terms":[{"im":0.0,"index":[],"re":2.0},{"im":-1.0,"index":[1,3],"re":0.5}]})");
    EXPECT_EQ(io::zeon_from_json(j), u);
}

TEST(Json, RejectsMalformed)
{
    for (const char* bad : {
             R"({"terms":[]})",
             R"({"n":2,"terms":[{"index":[2,1],"re":1,"im":0}]})",
             R"({"n":2,"terms":[{"index":[3],"re":1,"im":0}]})",
             R"({"n":2,"terms":[{"index":[1],"re":0,"im":0}]})",
             R"({"n":2,"terms":[{"index":[1],"re":1,"im":0},{"index":[1],"re":1,"im":0}]})",
             R"({"n":2,"terms":[{"index":[1],"re":"x","im":0}]})",
             R"([1,2])",
         }) {
        try {
            io::zeon_from_json(json::parse(bad));
            ADD_FAILURE() << "accepted " << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError) << bad;
        }
    }
}

TEST(Json, RoundTripIsBitIdentical)
{
    Gen g(73);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = g.uniform_int(1, 6);
        const Zeon u = rep % 2 ? g.zeon(n) : awkward(g, n);
        const Zeon back = io::zeon_from_json(json::parse(io::to_json(u).dump()));
        EXPECT_TRUE(identical(back, u)) << io::to_json(u).dump();
    }
}

TEST(Json, PolynomialForms)
{
    const auto p = io::poly_from_json(json::parse(R"({"n":2,"coeffs":["1 + z{1}", 2, {"terms":[{"index":[2],"re":1,"im":0}]}]})"));
    ASSERT_EQ(p.degree(), 2);
    EXPECT_EQ(p.coeff(0), 1.0 + z(2, {1}));
    EXPECT_EQ(p.coeff(1), scalar(2, 2.0));
    EXPECT_EQ(p.coeff(2), z(2, {2}));
    EXPECT_EQ(io::poly_from_json(io::to_json(p)), p);
}
