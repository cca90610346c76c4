#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "zeon/poly.hpp"
#include "zeon/zeon.hpp"

namespace testing_support {

using zeon::Complex;
using zeon::MultiIndex;
using zeon::Zeon;
using zeon::ZeonPoly;

// Dense reference arithmetic: an element of CZ_n as its 2^n coefficients,
// indexed by blade bitmask. Nothing here calls the library's products.
namespace oracle {

using Dense = std::vector<Complex>;

inline Dense to_dense(const Zeon& u)
{
    Dense d(std::size_t{1} << u.n());
    for (const auto& t : u.terms()) d[t.index.bits()] += t.coeff;
    return d;
}

inline Zeon from_dense(int n, const Dense& d)
{
    std::vector<Zeon::Term> terms;
    for (std::size_t m = 0; m < d.size(); ++m)
        if (d[m] != Complex{}) terms.push_back({MultiIndex(static_cast<MultiIndex::mask_type>(m)), d[m]});
    return Zeon::from_terms(n, std::move(terms), 0.0);
}

// Every coefficient pair: c[a|b] += u[a] v[b] whenever a & b == 0.
inline Dense mul(const Dense& u, const Dense& v)
{
    Dense c(u.size());
    for (std::size_t a = 0; a < u.size(); ++a) {
        if (u[a] == Complex{}) continue;
        for (std::size_t b = 0; b < v.size(); ++b)
            if ((a & b) == 0) c[a | b] += u[a] * v[b];
    }
    return c;
}

inline Dense one(int n)
{
    Dense d(std::size_t{1} << n);
    d[0] = 1.0;
    return d;
}

inline Dense power(const Dense& u, int n, unsigned k)
{
    Dense r = one(n);
    for (unsigned i = 0; i < k; ++i) r = mul(r, u);
    return r;
}

inline Zeon mul(const Zeon& u, const Zeon& v) { return from_dense(u.n(), mul(to_dense(u), to_dense(v))); }

inline Zeon power(const Zeon& u, unsigned k) { return from_dense(u.n(), power(to_dense(u), u.n(), k)); }

// Coefficientwise sum a_k u^k with powers from repeated dense products.
inline Zeon eval(const ZeonPoly& p, const Zeon& u)
{
    const int n = u.n();
    const Dense x = to_dense(u);
    Dense acc(std::size_t{1} << n);
    Dense pw = one(n);
    for (const auto& a : p.coeffs()) {
        const Dense term = mul(to_dense(a), pw);
        for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += term[m];
        pw = mul(pw, x);
    }
    return from_dense(n, acc);
}

inline double max_abs_diff(const Dense& a, const Dense& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace oracle

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    Complex complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

    /// Each blade present with probability `density`, coefficients in the box of half-width r.
    Zeon zeon(int n, double density = 0.5, double r = 1.0)
    {
        std::vector<Zeon::Term> terms;
        for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m)
            if (coin(density)) terms.push_back({MultiIndex(m), complex(r)});
        return Zeon::from_terms(n, std::move(terms));
    }

    /// |C u| in [min_scalar, 2].
    Zeon invertible(int n, double min_scalar = 0.1, double density = 0.5)
    {
        const Complex c = std::polar(uniform(min_scalar, 2.0), uniform(-3.14159, 3.14159));
        return zeon(n, density).dual_part() + c;
    }

    // Density giving about `terms` nonzero blades per element, so |u|_1 stays
    // bounded as n grows instead of scaling like 2^n.
    static double sparse(int n, double terms = 16.0) { return std::min(0.5, terms / static_cast<double>(1u << n)); }

    Zeon nilpotent(int n, double density = 0.5) { return zeon(n, density).dual_part(); }

    /// Leading coefficient has |C| >= min_lead.
    ZeonPoly poly(int n, int degree, double density = 0.5, double min_lead = 0.2)
    {
        std::vector<Zeon> c;
        for (int i = 0; i <= degree; ++i) c.push_back(zeon(n, density));
        if (c.back().is_zero() || std::abs(c.back().scalar_part()) < min_lead)
            c.back() = invertible(n, min_lead, density);
        return ZeonPoly(n, std::move(c));
    }

private:
    std::mt19937_64 rng_;
};

inline Zeon z(int n, std::initializer_list<int> gens, Complex c = 1.0) { return Zeon::blade(n, MultiIndex(gens), c); }

inline Zeon scalar(int n, Complex c) { return Zeon(n, c); }

} // namespace testing_support

#define EXPECT_ZEON_NEAR(a, b, eps) EXPECT_LE(zeon::max_abs_diff((a), (b)), (eps))
#define ASSERT_ZEON_NEAR(a, b, eps) ASSERT_LE(zeon::max_abs_diff((a), (b)), (eps))
