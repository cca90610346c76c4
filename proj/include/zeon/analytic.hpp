#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "zeon/poly.hpp"
#include "zeon/solve.hpp"
#include "zeon/zeon.hpp"

namespace zeon {

/// An analytic function given by its derivative sequence at a point.
struct AnalyticFunction {
    std::string name;
    /// (z0, k) -> f^{(k)}(z0)
    std::function<Complex(Complex, int)> deriv;
    /// False on branch points and cuts.
    std::function<bool(Complex)> in_domain = [](Complex) { return true; };

    Complex operator()(Complex z) const { return deriv(z, 0); }
};

/// z^k for integer k by repeated multiplication (no log/exp roundoff).
inline Complex ipow(Complex z, int k)
{
    Complex r = 1.0;
    for (int i = 0; i < std::abs(k); ++i) r *= z;
    return k < 0 ? 1.0 / r : r;
}

namespace functions {

namespace detail {
inline bool off_negative_axis(Complex z) { return !(z.imag() == 0.0 && z.real() <= 0.0); }
} // namespace detail

inline AnalyticFunction exp()
{
    return {"exp", [](Complex z, int) { return std::exp(z); }};
}

inline AnalyticFunction sin()
{
    return {"sin", [](Complex z, int k) {
                switch (k % 4) {
                case 0: return std::sin(z);
                case 1: return std::cos(z);
                case 2: return -std::sin(z);
                default: return -std::cos(z);
                }
            }};
}

inline AnalyticFunction cos()
{
    return {"cos", [](Complex z, int k) {
                switch (k % 4) {
                case 0: return std::cos(z);
                case 1: return -std::sin(z);
                case 2: return -std::cos(z);
                default: return std::sin(z);
                }
            }};
}

/// Principal branch, cut along (-inf, 0].
inline AnalyticFunction log()
{
    return {"log",
            [](Complex z, int k) {
                if (k == 0) return std::log(z);
                // (-1)^{k-1} (k-1)! / z^k
                double c = 1.0;
                for (int i = 2; i < k; ++i) c *= i;
                if ((k - 1) % 2) c = -c;
                return c / ipow(z, k);
            },
            detail::off_negative_axis};
}

/// z^p with the principal branch; integer p >= 0 is entire and negative
/// integer p excludes 0 only.
inline AnalyticFunction pow(double p)
{
    const bool integer = p == std::floor(p);
    auto deriv = [p, integer](Complex z, int k) {
        Complex falling = 1.0;
        for (int i = 0; i < k; ++i) falling *= (p - i);
        if (falling == Complex{}) return Complex{};
        const double e = p - k;
        if (integer) return falling * ipow(z, static_cast<int>(e));
        return falling * std::exp(e * std::log(z));
    };
    std::function<bool(Complex)> dom;
    if (integer && p >= 0) dom = [](Complex) { return true; };
    else if (integer) dom = [](Complex z) { return z != Complex{}; };
    else dom = detail::off_negative_axis;
    char buf[64];
    std::snprintf(buf, sizeof buf, "pow(%.17g)", p);
    return {buf, deriv, dom};
}

inline AnalyticFunction sqrt()
{
    auto f = pow(0.5);
    f.name = "sqrt";
    return f;
}

} // namespace functions

struct ZeonExtension {
    AnalyticFunction fn;
    int n = 0;
};

namespace detail {
inline void check_domain(const AnalyticFunction& f, Complex z)
{
    if (!f.in_domain(z))
        throw Error(ErrorKind::OutsideDomain,
                    f.name + " is not analytic at (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")");
}
} // namespace detail

/// phi(u) = sum_{k <= n} f^{(k)}(C u) / k! (D u)^k; exact since (D u)^{n+1} = 0.
inline Zeon extend_eval(const ZeonExtension& ext, const Zeon& u, const Tolerance& tol = {})
{
    if (u.n() != ext.n) throw Error(ErrorKind::DimensionMismatch, "argument outside CZ_n");
    const Complex z0 = u.scalar_part();
    detail::check_domain(ext.fn, z0);
    const Zeon d = u.dual_part();
    Zeon acc(u.n(), ext.fn.deriv(z0, 0));
    Zeon pw(u.n(), 1.0);
    double fact = 1.0;
    for (int k = 1; k <= u.n(); ++k) {
        pw = mul(pw, d, tol.prune_eps);
        if (pw.is_zero()) break;
        fact *= k;
        acc = add(acc, scale(ext.fn.deriv(z0, k) / fact, pw, tol.prune_eps), tol.prune_eps);
    }
    return acc;
}

/// sum_{k <= n} f^{(k)}(z0) / k! (u - z0)^k expanded in powers of u; agrees
/// with the extension on every u with C u = z0.
inline ZeonPoly polynomial_form(const ZeonExtension& ext, Complex z0)
{
    detail::check_domain(ext.fn, z0);
    const int n = ext.n;
    std::vector<Complex> expanded(static_cast<std::size_t>(n + 1));
    double fact = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        const Complex alpha = ext.fn.deriv(z0, k) / fact;
        if (alpha == Complex{}) continue;
        // (u - z0)^k = sum_j C(k, j) (-z0)^{k-j} u^j
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            if (j > 0) binom = binom * (k - j + 1) / j;
            expanded[static_cast<std::size_t>(j)] += alpha * binom * ipow(-z0, k - j);
        }
    }
    std::vector<Zeon> coeffs;
    for (const auto& c : expanded) coeffs.emplace_back(n, c);
    return ZeonPoly(n, std::move(coeffs));
}

/// The zeon lambda with C(lambda) = z0 and phi(lambda) = w, obtained as the
/// spectrally simple zero of polynomial_form(z0) - w.
inline SpectralZero preimage(const ZeonExtension& ext, const Zeon& w, Complex z0, const Tolerance& tol = {})
{
    if (w.n() != ext.n) throw Error(ErrorKind::DimensionMismatch, "target outside CZ_n");
    detail::check_domain(ext.fn, z0);
    const Complex fz = ext.fn.deriv(z0, 0);
    if (std::abs(fz - w.scalar_part()) > tol.root_eps * std::max(1.0, std::abs(fz)))
        throw Error(ErrorKind::SeedMismatch, "f(z0) differs from the scalar part of w");
    const Complex d1 = ext.fn.deriv(z0, 1);
    if (std::abs(d1) <= tol.root_eps)
        throw Error(ErrorKind::NotSpectrallySimple, "f'(z0) = 0");

    const ZeonPoly psi = polynomial_form(ext, z0) - w;
    return spectrally_simple_zero(psi, z0, tol);
}

} // namespace zeon
