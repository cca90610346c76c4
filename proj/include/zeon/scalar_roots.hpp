#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <string>
#include <vector>

#include "zeon/complex_poly.hpp"
#include "zeon/error.hpp"
#include "zeon/tolerance.hpp"
#include "zeon/zeon.hpp"

namespace zeon {

struct ScalarRoot {
    Complex value;
    int multiplicity = 1;
    bool simple = true;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Simultaneous Aberth-Ehrlich iteration on a polynomial without zero roots.
// Returns the approximations and whether every one of them settled.
inline std::vector<Complex> aberth(const ComplexPoly& f, int max_iter, bool& converged)
{
    const int m = f.degree();
    const ComplexPoly df = f.derivative();
    const auto& a = f.coeffs();

    // Initial points on a circle around the centroid of the roots, radius
    // from the Fujiwara-style bound sqrt of max |a_k / a_m|^{1/(m-k)}.
    const Complex center = -a[static_cast<std::size_t>(m - 1)] / (static_cast<double>(m) * a.back());
    double radius = 0.0;
    {
        const ComplexPoly shifted = [&] {
            // f(z + center), coefficient growth is fine at desk-scale degrees.
            std::vector<Complex> c(a.size());
            for (int j = 0; j <= m; ++j) c[static_cast<std::size_t>(j)] = f.taylor_coeff(center, j);
            return ComplexPoly(std::move(c));
        }();
        for (int k = 0; k < m; ++k) {
            const double ratio = std::abs(shifted[static_cast<std::size_t>(k)] / shifted.leading());
            if (ratio > 0) radius = std::max(radius, std::pow(ratio, 1.0 / (m - k)));
        }
        if (radius == 0.0) radius = 1.0;
    }
    std::vector<Complex> z(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        z[static_cast<std::size_t>(j)] = center + std::polar(radius, 2.0 * std::numbers::pi * j / m + 0.4);

    std::vector<char> done(z.size(), 0);
    converged = false;
    for (int it = 0; it < max_iter; ++it) {
        bool all = true;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (done[i]) continue;
            const Complex fz = f(z[i]);
            if (std::abs(fz) <= 4 * kEps * f.scale_at(z[i])) {
                done[i] = 1;
                continue;
            }
            const Complex ratio = fz / df(z[i]);
            Complex sum{};
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            const Complex step = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
                done[i] = 1;
                continue;
            }
            z[i] -= step;
            if (std::abs(step) <= 4 * kEps * std::max(1.0, std::abs(z[i]))) done[i] = 1;
            else all = false;
        }
        if (all) {
            converged = true;
            break;
        }
    }
    return z;
}

// Newton on the (mult - 1)-th derivative, where a root of multiplicity
// `mult` is simple.
inline Complex polish(const ComplexPoly& f, Complex z, int mult)
{
    ComplexPoly p = f;
    for (int i = 1; i < mult; ++i) p = p.derivative();
    const ComplexPoly dp = p.derivative();
    for (int it = 0; it < 5; ++it) {
        const Complex pz = p(z);
        const Complex d = dp(z);
        if (d == Complex{}) break;
        const Complex next = z - pz / d;
        if (!(std::abs(p(next)) < std::abs(pz))) break;
        z = next;
    }
    return z;
}

} // namespace detail

/// All complex roots of f with multiplicities.
///
/// Roots from the simultaneous iteration are grouped when their Newton
/// inclusion disks (inflated by the evaluation roundoff) overlap or when
/// they lie within cluster_eps of each other relative to their magnitude;
/// a group of size m is reported as one root of multiplicity m located at
/// the group centroid.
namespace detail {

inline void sort_roots(std::vector<ScalarRoot>& roots)
{
    std::sort(roots.begin(), roots.end(), [](const ScalarRoot& a, const ScalarRoot& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
}

} // namespace detail

inline std::vector<ScalarRoot> scalar_roots(const ComplexPoly& f, const Tolerance& tol = {}, int max_iter = 2000)
{
    if (f.degree() < 1) throw Error(ErrorKind::PreconditionError, "scalar_roots needs degree >= 1");

    std::vector<ScalarRoot> out;
    std::size_t zero_mult = 0;
    while (f[zero_mult] == Complex{}) ++zero_mult;
    if (zero_mult > 0) out.push_back({Complex{}, static_cast<int>(zero_mult), zero_mult == 1});

    const ComplexPoly g(std::vector<Complex>(f.coeffs().begin() + static_cast<std::ptrdiff_t>(zero_mult),
                                             f.coeffs().end()));
    const int m = g.degree();
    if (m == 0) return out;
    if (m == 1) {
        out.push_back({snap_components(-g[0] / g[1]), 1, true});
        detail::sort_roots(out);
        return out;
    }

    bool converged = false;
    std::vector<Complex> z = detail::aberth(g, max_iter, converged);
    const ComplexPoly dg = g.derivative();
    if (!converged) {
        for (const auto& zi : z)
            if (std::abs(g(zi)) > tol.root_eps * std::max(1.0, g.scale_at(zi))) {
                std::string partial;
                for (const auto& zj : z)
                    partial += " (" + std::to_string(zj.real()) + "," + std::to_string(zj.imag()) + ")";
                throw Error(ErrorKind::RootFindingFailed, "no convergence; partial roots:" + partial);
            }
    }

    std::vector<double> radius(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double num = std::abs(g(z[i])) + 4 * detail::kEps * g.scale_at(z[i]);
        const double den = std::abs(dg(z[i]));
        radius[i] = den > 0 ? m * num / den : std::numeric_limits<double>::infinity();
    }

    std::vector<std::size_t> parent(z.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            const double d = std::abs(z[i] - z[j]);
            const double rel = tol.cluster_eps * std::max({1.0, std::abs(z[i]), std::abs(z[j])});
            if (d <= radius[i] + radius[j] || d <= rel) parent[find(i)] = find(j);
        }

    std::vector<std::vector<std::size_t>> groups(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) groups[find(i)].push_back(i);
    for (const auto& grp : groups) {
        if (grp.empty()) continue;
        Complex c{};
        for (auto i : grp) c += z[i];
        c /= static_cast<double>(grp.size());
        const int mult = static_cast<int>(grp.size());
        c = snap_components(detail::polish(g, c, mult));
        out.push_back({c, mult, mult == 1});
    }
    detail::sort_roots(out);
    return out;
}

} // namespace zeon
