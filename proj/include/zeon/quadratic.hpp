#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "zeon/poly.hpp"
#include "zeon/zeon.hpp"

namespace zeon {

/// Outcome of a nilpotent square-root search. When no root is returned,
/// `certified` tells whether non-existence was proven.
struct NilpotentSqrt {
    std::optional<Zeon> root;
    bool certified = false;
    std::string reason;

    bool found() const noexcept { return root.has_value(); }
};

namespace detail {

// Blades of a fixed grade within [n], ascending by mask.
inline std::vector<MultiIndex> blades_of_grade(int n, int grade)
{
    std::vector<MultiIndex> out;
    if (grade < 0 || grade > n) return out;
    const auto full = MultiIndex::full(n).bits();
    if (grade == 0) return {MultiIndex{}};
    // Gosper's hack over n-bit masks.
    std::uint64_t m = (std::uint64_t{1} << grade) - 1;
    while (m <= full) {
        out.emplace_back(static_cast<MultiIndex::mask_type>(m));
        const std::uint64_t c = m & (~m + 1);
        const std::uint64_t r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    return out;
}

using BladeRow = std::unordered_map<MultiIndex::mask_type, Eigen::Index>;

inline BladeRow index_rows(const std::vector<MultiIndex>& blades)
{
    BladeRow rows;
    for (std::size_t i = 0; i < blades.size(); ++i) rows[blades[i].bits()] = static_cast<Eigen::Index>(i);
    return rows;
}

inline Zeon assemble(int n, const std::vector<MultiIndex>& blades, const Eigen::VectorXcd& x)
{
    std::vector<Zeon::Term> t;
    for (std::size_t i = 0; i < blades.size(); ++i) t.push_back({blades[i], x(static_cast<Eigen::Index>(i))});
    return Zeon::from_terms(n, std::move(t), 0.0);
}

// Coefficients of `z` on the given equation blades.
inline Eigen::VectorXcd project(const Zeon& z, const std::vector<MultiIndex>& rows)
{
    Eigen::VectorXcd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = z.coeff(rows[i]);
    return out;
}

// Matrix of delta -> 2 v delta from the unknown blades to the equation blades.
inline Eigen::MatrixXcd doubling_map(const Zeon& v, const std::vector<MultiIndex>& unknowns,
                                     const BladeRow& rows, Eigen::Index nrows)
{
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(nrows, static_cast<Eigen::Index>(unknowns.size()));
    for (std::size_t c = 0; c < unknowns.size(); ++c)
        for (const auto& t : v.terms())
            if (auto p = blade_mul(t.index, unknowns[c])) {
                auto it = rows.find(p->bits());
                if (it != rows.end()) J(it->second, static_cast<Eigen::Index>(c)) += 2.0 * t.coeff;
            }
    return J;
}

// Grade-1 square roots of a pure grade-2 target: (sum a_i zeta_i)^2 =
// 2 sum_{i<j} a_i a_j zeta_ij, so a_i a_j = w_ij / 2 is a rank-one problem.
inline std::optional<Zeon> rank_one_grade1(const Zeon& w2)
{
    const int n = w2.n();
    auto W = [&](int i, int j) { return w2.coeff(MultiIndex{std::min(i, j), std::max(i, j)}) / 2.0; };
    int p = 0, q = 0;
    double best = 0.0;
    for (const auto& t : w2.terms()) {
        if (std::abs(t.coeff) > best) {
            best = std::abs(t.coeff);
            const auto g = t.index.generators();
            p = g[0];
            q = g[1];
        }
    }
    if (best == 0.0) return std::nullopt;
    int r_best = 0;
    double r_mag = 0.0;
    for (int r = 1; r <= n; ++r)
        if (r != p && r != q && std::abs(W(q, r)) > r_mag) {
            r_mag = std::abs(W(q, r));
            r_best = r;
        }
    const Complex ap = r_best ? std::sqrt(W(p, q) * W(p, r_best) / W(q, r_best)) : std::sqrt(W(p, q));
    if (ap == Complex{}) return std::nullopt;
    std::vector<Zeon::Term> t{{MultiIndex{p}, ap}};
    for (int r = 1; r <= n; ++r)
        if (r != p) t.push_back({MultiIndex{r}, W(p, r) / ap});
    return Zeon::from_terms(n, std::move(t));
}

// Damped Gauss-Newton for v^2 = target on the equation blades, v supported on
// the unknown blades.
inline std::optional<Eigen::VectorXcd> levenberg_marquardt(int n, const std::vector<MultiIndex>& unknowns,
                                                            const std::vector<MultiIndex>& eqs, const Zeon& target,
                                                            Eigen::VectorXcd x, double stop, int max_iter = 300)
{
    const BladeRow rows = index_rows(eqs);
    const auto nrows = static_cast<Eigen::Index>(eqs.size());
    const Eigen::VectorXcd rhs = project(target, eqs);
    auto residual = [&](const Eigen::VectorXcd& y) {
        const Zeon v = assemble(n, unknowns, y);
        return Eigen::VectorXcd(project(v * v, eqs) - rhs);
    };
    Eigen::VectorXcd F = residual(x);
    double mu = 1e-3;
    for (int it = 0; it < max_iter; ++it) {
        if (F.lpNorm<Eigen::Infinity>() <= stop) return x;
        const Zeon v = assemble(n, unknowns, x);
        const Eigen::MatrixXcd J = doubling_map(v, unknowns, rows, nrows);
        const Eigen::MatrixXcd JhJ = J.adjoint() * J;
        const Eigen::VectorXcd g = J.adjoint() * F;
        bool improved = false;
        for (int tries = 0; tries < 20 && !improved; ++tries) {
            Eigen::MatrixXcd A = JhJ;
            A.diagonal().array() += mu * (1.0 + JhJ.diagonal().real().array());
            const Eigen::VectorXcd step = A.ldlt().solve(-g);
            const Eigen::VectorXcd y = x + step;
            const Eigen::VectorXcd Fy = residual(y);
            if (Fy.squaredNorm() < F.squaredNorm()) {
                x = y;
                F = Fy;
                mu = std::max(mu / 3.0, 1e-12);
                improved = true;
            } else {
                mu *= 4.0;
            }
        }
        if (!improved) break;
    }
    if (F.lpNorm<Eigen::Infinity>() <= stop) return x;
    return std::nullopt;
}

// Extends a fixed lowest layer v_g (plus any already fixed layers) grade by
// grade: the grade g + h part of v^2 = w is 2 v_g v_h + (terms from lower
// layers), linear in v_h. Minimum-norm solutions resolve the freedom.
inline std::optional<Zeon> extend_layers(const Zeon& w, Zeon v, int g, int first_free, double tol)
{
    const int n = w.n();
    const Zeon vg = v.grade_part(g);
    for (int h = first_free; h <= n; ++h) {
        const int e = g + h;
        if (e > n) break;
        const auto unknowns = blades_of_grade(n, h);
        const auto eqs = blades_of_grade(n, e);
        const Eigen::VectorXcd rhs = project(w - v * v, eqs);
        if (rhs.lpNorm<Eigen::Infinity>() == 0.0) continue;
        const Eigen::MatrixXcd A = doubling_map(vg, unknowns, index_rows(eqs), static_cast<Eigen::Index>(eqs.size()));
        const Eigen::VectorXcd x = A.completeOrthogonalDecomposition().solve(rhs);
        if ((A * x - rhs).lpNorm<Eigen::Infinity>() > tol) return std::nullopt;
        v = v + assemble(n, unknowns, x);
    }
    return v;
}

} // namespace detail

/// Searches for a nilpotent v with v^2 = w (C(w) = 0).
///
/// Squares of nilpotents have minimal grade at least 2, which certifies
/// absence when the minimal grade of w is 1. Otherwise the lowest layer of v
/// is found by a nonlinear solve on the lowest grades of w and the remaining
/// layers by successive linear solves; failure is then not a proof.
inline NilpotentSqrt nilpotent_sqrt(const Zeon& w, const Tolerance& tol = {})
{
    if (std::abs(w.scalar_part()) > tol.eq_eps)
        throw Error(ErrorKind::PreconditionError, "nilpotent_sqrt needs a nilpotent argument");
    const Zeon target = w.dual_part();
    const int n = w.n();
    if (target.max_abs() <= tol.prune_eps) return {Zeon(n), false, "zero"};

    const int m = target.min_grade();
    if (m < 2)
        return {std::nullopt, true, "minimal grade 1: squares of nilpotent zeons have minimal grade >= 2"};

    const int g = m / 2;
    const bool odd = (m % 2) != 0;
    constexpr int kMaxSearchGenerators = 12;
    if (n > kMaxSearchGenerators) return {std::nullopt, false, "search limited to n <= 12"};

    std::vector<MultiIndex> unknowns = detail::blades_of_grade(n, g);
    std::vector<MultiIndex> eqs = detail::blades_of_grade(n, 2 * g);
    if (odd) {
        const auto more = detail::blades_of_grade(n, g + 1);
        unknowns.insert(unknowns.end(), more.begin(), more.end());
        const auto more_eqs = detail::blades_of_grade(n, 2 * g + 1);
        eqs.insert(eqs.end(), more_eqs.begin(), more_eqs.end());
    }
    const double scale = std::max(1.0, target.max_abs());
    const double stop = 1e-3 * tol.eq_eps * scale;
    const int first_free = g + (odd ? 2 : 1);

    auto finish = [&](const Zeon& v0) -> std::optional<Zeon> {
        auto v = detail::extend_layers(target, v0, g, first_free, stop);
        if (v && max_abs_diff(*v * *v, target) <= tol.eq_eps) return v;
        return std::nullopt;
    };

    if (g == 1 && !odd)
        if (auto v0 = detail::rank_one_grade1(target.grade_part(2)))
            if (auto v = finish(*v0)) return {v, false, "rank-one lowest layer"};

    std::mt19937_64 rng(0x5eed2a11u);
    std::normal_distribution<double> normal(0.0, std::sqrt(scale));
    for (int attempt = 0; attempt < 16; ++attempt) {
        Eigen::VectorXcd x(static_cast<Eigen::Index>(unknowns.size()));
        for (auto& c : x) c = {normal(rng), normal(rng)};
        auto sol = detail::levenberg_marquardt(n, unknowns, eqs, target, x, stop);
        if (!sol) continue;
        if (auto v = finish(detail::assemble(n, unknowns, *sol))) return {v, false, "layered search"};
    }

    // The lowest layer can be underdetermined by the lowest grades of w (a
    // sparse v_g), and a poor choice blocks every extension. Solve for all
    // layers at once instead; the top blade squares into nothing and is left out.
    constexpr int kMaxGlobalGenerators = 8;
    if (n <= kMaxGlobalGenerators) {
        std::vector<MultiIndex> all, all_eqs;
        for (int h = 1; h < n; ++h) {
            const auto b = detail::blades_of_grade(n, h);
            all.insert(all.end(), b.begin(), b.end());
        }
        for (int e = 2; e <= n; ++e) {
            const auto b = detail::blades_of_grade(n, e);
            all_eqs.insert(all_eqs.end(), b.begin(), b.end());
        }
        // Small starts do best here: they sit near the singular set v_g^2 = 0
        // that odd minimal grades force.
        std::normal_distribution<double> small(0.0, 0.1 * std::sqrt(scale));
        for (int attempt = 0; attempt < 16; ++attempt) {
            Eigen::VectorXcd x(static_cast<Eigen::Index>(all.size()));
            for (auto& c : x) c = {small(rng), small(rng)};
            auto sol = detail::levenberg_marquardt(n, all, all_eqs, target, x, stop);
            if (!sol) continue;
            const Zeon v = detail::assemble(n, all, *sol);
            if (max_abs_diff(v * v, target) <= tol.eq_eps) return {v, false, "global search"};
        }
    }
    return {std::nullopt, false, "search found no root"};
}

enum class QuadraticKind { TwoDistinct, NullSquareFamily, NilpotentDiscriminantRoots, NoZeros, Undetermined };

constexpr std::string_view kind_name(QuadraticKind k) noexcept
{
    switch (k) {
    case QuadraticKind::TwoDistinct: return "TwoDistinct";
    case QuadraticKind::NullSquareFamily: return "NullSquareFamily";
    case QuadraticKind::NilpotentDiscriminantRoots: return "NilpotentDiscriminantRoots";
    case QuadraticKind::NoZeros: return "NoZeros";
    case QuadraticKind::Undetermined: return "Undetermined";
    }
    return "Unknown";
}

struct QuadraticOutcome {
    QuadraticKind kind;
    std::vector<Zeon> zeros;
    /// NullSquareFamily: zeros are base + eta with eta^2 = 0.
    /// NilpotentDiscriminantRoots: zeros include base + a zeta_[n] for all a.
    std::optional<Zeon> family_base;
    Zeon discriminant;
    std::string note;
};

/// Zeros of alpha u^2 + beta u + gamma, C(alpha) != 0, as
/// (alpha^{-1} / 2)(w - beta) over the square roots w of the discriminant.
inline QuadraticOutcome quadratic_solve(const Zeon& alpha, const Zeon& beta, const Zeon& gamma,
                                        const Tolerance& tol = {})
{
    if (std::abs(alpha.scalar_part()) <= tol.eq_eps)
        throw Error(ErrorKind::LeadingCoefficientNotInvertible, "C(alpha) = 0");
    const Zeon delta = discriminant(alpha, beta, gamma);
    const Zeon half_inv = 0.5 * inverse(alpha, tol);

    if (std::abs(delta.scalar_part()) > tol.eq_eps) {
        QuadraticOutcome out{QuadraticKind::TwoDistinct, {}, std::nullopt, delta, ""};
        for (const auto& w : kth_roots(delta, 2, tol)) out.zeros.push_back(half_inv * (w - beta));
        return out;
    }
    if (delta.max_abs() <= tol.eq_eps) {
        Zeon base = -(half_inv * beta);
        return {QuadraticKind::NullSquareFamily, {base}, base, delta, "base + eta, eta^2 = 0"};
    }

    const auto sq = nilpotent_sqrt(delta.dual_part(), tol);
    if (sq.found()) {
        Zeon z = half_inv * (*sq.root - beta);
        return {QuadraticKind::NilpotentDiscriminantRoots, {z}, z, delta,
                "base + a*zeta_[n], a complex"};
    }
    if (sq.certified) return {QuadraticKind::NoZeros, {}, std::nullopt, delta, sq.reason};
    return {QuadraticKind::Undetermined, {}, std::nullopt, delta, sq.reason};
}

} // namespace zeon
