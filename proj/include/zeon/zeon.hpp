#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zeon/error.hpp"
#include "zeon/multi_index.hpp"
#include "zeon/tolerance.hpp"

namespace zeon {

using Complex = std::complex<double>;

/// Zero out a real or imaginary component that is pure roundoff relative to
/// |z|, e.g. the 6e-17 real part of polar(1, pi/2).
inline Complex snap_components(Complex z) noexcept
{
    const double mag = std::abs(z);
    const double floor = 8 * std::numeric_limits<double>::epsilon() * mag;
    double re = z.real(), im = z.imag();
    if (std::abs(re) <= floor) re = 0.0;
    if (std::abs(im) <= floor) im = 0.0;
    return {re, im};
}

/// Element of the complex zeon algebra CZ_n.
///
/// Terms are kept sorted by ascending mask, with every coefficient of
/// magnitude above the prune threshold it was built with. Absent blades have
/// coefficient zero.
class Zeon {
public:
    struct Term {
        MultiIndex index;
        Complex coeff;
        bool operator==(const Term&) const = default;
    };

    /// Zero element of CZ_n.
    explicit Zeon(int n = 0) : n_(check_dim(n)) {}

    /// Scalar c * zeta_empty.
    Zeon(int n, Complex c) : n_(check_dim(n))
    {
        check_finite(c);
        if (c != Complex{}) terms_.push_back({MultiIndex{}, c});
    }

    /// c * zeta_I.
    static Zeon blade(int n, MultiIndex index, Complex c = 1.0)
    {
        return from_terms(n, {{index, c}});
    }

    /// Builds a canonical element from arbitrary terms: duplicates are summed,
    /// terms sorted and small coefficients pruned.
    static Zeon from_terms(int n, std::vector<Term> terms, double prune_eps = Tolerance{}.prune_eps)
    {
        Zeon z(n);
        for (const auto& t : terms) {
            if (!t.index.valid_for(n))
                throw Error(ErrorKind::DimensionMismatch, "blade index outside [n]");
            check_finite(t.coeff);
        }
        std::stable_sort(terms.begin(), terms.end(),
                         [](const Term& a, const Term& b) { return a.index < b.index; });
        z.terms_ = merge_sorted(std::move(terms), prune_eps);
        return z;
    }

    int n() const noexcept { return n_; }
    std::span<const Term> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    Complex coeff(MultiIndex index) const noexcept
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                                   [](const Term& t, MultiIndex m) { return t.index < m; });
        return (it != terms_.end() && it->index == index) ? it->coeff : Complex{};
    }

    /// C(u), the coefficient of the scalar blade.
    Complex scalar_part() const noexcept
    {
        return (!terms_.empty() && terms_.front().index.empty()) ? terms_.front().coeff : Complex{};
    }

    /// D(u) = u - C(u).
    Zeon dual_part() const
    {
        Zeon out(n_);
        auto first = terms_.begin();
        if (first != terms_.end() && first->index.empty()) ++first;
        out.terms_.assign(first, terms_.end());
        return out;
    }

    /// <u>_k. Returns zero for k outside 0..n.
    Zeon grade_part(int k) const
    {
        Zeon out(n_);
        for (const auto& t : terms_)
            if (t.index.grade() == k) out.terms_.push_back(t);
        return out;
    }

    /// Least k with a nonzero grade-k part; n + 1 for the zero element.
    int min_grade() const noexcept
    {
        int g = n_ + 1;
        for (const auto& t : terms_) g = std::min(g, t.index.grade());
        return g;
    }

    Zeon min_grade_part() const { return grade_part(min_grade()); }

    /// Largest coefficient magnitude (0 for the zero element).
    double max_abs() const noexcept
    {
        double m = 0.0;
        for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
        return m;
    }

    /// Sum of coefficient magnitudes.
    double l1_norm() const noexcept
    {
        double s = 0.0;
        for (const auto& t : terms_) s += std::abs(t.coeff);
        return s;
    }

    /// Keeps only the blades whose generators all lie in {1, ..., m}.
    Zeon restrict_to(int m) const
    {
        const auto keep = MultiIndex::full(std::clamp(m, 0, kMaxGenerators)).bits();
        Zeon out(n_);
        for (const auto& t : terms_)
            if ((t.index.bits() & ~keep) == 0) out.terms_.push_back(t);
        return out;
    }

    Zeon pruned(double prune_eps) const
    {
        Zeon out(n_);
        const double thr = prune_eps * prune_eps;
        for (const auto& t : terms_)
            if (std::norm(t.coeff) > thr) out.terms_.push_back(t);
        return out;
    }

    bool operator==(const Zeon& other) const = default;

    Zeon operator-() const
    {
        Zeon out(*this);
        for (auto& t : out.terms_) t.coeff = -t.coeff;
        return out;
    }

    friend Zeon add(const Zeon& u, const Zeon& v, double prune_eps = Tolerance{}.prune_eps)
    {
        check_same_dim(u, v);
        std::vector<Term> merged;
        merged.reserve(u.size() + v.size());
        std::merge(u.terms_.begin(), u.terms_.end(), v.terms_.begin(), v.terms_.end(),
                   std::back_inserter(merged),
                   [](const Term& a, const Term& b) { return a.index < b.index; });
        Zeon out(u.n_);
        out.terms_ = merge_sorted(std::move(merged), prune_eps);
        return out;
    }

    friend Zeon scale(Complex c, const Zeon& u, double prune_eps = Tolerance{}.prune_eps)
    {
        check_finite(c);
        Zeon out(u.n_);
        const double thr = prune_eps * prune_eps;
        for (const auto& t : u.terms_) {
            Complex p = c * t.coeff;
            if (std::norm(p) > thr && p != Complex{}) out.terms_.push_back({t.index, p});
        }
        return out;
    }

    friend Zeon mul(const Zeon& u, const Zeon& v, double prune_eps = Tolerance{}.prune_eps)
    {
        check_same_dim(u, v);
        return multiply(u, v, prune_eps);
    }

    friend Zeon operator+(const Zeon& u, const Zeon& v) { return add(u, v); }
    friend Zeon operator-(const Zeon& u, const Zeon& v) { return add(u, -v); }
    friend Zeon operator*(const Zeon& u, const Zeon& v) { return mul(u, v); }
    friend Zeon operator*(Complex c, const Zeon& u) { return scale(c, u); }
    friend Zeon operator*(const Zeon& u, Complex c) { return scale(c, u); }
    friend Zeon operator/(const Zeon& u, Complex c) { return scale(1.0 / c, u); }
    friend Zeon operator+(const Zeon& u, Complex c) { return u + Zeon(u.n_, c); }
    friend Zeon operator-(const Zeon& u, Complex c) { return u - Zeon(u.n_, c); }
    friend Zeon operator+(Complex c, const Zeon& u) { return Zeon(u.n_, c) + u; }
    friend Zeon operator-(Complex c, const Zeon& u) { return Zeon(u.n_, c) - u; }

    Zeon& operator+=(const Zeon& v) { return *this = *this + v; }
    Zeon& operator-=(const Zeon& v) { return *this = *this - v; }
    Zeon& operator*=(const Zeon& v) { return *this = *this * v; }

    /// Multiplies by zeta_{generator}, which must not exceed n. Blades that
    /// already contain the generator are annihilated.
    Zeon times_generator(int generator) const
    {
        if (generator < 1 || generator > n_)
            throw Error(ErrorKind::DimensionMismatch, "generator outside [n]");
        const auto bit = MultiIndex::mask_type{1} << (generator - 1);
        Zeon out(n_);
        for (const auto& t : terms_)
            if ((t.index.bits() & bit) == 0) out.terms_.push_back({MultiIndex(t.index.bits() | bit), t.coeff});
        std::sort(out.terms_.begin(), out.terms_.end(),
                  [](const Term& a, const Term& b) { return a.index < b.index; });
        return out;
    }

private:
    // Dense accumulation is used below this many generators.
    static constexpr int kDenseLimit = 16;

    static int check_dim(int n)
    {
        if (n < 0 || n > kMaxGenerators)
            throw Error(ErrorKind::DimensionMismatch, "generator count must be in 0..32");
        return n;
    }

    static void check_finite(Complex c)
    {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw Error(ErrorKind::PreconditionError, "non-finite coefficient");
    }

    static void check_same_dim(const Zeon& u, const Zeon& v)
    {
        if (u.n_ != v.n_)
            throw Error(ErrorKind::DimensionMismatch,
                        "operands live in CZ_" + std::to_string(u.n_) + " and CZ_" + std::to_string(v.n_));
    }

    // Input sorted by index; sums runs of equal indices and prunes.
    static std::vector<Term> merge_sorted(std::vector<Term> terms, double prune_eps)
    {
        std::vector<Term> out;
        out.reserve(terms.size());
        const double thr = prune_eps * prune_eps;
        for (std::size_t i = 0; i < terms.size();) {
            Term acc = terms[i++];
            while (i < terms.size() && terms[i].index == acc.index) acc.coeff += terms[i++].coeff;
            if (acc.coeff != Complex{} && std::norm(acc.coeff) > thr) out.push_back(acc);
        }
        return out;
    }

    static Zeon multiply(const Zeon& a, const Zeon& b, double prune_eps)
    {
        Zeon out(a.n_);
        if (a.is_zero() || b.is_zero()) return out;
        const Zeon& u = a.size() <= b.size() ? a : b;
        const Zeon& v = a.size() <= b.size() ? b : a;
        const int n = a.n_;
        const double pairs = static_cast<double>(u.size()) * static_cast<double>(v.size());
        const double thr = prune_eps * prune_eps;

        if (n <= kDenseLimit && pairs * 4 >= static_cast<double>(std::size_t{1} << n)) {
            const std::size_t dim = std::size_t{1} << n;
            const auto full = MultiIndex::full(n).bits();
            std::vector<Complex> acc(dim);

            // Submask enumeration visits only the disjoint partners of each
            // outer blade: sum over u of 2^(n - |I|) lookups.
            double submask_cost = 0.0;
            for (const auto& t : u.terms_) submask_cost += std::ldexp(1.0, n - t.index.grade());

            if (submask_cost < pairs) {
                std::vector<std::int32_t> where(dim, -1);
                for (std::size_t j = 0; j < v.terms_.size(); ++j)
                    where[v.terms_[j].index.bits()] = static_cast<std::int32_t>(j);
                for (const auto& t : u.terms_) {
                    const auto comp = full & ~t.index.bits();
                    for (auto s = comp;; s = (s - 1) & comp) {
                        if (auto j = where[s]; j >= 0) acc[s | t.index.bits()] += t.coeff * v.terms_[j].coeff;
                        if (s == 0) break;
                    }
                }
            } else {
                for (const auto& t : u.terms_)
                    for (const auto& s : v.terms_)
                        if (t.index.disjoint(s.index)) acc[t.index.bits() | s.index.bits()] += t.coeff * s.coeff;
            }
            for (std::size_t m = 0; m < dim; ++m)
                if (acc[m] != Complex{} && std::norm(acc[m]) > thr)
                    out.terms_.push_back({MultiIndex(static_cast<MultiIndex::mask_type>(m)), acc[m]});
            return out;
        }

        std::vector<Term> prods;
        prods.reserve(static_cast<std::size_t>(pairs));
        for (const auto& t : u.terms_)
            for (const auto& s : v.terms_)
                if (t.index.disjoint(s.index))
                    prods.push_back({MultiIndex(t.index.bits() | s.index.bits()), t.coeff * s.coeff});
        std::stable_sort(prods.begin(), prods.end(),
                         [](const Term& x, const Term& y) { return x.index < y.index; });
        out.terms_ = merge_sorted(std::move(prods), prune_eps);
        return out;
    }

    int n_;
    std::vector<Term> terms_;
};

inline Complex scalar_part(const Zeon& u) noexcept { return u.scalar_part(); }
inline Zeon dual_part(const Zeon& u) { return u.dual_part(); }
inline Zeon grade_part(const Zeon& u, int k) { return u.grade_part(k); }
inline int min_grade(const Zeon& u) noexcept { return u.min_grade(); }
inline Zeon min_grade_part(const Zeon& u) { return u.min_grade_part(); }

/// max_I |u_I - v_I|.
inline double max_abs_diff(const Zeon& u, const Zeon& v)
{
    return add(u, -v, 0.0).max_abs();
}

inline bool approx_equal(const Zeon& u, const Zeon& v, double eps = Tolerance{}.eq_eps)
{
    return max_abs_diff(u, v) <= eps;
}

/// Least kappa >= 1 with u^kappa = 0, or nullopt when C(u) != 0.
inline std::optional<int> nilpotency_index(const Zeon& u)
{
    if (u.scalar_part() != Complex{}) return std::nullopt;
    int kappa = 1;
    Zeon p = u;
    while (!p.is_zero()) {
        p = p * u;
        ++kappa;
    }
    return kappa;
}

/// u^k by square-and-multiply; u^0 = 1.
inline Zeon power(const Zeon& u, unsigned k)
{
    Zeon result(u.n(), 1.0);
    Zeon base = u;
    while (k > 0) {
        if (k & 1u) result = result * base;
        k >>= 1;
        if (k > 0) {
            if (base.is_zero()) return Zeon(u.n());
            base = base * base;
        }
    }
    return result;
}

/// Multiplicative inverse via the truncated geometric series in D(u)/C(u):
/// u^-1 = (1/C u) sum_{j < kappa} (-1)^j (C u)^-j (D u)^j.
inline Zeon inverse(const Zeon& u, const Tolerance& tol = {})
{
    const Complex c = u.scalar_part();
    if (std::abs(c) <= tol.eq_eps)
        throw Error(ErrorKind::NotInvertible, "scalar part is (numerically) zero");
    const Zeon x = scale(-1.0 / c, u.dual_part(), tol.prune_eps);
    Zeon sum(u.n(), 1.0);
    Zeon term = sum;
    while (true) {
        term = mul(term, x, tol.prune_eps);
        if (term.is_zero()) break;
        sum = add(sum, term, tol.prune_eps);
    }
    return scale(1.0 / c, sum, tol.prune_eps);
}

namespace detail {

// k-th root of w seeded at the scalar root `seed` of C(w), built one
// generator at a time: writing w|_{[j]} = phi + zeta_j psi with phi, psi over
// the first j - 1 generators, u_j = u_{j-1} + zeta_j (1/k) phi^{-(k-1)/k} psi,
// where phi^{-(k-1)/k} = u_{j-1} phi^{-1}.
inline Zeon kth_root_from_seed(const Zeon& w, unsigned k, Complex seed, const Tolerance& tol)
{
    const int n = w.n();
    Zeon u(n, seed);
    int top = 0;
    for (const auto& t : w.terms()) top = std::max(top, t.index.highest());
    const Complex inv_k = 1.0 / static_cast<double>(k);

    for (int j = 1; j <= top; ++j) {
        const auto bit = MultiIndex::mask_type{1} << (j - 1);
        const auto below = MultiIndex::full(j - 1).bits();
        std::vector<Zeon::Term> phi_terms, psi_terms;
        for (const auto& t : w.terms()) {
            const auto b = t.index.bits();
            if ((b & ~below) == 0) phi_terms.push_back(t);
            else if ((b & ~(below | bit)) == 0) psi_terms.push_back({MultiIndex(b & ~bit), t.coeff});
        }
        if (psi_terms.empty()) continue;
        const Zeon phi = Zeon::from_terms(n, std::move(phi_terms), 0.0);
        const Zeon psi = Zeon::from_terms(n, std::move(psi_terms), 0.0);
        const Zeon correction = scale(inv_k, mul(mul(u, inverse(phi, tol), tol.prune_eps), psi, tol.prune_eps),
                                      tol.prune_eps);
        u = add(u, correction.times_generator(j), tol.prune_eps);
    }
    return u;
}

// arg taken in (-pi, pi]; adding 0.0 turns a -0 imaginary part into +0.
inline Complex principal_scalar_root(Complex c, unsigned k)
{
    c = {c.real(), c.imag() + 0.0};
    return snap_components(std::polar(std::pow(std::abs(c), 1.0 / k), std::arg(c) / k));
}

// exp(2 pi i j / k) with exact values on the quarter turns.
inline Complex unity_root(unsigned j, unsigned k)
{
    j %= k;
    if ((4 * j) % k == 0) {
        switch ((4 * j) / k) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * j / k);
}

} // namespace detail

/// All k distinct k-th roots of an invertible zeon, one per complex k-th root
/// of C(w). The first entry is the principal root; the rest follow the
/// scalar roots counter-clockwise.
inline std::vector<Zeon> kth_roots(const Zeon& w, unsigned k, const Tolerance& tol = {})
{
    if (k == 0) throw Error(ErrorKind::PreconditionError, "root order must be positive");
    const Complex c = w.scalar_part();
    if (std::abs(c) <= tol.eq_eps)
        throw Error(ErrorKind::NotInvertible, "k-th roots need an invertible zeon");
    const Complex principal = detail::principal_scalar_root(c, k);
    std::vector<Zeon> roots;
    roots.reserve(k);
    for (unsigned j = 0; j < k; ++j) {
        const Complex seed = j == 0 ? principal : snap_components(principal * detail::unity_root(j, k));
        roots.push_back(detail::kth_root_from_seed(w, k, seed, tol));
    }
    return roots;
}

/// The k-th root whose scalar part is the principal complex root of C(w).
inline Zeon principal_kth_root(const Zeon& w, unsigned k, const Tolerance& tol = {})
{
    if (k == 0) throw Error(ErrorKind::PreconditionError, "root order must be positive");
    const Complex c = w.scalar_part();
    if (std::abs(c) <= tol.eq_eps)
        throw Error(ErrorKind::NotInvertible, "k-th roots need an invertible zeon");
    return detail::kth_root_from_seed(w, k, detail::principal_scalar_root(c, k), tol);
}

} // namespace zeon
