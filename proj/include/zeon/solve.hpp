#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zeon/poly.hpp"
#include "zeon/quadratic.hpp"
#include "zeon/scalar_roots.hpp"
#include "zeon/zeon.hpp"

namespace zeon {

/// Knobs that change the floating-point path of the zero iteration without
/// changing its mathematics.
struct SpectralOptions {
    enum class Evaluation { Horner, AscendingPowers, DescendingPowers };
    enum class Cofactor { SyntheticDivision, Derivative };
    Evaluation evaluation = Evaluation::Horner;
    /// g(lambda0) from C(phi) / (u - lambda0), or equivalently f'(lambda0).
    Cofactor cofactor = Cofactor::SyntheticDivision;
};

struct SpectralZero {
    Zeon zero;
    ScalarRoot seed;
    int iterations = 0;
    /// max coefficient magnitude of phi(zero).
    double residual = 0.0;
    /// Minimal grade of the residual phi(lambda) seen before each correction,
    /// ending with the final one (n + 1 when it vanishes).
    std::vector<int> residual_grades;
    /// Largest coefficient dropped from a grade that the preceding correction
    /// cancels exactly in exact arithmetic.
    double cancellation_noise = 0.0;
};

enum class ZeroSetKind { Empty, FiniteList, MultiplicityFamily, NilpotentFamily };

constexpr std::string_view kind_name(ZeroSetKind k) noexcept
{
    switch (k) {
    case ZeroSetKind::Empty: return "Empty";
    case ZeroSetKind::FiniteList: return "FiniteList";
    case ZeroSetKind::MultiplicityFamily: return "MultiplicityFamily";
    case ZeroSetKind::NilpotentFamily: return "NilpotentFamily";
    }
    return "Unknown";
}

/// Zeros of a polynomial lying over one scalar root.
///
/// MultiplicityFamily with `bound` set: {w : C w = scalar, kappa(D w) <= bound}.
/// MultiplicityFamily with `base` set: {base + a zeta_[n] : a complex}.
/// NilpotentFamily: {base + eta : eta^2 = 0}.
struct ZeroSetDescription {
    ZeroSetKind kind = ZeroSetKind::Empty;
    std::vector<Zeon> zeros;
    Complex scalar{};
    std::optional<int> bound;
    std::optional<Zeon> base;
    std::string text;
};

struct SolveReport {
    std::string digest;
    std::vector<ScalarRoot> spectrum;
    std::vector<SpectralZero> zeros;
    std::vector<ZeroSetDescription> families;
    std::vector<std::string> warnings;
    /// All scalar roots simple and one zero found for each.
    bool splits = false;
};

namespace detail {

inline Zeon evaluate(const ZeonPoly& p, const Zeon& u, SpectralOptions::Evaluation how)
{
    using E = SpectralOptions::Evaluation;
    if (how == E::Horner) return eval(p, u);
    std::vector<Zeon> terms;
    Zeon pw(u.n(), 1.0);
    for (const auto& a : p.coeffs()) {
        terms.push_back(a * pw);
        pw = pw * u;
    }
    Zeon acc(u.n());
    if (how == E::AscendingPowers)
        for (const auto& t : terms) acc += t;
    else
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) acc += *it;
    return acc;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string digest(const ZeonPoly& p)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](const void* data, std::size_t len) {
        const auto* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ull;
        }
    };
    const int n = p.n();
    feed(&n, sizeof n);
    for (const auto& c : p.coeffs()) {
        const auto count = c.size();
        feed(&count, sizeof count);
        for (const auto& t : c.terms()) {
            const auto bits = t.index.bits();
            const double re = t.coeff.real(), im = t.coeff.imag();
            feed(&bits, sizeof bits);
            feed(&re, sizeof re);
            feed(&im, sizeof im);
        }
    }
    return "fnv1a64:" + hex64(h);
}

inline ZeonPoly monicize(const ZeonPoly& phi, const Tolerance& tol)
{
    if (phi.degree() < 1) throw Error(ErrorKind::PreconditionError, "polynomial must be nonconstant");
    if (std::abs(phi.leading().scalar_part()) <= tol.eq_eps)
        throw Error(ErrorKind::LeadingCoefficientNotInvertible, "leading coefficient has zero scalar part");
    if (phi.leading() == Zeon(phi.n(), 1.0)) return phi;
    return scale(inverse(phi.leading(), tol), phi);
}

} // namespace detail

/// The unique zero lambda of phi with C(lambda) = lambda0, for a simple root
/// lambda0 of C(phi).
///
/// With g = C(phi) / (u - lambda0), each step subtracts
/// xi = phi(lambda)_min / g(lambda0), which cancels the minimal-grade part of
/// the residual, so the residual's minimal grade strictly increases and at
/// most n corrections are applied.
inline SpectralZero spectrally_simple_zero(const ZeonPoly& phi, Complex lambda0, const Tolerance& tol = {},
                                           const SpectralOptions& opts = {})
{
    const ZeonPoly monic = detail::monicize(phi, tol);
    const int n = phi.n();
    const ComplexPoly f = scalar_projection(monic);
    if (std::abs(f(lambda0)) > tol.root_eps * std::max(1.0, f.scale_at(lambda0)))
        throw Error(ErrorKind::NotSpectrallySimple, "seed is not a root of the scalar projection");
    const Complex g0 = opts.cofactor == SpectralOptions::Cofactor::SyntheticDivision
                           ? f.deflate(lambda0)(lambda0)
                           : f.derivative()(lambda0);
    if (std::abs(g0) <= tol.root_eps * std::max(1.0, f.derivative().scale_at(lambda0)))
        throw Error(ErrorKind::NotSpectrallySimple, "seed is a multiple root of the scalar projection");

    SpectralZero out{Zeon(n, lambda0), ScalarRoot{lambda0, 1, true}, 0, 0.0, {}, 0.0};
    Zeon& lambda = out.zero;

    // Per-blade roundoff bound for evaluating phi at lambda: |phi|(|lambda|)
    // with coefficientwise absolute values, times a few ulps per Horner step.
    auto magnitude = [](const Zeon& u) {
        std::vector<Zeon::Term> t;
        for (const auto& x : u.terms()) t.push_back({x.index, std::abs(x.coeff)});
        return Zeon::from_terms(u.n(), std::move(t), 0.0);
    };
    const double ulps = 8.0 * (monic.degree() + 1) * std::numeric_limits<double>::epsilon();

    auto roundoff = [&] {
        const Zeon abs_lambda = magnitude(lambda);
        Zeon bound(n);
        for (int k = monic.degree(); k >= 0; --k)
            bound = mul(bound, abs_lambda, 0.0) + magnitude(monic.coeff(static_cast<std::size_t>(k)));
        return bound;
    };

    // Residual with every grade up to `cleared` removed; those grades vanish
    // in exact arithmetic (the scalar one because lambda0 is a root). Entries
    // under the roundoff bound are dropped too, otherwise noise at a low grade
    // would be taken for the minimal-grade part.
    auto residual = [&](int cleared) {
        const Zeon r = detail::evaluate(monic, lambda, opts.evaluation);
        const Zeon bound = roundoff();
        std::vector<Zeon::Term> kept;
        for (const auto& t : r.terms()) {
            if (t.index.grade() <= cleared || std::abs(t.coeff) <= ulps * bound.coeff(t.index).real()) {
                if (!t.index.empty()) out.cancellation_noise = std::max(out.cancellation_noise, std::abs(t.coeff));
            } else {
                kept.push_back(t);
            }
        }
        return Zeon::from_terms(n, std::move(kept), 0.0);
    };

    // xi is not pruned: a correction below prune_eps is still a correction
    // and must not end the loop.
    Zeon r = residual(0);
    out.residual_grades.push_back(r.min_grade());
    while (r.min_grade() <= n) {
        const Zeon xi = scale(1.0 / g0, r.min_grade_part(), 0.0);
        lambda = add(lambda, -xi, 0.0);
        ++out.iterations;
        r = residual(xi.min_grade());
        out.residual_grades.push_back(r.min_grade());
    }
    lambda = Zeon::from_terms(n, std::vector<Zeon::Term>(lambda.terms().begin(), lambda.terms().end()),
                              tol.prune_eps);

    // Zeros with large coefficients cannot get below eps |phi|(|lambda|); such a
    // residual is accepted even above eq_eps.
    out.residual = eval(phi, lambda).max_abs();
    if (out.residual > std::max(tol.eq_eps, ulps * roundoff().max_abs() * std::max(1.0, phi.leading().max_abs())))
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "zero iteration left residual %.3g", out.residual);
        throw Error(ErrorKind::RootFindingFailed, buf);
    }
    return out;
}

/// The family {w1 + a zeta_[n]} of zeros spanned by two zeros w1, w2 sharing a
/// scalar part (or by one multiple zero w1 = w2). Three members are checked.
inline ZeroSetDescription multiple_zero_family(const ZeonPoly& phi, const Zeon& w1, const Zeon& w2,
                                               const Tolerance& tol = {})
{
    if (eval(phi, w1).max_abs() > tol.eq_eps || eval(phi, w2).max_abs() > tol.eq_eps)
        throw Error(ErrorKind::FamilyPreconditionError, "w1 and w2 must both be zeros");
    if (std::abs(w1.scalar_part() - w2.scalar_part()) > tol.eq_eps)
        throw Error(ErrorKind::FamilyPreconditionError, "w1 and w2 must share their scalar part");
    const bool same = approx_equal(w1, w2, tol.eq_eps);
    if (same) {
        const auto q = divide(phi, ZeonPoly::linear(w1), tol).quotient;
        if (eval(q, w1).max_abs() > tol.eq_eps)
            throw Error(ErrorKind::FamilyPreconditionError, "w1 = w2 is not a multiple zero");
    }
    const int n = phi.n();
    const Zeon top = Zeon::blade(n, MultiIndex::full(n));
    for (Complex a : {Complex{1.0, 0.0}, Complex{-2.5, 0.5}, Complex{0.0, 3.0}})
        if (eval(phi, w1 + a * top).max_abs() > tol.eq_eps * std::max(1.0, std::abs(a)))
            throw Error(ErrorKind::FamilyPreconditionError, "sampled family member is not a zero");

    ZeroSetDescription d;
    d.kind = ZeroSetKind::MultiplicityFamily;
    d.zeros.push_back(w1);
    if (!same) d.zeros.push_back(w2);
    d.scalar = w1.scalar_part();
    d.base = w1;
    d.text = "base + a*zeta_[n], a complex";
    return d;
}

/// Nilpotent zeros of the extension of f to CZ_n.
struct NilpotentClassification {
    bool infinitely_many = false;
    /// Least d with f^{(d)}(0) != 0.
    int order = 0;
    /// a zeta_{1} with a = 1; every a zeta_I, I nonempty, works.
    std::optional<Zeon> witness;
};

inline NilpotentClassification classify_nilpotent_zeros(const ComplexPoly& f, int n, const Tolerance& tol = {})
{
    if (f.is_zero()) throw Error(ErrorKind::PreconditionError, "f must be nonzero");
    if (n < 1) throw Error(ErrorKind::PreconditionError, "n must be positive");
    int d = 0;
    while (std::abs(f[static_cast<std::size_t>(d)]) <= tol.prune_eps) ++d;
    if (d <= 1) return {false, d, std::nullopt};
    return {true, d, Zeon::blade(n, MultiIndex{1})};
}

namespace detail {

// mu_f(r): least j with a Taylor coefficient of f at r beyond noise.
inline int root_multiplicity(const ComplexPoly& f, Complex r, const Tolerance& tol)
{
    ComplexPoly p = f;
    double fact = 1.0;
    for (int j = 0; j <= f.degree(); ++j) {
        if (std::abs(p(r)) / fact > tol.root_eps * std::max(1.0, p.scale_at(r) / fact)) return j;
        p = p.derivative();
        fact *= static_cast<double>(j + 1);
    }
    return f.degree();
}

} // namespace detail

/// Membership in the zero set of the extension of f:
/// f(C w) = 0 and kappa(D w) <= mu_f(C w).
inline bool is_extension_zero(const ComplexPoly& f, const Zeon& w, const Tolerance& tol = {})
{
    if (f.is_zero()) throw Error(ErrorKind::PreconditionError, "f must be nonzero");
    const Complex r = w.scalar_part();
    const int mu = detail::root_multiplicity(f, r, tol);
    if (mu == 0) return false;
    return *nilpotency_index(w.dual_part()) <= mu;
}

/// Zeros of phi over every scalar root of C(phi): one spectrally simple zero
/// per simple root, and family analysis where the scalar root is multiple.
inline SolveReport split(const ZeonPoly& phi, const Tolerance& tol = {})
{
    SolveReport rep;
    rep.digest = detail::digest(phi);
    const ZeonPoly monic = detail::monicize(phi, tol);
    const int n = phi.n();
    rep.spectrum = scalar_roots(scalar_projection(monic), tol);

    bool all_simple = true;
    std::size_t found = 0;
    for (const auto& root : rep.spectrum) {
        if (root.simple) {
            try {
                auto z = spectrally_simple_zero(phi, root.value, tol);
                z.seed = root;
                rep.zeros.push_back(std::move(z));
                ++found;
            } catch (const Error& e) {
                rep.warnings.push_back("simple scalar root without zero: " + std::string(e.what()));
            }
            continue;
        }
        all_simple = false;
        char value[64];
        if (root.value.imag() == 0.0)
            std::snprintf(value, sizeof value, "%.12g", root.value.real());
        else
            std::snprintf(value, sizeof value, "(%.12g%+.12gi)", root.value.real(), root.value.imag());
        const std::string where = std::string(value) + " of multiplicity " + std::to_string(root.multiplicity);
        if (phi.has_scalar_coefficients()) {
            ZeroSetDescription d;
            d.kind = ZeroSetKind::MultiplicityFamily;
            d.scalar = root.value;
            d.bound = root.multiplicity;
            d.zeros.push_back(Zeon(n, root.value));
            d.text = "C w = r, kappa(D w) <= " + std::to_string(root.multiplicity);
            rep.families.push_back(std::move(d));
            rep.warnings.push_back("multiple scalar root " + where + ": infinitely many zeros");
        } else if (monic.degree() == 2) {
            const auto q = quadratic_solve(monic.coeff(2), monic.coeff(1), monic.coeff(0), tol);
            ZeroSetDescription d;
            d.scalar = root.value;
            switch (q.kind) {
            case QuadraticKind::NullSquareFamily:
                d.kind = ZeroSetKind::NilpotentFamily;
                d.base = q.family_base;
                d.zeros = q.zeros;
                d.text = "base + eta, eta^2 = 0";
                break;
            case QuadraticKind::NilpotentDiscriminantRoots:
                d.kind = ZeroSetKind::MultiplicityFamily;
                d.base = q.family_base;
                d.zeros = q.zeros;
                d.text = "base + a*zeta_[n], a complex";
                break;
            case QuadraticKind::NoZeros:
                d.kind = ZeroSetKind::Empty;
                d.text = q.note;
                break;
            default:
                d.kind = ZeroSetKind::Empty;
                d.text = "undetermined: " + q.note;
                rep.warnings.push_back("zeros over multiple scalar root " + where + " undetermined");
                break;
            }
            rep.families.push_back(std::move(d));
            rep.warnings.push_back("multiple scalar root " + where + ": analysed by the quadratic formula");
        } else {
            rep.warnings.push_back("multiple scalar root " + where + ": zeon zeros not determined");
        }
    }
    rep.splits = all_simple && found == rep.spectrum.size();
    return rep;
}

} // namespace zeon
