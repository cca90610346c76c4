#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "zeon/complex_poly.hpp"
#include "zeon/zeon.hpp"

namespace zeon {

/// Polynomial in one variable with coefficients in CZ_n, ascending degree.
class ZeonPoly {
public:
    explicit ZeonPoly(int n = 0) : n_(n) {}

    ZeonPoly(int n, std::vector<Zeon> coeffs) : n_(n), coeffs_(std::move(coeffs))
    {
        for (const auto& c : coeffs_)
            if (c.n() != n_) throw Error(ErrorKind::DimensionMismatch, "coefficient outside CZ_n");
        trim();
    }

    /// Embeds a complex polynomial (scalar coefficients) in CZ_n[u].
    static ZeonPoly from_scalar(int n, const ComplexPoly& f)
    {
        std::vector<Zeon> c;
        c.reserve(f.coeffs().size());
        for (const auto& a : f.coeffs()) c.emplace_back(n, a);
        return ZeonPoly(n, std::move(c));
    }

    /// u - z
    static ZeonPoly linear(const Zeon& z) { return ZeonPoly(z.n(), {-z, Zeon(z.n(), 1.0)}); }

    int n() const noexcept { return n_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<Zeon>& coeffs() const noexcept { return coeffs_; }
    const Zeon& leading() const { return coeffs_.back(); }
    Zeon coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Zeon(n_); }

    /// True when every coefficient is a complex scalar.
    bool has_scalar_coefficients() const noexcept
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const Zeon& c) { return c.dual_part().is_zero(); });
    }

    friend ZeonPoly operator+(const ZeonPoly& p, const ZeonPoly& q)
    {
        check_same_dim(p, q);
        std::vector<Zeon> c(std::max(p.coeffs_.size(), q.coeffs_.size()), Zeon(p.n_));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) + q.coeff(i);
        return ZeonPoly(p.n_, std::move(c));
    }

    friend ZeonPoly operator-(const ZeonPoly& p) { return scale(Zeon(p.n_, -1.0), p); }
    friend ZeonPoly operator-(const ZeonPoly& p, const ZeonPoly& q) { return p + (-q); }

    friend ZeonPoly operator*(const ZeonPoly& p, const ZeonPoly& q)
    {
        check_same_dim(p, q);
        if (p.is_zero() || q.is_zero()) return ZeonPoly(p.n_);
        std::vector<Zeon> c(p.coeffs_.size() + q.coeffs_.size() - 1, Zeon(p.n_));
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
        return ZeonPoly(p.n_, std::move(c));
    }

    /// Coefficientwise product with a zeon constant.
    friend ZeonPoly scale(const Zeon& a, const ZeonPoly& p)
    {
        if (a.n() != p.n_) throw Error(ErrorKind::DimensionMismatch, "constant outside CZ_n");
        std::vector<Zeon> c;
        c.reserve(p.coeffs_.size());
        for (const auto& x : p.coeffs_) c.push_back(a * x);
        return ZeonPoly(p.n_, std::move(c));
    }

    /// The polynomial minus a zeon constant.
    friend ZeonPoly operator-(const ZeonPoly& p, const Zeon& w) { return p - ZeonPoly(p.n_, {w}); }

    bool operator==(const ZeonPoly&) const = default;

private:
    static void check_same_dim(const ZeonPoly& p, const ZeonPoly& q)
    {
        if (p.n_ != q.n_) throw Error(ErrorKind::DimensionMismatch, "polynomials over different CZ_n");
    }

    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    int n_;
    std::vector<Zeon> coeffs_;
};

/// Largest coefficient difference over all degrees and blades.
inline double max_abs_diff(const ZeonPoly& p, const ZeonPoly& q)
{
    double m = 0.0;
    const auto len = std::max(p.coeffs().size(), q.coeffs().size());
    for (std::size_t i = 0; i < len; ++i) m = std::max(m, max_abs_diff(p.coeff(i), q.coeff(i)));
    return m;
}

/// phi(u) by Horner's rule.
inline Zeon eval(const ZeonPoly& p, const Zeon& u)
{
    if (p.n() != u.n()) throw Error(ErrorKind::DimensionMismatch, "argument outside CZ_n");
    Zeon acc(u.n());
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * u + *it;
    return acc;
}

/// f = C(phi), so that f(C u) = C(phi(u)).
inline ComplexPoly scalar_projection(const ZeonPoly& p)
{
    std::vector<Complex> c;
    c.reserve(p.coeffs().size());
    for (const auto& a : p.coeffs()) c.push_back(a.scalar_part());
    return ComplexPoly(std::move(c));
}

inline ZeonPoly derivative(const ZeonPoly& p)
{
    if (p.degree() <= 0) return ZeonPoly(p.n());
    std::vector<Zeon> d;
    for (std::size_t k = 1; k < p.coeffs().size(); ++k) d.push_back(static_cast<double>(k) * p.coeffs()[k]);
    return ZeonPoly(p.n(), std::move(d));
}

struct DivisionResult {
    ZeonPoly quotient;
    ZeonPoly remainder;
};

/// phi = psi q + r with deg r < deg psi, by repeated elimination of the
/// leading term with q_1 = a_m b_k^{-1} u^{m-k}. Requires the leading
/// coefficient of psi to be invertible.
inline DivisionResult divide(const ZeonPoly& phi, const ZeonPoly& psi, const Tolerance& tol = {})
{
    if (phi.n() != psi.n()) throw Error(ErrorKind::DimensionMismatch, "polynomials over different CZ_n");
    if (psi.is_zero() || std::abs(psi.leading().scalar_part()) <= tol.eq_eps)
        throw Error(ErrorKind::DivisorNotMonicizable, "divisor leading coefficient is not invertible");

    const int n = phi.n();
    const int k = psi.degree();
    const int m = phi.degree();
    if (m < k) return {ZeonPoly(n), phi};

    const Zeon lead_inv = inverse(psi.leading(), tol);
    std::vector<Zeon> rem = phi.coeffs();
    std::vector<Zeon> q(static_cast<std::size_t>(m - k + 1), Zeon(n));
    const auto& b = psi.coeffs();
    for (int i = m - k; i >= 0; --i) {
        const auto top = static_cast<std::size_t>(i + k);
        const Zeon qi = mul(rem[top], lead_inv, tol.prune_eps);
        rem[top] = Zeon(n);
        for (int j = 0; j < k; ++j) {
            auto& r = rem[static_cast<std::size_t>(i + j)];
            r = add(r, -mul(b[static_cast<std::size_t>(j)], qi, tol.prune_eps), tol.prune_eps);
        }
        q[static_cast<std::size_t>(i)] = qi;
    }
    rem.resize(static_cast<std::size_t>(k));
    return {ZeonPoly(n, std::move(q)), ZeonPoly(n, std::move(rem))};
}

/// Remainder of phi after division by u - z; equals phi(z).
inline Zeon remainder_at(const ZeonPoly& phi, const Zeon& z, const Tolerance& tol = {})
{
    const auto r = divide(phi, ZeonPoly::linear(z), tol).remainder;
    return r.coeff(0);
}

/// beta^2 - 4 alpha gamma
inline Zeon discriminant(const Zeon& alpha, const Zeon& beta, const Zeon& gamma)
{
    return beta * beta - 4.0 * (alpha * gamma);
}

} // namespace zeon
