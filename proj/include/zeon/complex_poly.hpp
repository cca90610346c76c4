#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace zeon {

/// Polynomial with complex coefficients, stored in ascending degree order
/// with no trailing zero coefficient. The zero polynomial has degree -1.
class ComplexPoly {
public:
    using value_type = std::complex<double>;

    ComplexPoly() = default;
    ComplexPoly(std::initializer_list<value_type> coeffs) : coeffs_(coeffs) { trim(); }
    explicit ComplexPoly(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    /// prod (z - r_i)
    static ComplexPoly from_roots(const std::vector<value_type>& roots)
    {
        std::vector<value_type> c{1.0};
        for (const auto& r : roots) {
            std::vector<value_type> next(c.size() + 1);
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] += c[i];
                next[i] -= r * c[i];
            }
            c = std::move(next);
        }
        return ComplexPoly(std::move(c));
    }

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    const std::vector<value_type>& coeffs() const noexcept { return coeffs_; }
    value_type operator[](std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : value_type{}; }
    value_type leading() const noexcept { return coeffs_.empty() ? value_type{} : coeffs_.back(); }

    value_type operator()(value_type z) const noexcept
    {
        value_type acc{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    /// sum |a_k| |z|^k, the natural magnitude against which f(z) is judged.
    double scale_at(value_type z) const noexcept
    {
        const double r = std::abs(z);
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
        return acc;
    }

    ComplexPoly derivative() const
    {
        if (coeffs_.size() <= 1) return {};
        std::vector<value_type> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
        return ComplexPoly(std::move(d));
    }

    /// Taylor coefficient f^{(j)}(z) / j!.
    value_type taylor_coeff(value_type z, int j) const
    {
        ComplexPoly p = *this;
        double fact = 1.0;
        for (int i = 0; i < j; ++i) {
            p = p.derivative();
            fact *= static_cast<double>(i + 1);
        }
        return p(z) / fact;
    }

    /// Quotient of synthetic division by (z - root); the remainder f(root) is
    /// discarded.
    ComplexPoly deflate(value_type root) const
    {
        if (coeffs_.size() <= 1) return {};
        std::vector<value_type> q(coeffs_.size() - 1);
        value_type carry{};
        for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
            carry = carry * root + coeffs_[k];
            q[k - 1] = carry;
        }
        return ComplexPoly(std::move(q));
    }

    bool operator==(const ComplexPoly&) const = default;

private:
    void trim()
    {
        while (!coeffs_.empty() && coeffs_.back() == value_type{}) coeffs_.pop_back();
    }

    std::vector<value_type> coeffs_;
};

} // namespace zeon
