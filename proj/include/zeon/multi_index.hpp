#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

namespace zeon {

inline constexpr int kMaxGenerators = 32;

/// Subset I of [n] = {1, ..., n} identifying the blade zeta_I.
/// Generator i is stored in bit i - 1, so the scalar blade is the empty mask.
class MultiIndex {
public:
    using mask_type = std::uint32_t;

    constexpr MultiIndex() noexcept = default;
    constexpr explicit MultiIndex(mask_type bits) noexcept : bits_(bits) {}

    MultiIndex(std::initializer_list<int> generators)
    {
        for (int g : generators) insert(g);
    }

    static MultiIndex from_generators(const std::vector<int>& generators)
    {
        MultiIndex m;
        for (int g : generators) m.insert(g);
        return m;
    }

    /// zeta_[n], the top blade.
    static constexpr MultiIndex full(int n) noexcept
    {
        return MultiIndex(n >= 32 ? ~mask_type{0} : ((mask_type{1} << n) - 1));
    }

    constexpr mask_type bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr int grade() const noexcept { return std::popcount(bits_); }
    constexpr bool contains(int generator) const noexcept
    {
        return generator >= 1 && generator <= kMaxGenerators && (bits_ >> (generator - 1)) & 1u;
    }

    /// Largest generator present, 0 for the scalar blade.
    constexpr int highest() const noexcept { return kMaxGenerators - std::countl_zero(bits_); }

    constexpr bool valid_for(int n) const noexcept { return (bits_ & ~full(n).bits_) == 0; }

    constexpr bool disjoint(MultiIndex other) const noexcept { return (bits_ & other.bits_) == 0; }

    /// Generators in ascending order.
    std::vector<int> generators() const
    {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(grade()));
        for (mask_type b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
        return out;
    }

    constexpr auto operator<=>(const MultiIndex&) const noexcept = default;

private:
    void insert(int generator)
    {
        if (generator < 1 || generator > kMaxGenerators)
            throw std::out_of_range("generator index out of range 1..32");
        bits_ |= mask_type{1} << (generator - 1);
    }

    mask_type bits_ = 0;
};

/// Blade product: zeta_I zeta_J = zeta_{I u J} when I and J are disjoint,
/// and 0 otherwise (returned as nullopt).
constexpr std::optional<MultiIndex> blade_mul(MultiIndex a, MultiIndex b) noexcept
{
    if (!a.disjoint(b)) return std::nullopt;
    return MultiIndex(a.bits() | b.bits());
}

} // namespace zeon
