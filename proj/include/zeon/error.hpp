#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zeon {

enum class ErrorKind {
    DimensionMismatch,
    NotInvertible,
    DivisorNotMonicizable,
    LeadingCoefficientNotInvertible,
    NotSpectrallySimple,
    RootFindingFailed,
    OutsideDomain,
    SeedMismatch,
    FamilyPreconditionError,
    PreconditionError,
    NoZeros,
    ParseError,
};

constexpr std::string_view error_name(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::DivisorNotMonicizable: return "DivisorNotMonicizable";
    case ErrorKind::LeadingCoefficientNotInvertible: return "LeadingCoefficientNotInvertible";
    case ErrorKind::NotSpectrallySimple: return "NotSpectrallySimple";
    case ErrorKind::RootFindingFailed: return "RootFindingFailed";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::SeedMismatch: return "SeedMismatch";
    case ErrorKind::FamilyPreconditionError: return "FamilyPreconditionError";
    case ErrorKind::PreconditionError: return "PreconditionError";
    case ErrorKind::NoZeros: return "NoZeros";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Mathematical non-existence or domain failures, as opposed to malformed
/// input. The CLI maps these to exit status 2.
constexpr bool is_domain_error(ErrorKind kind) noexcept
{
    return kind != ErrorKind::ParseError && kind != ErrorKind::DimensionMismatch;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind)
    {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

} // namespace zeon
