#pragma once

#include <stdexcept>

namespace zeon {

/// Numerical thresholds shared by every operation.
///
/// prune_eps drops stored coefficients, eq_eps decides approximate equality
/// and invertibility, root_eps bounds scalar-polynomial residuals and
/// cluster_eps is the scale-relative tolerance used when grouping scalar
/// roots into multiple roots.
struct Tolerance {
    double prune_eps = 1e-14;
    double eq_eps = 1e-9;
    double root_eps = 1e-10;
    double cluster_eps = 1e-7;

    void validate() const
    {
        if (prune_eps < 0 || eq_eps < 0 || root_eps < 0 || cluster_eps < 0)
            throw std::invalid_argument("tolerances must be nonnegative");
        if (eq_eps < prune_eps)
            throw std::invalid_argument("eq_eps must be >= prune_eps");
    }
};

} // namespace zeon
