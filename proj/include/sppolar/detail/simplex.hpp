#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace sppolar::detail {

/// Dense row-major equality system: rows x cols coefficients.
struct EqualitySystem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;
    std::vector<double> b;

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
};

/// Finds x >= 0 with a x = b by phase-one simplex (Bland's rule). Returns
/// nullopt when the minimal total infeasibility exceeds `tol`.
std::optional<std::vector<double>> find_feasible(EqualitySystem system, double tol);

}  // namespace sppolar::detail
