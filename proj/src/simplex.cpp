#include "sppolar/detail/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sppolar::detail {

std::optional<std::vector<double>> find_feasible(EqualitySystem system, double tol)
{
    const std::size_t m = system.rows;
    const std::size_t n = system.cols;
    if (system.a.size() != m * n || system.b.size() != m)
        throw std::invalid_argument("equality system has inconsistent dimensions");

    constexpr double kPivotEps = 1e-12;
    // Columns: n structural, m artificial, 1 right-hand side.
    const std::size_t width = n + m + 1;
    std::vector<double> t(m * width, 0.0);
    auto cell = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        const double sign = system.b[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c)
            cell(r, c) = sign * system.at(r, c);
        cell(r, n + r) = 1.0;
        cell(r, width - 1) = sign * system.b[r];
        basis[r] = n + r;
    }

    // Reduced costs of the phase-one objective (sum of artificials).
    std::vector<double> cost(width, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            cost[c] -= cell(r, c);
    for (std::size_t r = 0; r < m; ++r)
        cost[width - 1] -= cell(r, width - 1);

    const std::size_t max_iterations = 50 * (n + m) + 1000;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        std::size_t enter = width;
        for (std::size_t c = 0; c + 1 < width; ++c) {
            if (cost[c] < -kPivotEps) {
                enter = c;
                break;
            }
        }
        if (enter == width)
            break;

        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < m; ++r) {
            const double coef = cell(r, enter);
            if (coef <= kPivotEps)
                continue;
            const double ratio = cell(r, width - 1) / coef;
            if (ratio < best - kPivotEps || (std::abs(ratio - best) <= kPivotEps && basis[r] < basis[leave])) {
                best = ratio;
                leave = r;
            }
        }
        if (leave == m)
            break;  // unbounded direction; cannot happen for phase one

        const double pivot = cell(leave, enter);
        for (std::size_t c = 0; c < width; ++c)
            cell(leave, c) /= pivot;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave)
                continue;
            const double factor = cell(r, enter);
            if (factor == 0.0)
                continue;
            for (std::size_t c = 0; c < width; ++c)
                cell(r, c) -= factor * cell(leave, c);
        }
        const double factor = cost[enter];
        for (std::size_t c = 0; c < width; ++c)
            cost[c] -= factor * cell(leave, c);
        basis[leave] = enter;
    }

    if (-cost[width - 1] > tol)
        return std::nullopt;
    std::vector<double> x(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] < n)
            x[basis[r]] = std::max(0.0, cell(r, width - 1));
    return x;
}

}  // namespace sppolar::detail
