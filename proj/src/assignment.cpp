#include "longform/assignment.hpp"
#include "longform/error.hpp"

#include <algorithm>
#include <limits>

namespace longform {

std::vector<std::optional<std::size_t>> max_weight_assignment(const std::vector<std::vector<std::int64_t>>& weights) {
    const std::size_t rows = weights.size();
    const std::size_t cols = rows ? weights[0].size() : 0;
    for (const auto& r : weights)
        if (r.size() != cols) throw InvalidArgument("assignment matrix rows differ in length");
    std::vector<std::optional<std::size_t>> result(rows);
    if (rows == 0 || cols == 0) return result;

    // Square minimisation problem on 1-based indices; padding cells cost 0.
    const std::size_t n = std::max(rows, cols);
    auto cost = [&](std::size_t i, std::size_t j) -> std::int64_t {
        return (i <= rows && j <= cols) ? -weights[i - 1][j - 1] : 0;
    };
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
    std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // match[col] = row
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<std::int64_t> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            std::int64_t delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const std::int64_t cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    for (std::size_t j = 1; j <= n; ++j)
        if (match[j] >= 1 && match[j] <= rows && j <= cols) result[match[j] - 1] = j - 1;
    return result;
}

}  // namespace longform
