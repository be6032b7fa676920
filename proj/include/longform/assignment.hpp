#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace longform {

// Exact maximum-weight assignment on a rows x cols matrix (rectangular
// allowed) via the Hungarian method with potentials, O(n^3). Integer
// weights keep ties exact. Returns, for every row, its column or nullopt
// when the row is left unassigned (rows > cols).
std::vector<std::optional<std::size_t>> max_weight_assignment(const std::vector<std::vector<std::int64_t>>& weights);

}  // namespace longform
