#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gbc/count.hpp"
#include "gbc/graph.hpp"

// Ground-truth counters for tests and `--mode oracle`. Nothing here shares
// code with the search engine.
namespace gbc::oracle {

inline constexpr double kMaxLeftSubsets = 1e8;
inline constexpr std::size_t kMaxEnumerated = 1'000'000;

// Enumerates every p-subset of U, intersects their neighborhoods and adds
// C(|common|, q). Throws GuardError when C(|U|, p) exceeds kMaxLeftSubsets.
Count brute_force_count(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q);

// Degree formulas for p = 1 or q = 1 and the wedge formula for (2, 2);
// nullopt for every other shape.
std::optional<Count> closed_form_count(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q);

// All (p, q)-bicliques in lexicographic order. Throws GuardError when the
// result would exceed kMaxEnumerated entries.
std::vector<Biclique> enumerate_bicliques(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q);

}  // namespace gbc::oracle
