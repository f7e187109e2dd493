#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gbc/engine.hpp"
#include "gbc/graph.hpp"
#include "gbc/two_hop.hpp"

namespace gbc {

// A group of roots together with everything counting them can touch: the
// closure holds each root and its 2-hop neighbors. Cost is the number of
// list entries the closure carries, sum of |N(x)| + |N2(x)|.
struct PartitionGroup {
  std::vector<VertexId> roots;    // ascending
  std::vector<VertexId> closure;  // ascending, contains roots
  std::uint64_t cost = 0;
  bool oversize = false;  // a single root whose closure alone exceeds the budget
};

struct PartitionSet {
  std::uint64_t budget = 0;
  std::size_t roots_filtered = 0;
  std::vector<PartitionGroup> groups;
};

// w(x) = |N(x)| + |N2(x)| over the anchor layer (U of `g`).
std::vector<std::uint64_t> partition_weights(const BipartiteGraph& g, const TwoHopIndex& undirected);

// Greedy biclique-aware partitioning of the anchor layer (U of `g`) under a
// budget of `budget` list entries. Roots are the vertices with at least
// `min_two_hop` 2-hop neighbors. Seeds are taken by descending average
// neighbor weight; a group then repeatedly admits the unassigned root whose
// closure overlaps the current closure by the most weight, until the next
// admission would exceed the budget.
PartitionSet bcpar(const BipartiteGraph& g, const TwoHopIndex& undirected, std::uint64_t budget,
                   std::uint32_t min_two_hop = 0);

std::uint64_t closure_cost(std::span<const std::uint64_t> weights, std::span<const VertexId> closure);

// Counts group by group on closure subgraphs and sums. `g` is oriented with
// the anchor as U and `undirected` is its q-thresholded index.
CountReport count_partitioned(const BipartiteGraph& g, const TwoHopIndex& undirected,
                              const PartitionSet& parts, std::uint32_t p, std::uint32_t q,
                              const EngineConfig& cfg);

struct PartitionedCount {
  AnchorChoice anchor;
  PartitionSet parts;
  CountReport report;
};

// Anchor selection, partitioning and counting on an unoriented graph.
PartitionedCount count_bicliques_partitioned(const BipartiteGraph& g, std::uint32_t p,
                                             std::uint32_t q, std::uint64_t budget,
                                             const EngineConfig& cfg);

// One line per group: id, cost, oversize flag, comma-separated roots.
void write_partition_manifest(std::ostream& out, const PartitionSet& parts);

}  // namespace gbc
