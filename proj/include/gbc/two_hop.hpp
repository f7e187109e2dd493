#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gbc/graph.hpp"

namespace gbc {

// Total order on one layer: fewer thresholded 2-hop neighbors means higher
// priority, ties go to the smaller id. rank[x] is in [1, n] with n the
// highest priority; order lists vertices from highest to lowest.
struct PriorityOrder {
  std::vector<std::uint32_t> rank;
  std::vector<VertexId> order;

  bool higher(VertexId a, VertexId b) const { return rank[a] > rank[b]; }
  std::size_t size() const { return rank.size(); }
};

// Per-vertex lists of same-layer vertices sharing at least `threshold`
// neighbors. Directed indexes keep only lower-priority entries.
class TwoHopIndex {
 public:
  TwoHopIndex() = default;
  TwoHopIndex(Layer layer, std::uint32_t threshold, bool directed, std::vector<std::size_t> offsets,
              std::vector<VertexId> targets);

  Layer layer() const noexcept { return layer_; }
  std::uint32_t threshold() const noexcept { return threshold_; }
  bool directed() const noexcept { return directed_; }
  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  std::size_t total_entries() const noexcept { return targets_.size(); }

  std::span<const VertexId> neighbors(VertexId x) const {
    return {targets_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }
  std::size_t list_size(VertexId x) const { return offsets_[x + 1] - offsets_[x]; }

 private:
  Layer layer_ = Layer::U;
  std::uint32_t threshold_ = 1;
  bool directed_ = false;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> targets_;
};

// Lists are sorted by vertex id. When `order` is given, only neighbors of
// lower priority than the owner are kept. Throws ValidationError if k == 0.
TwoHopIndex build_two_hop_index(const BipartiteGraph& g, Layer layer, std::uint32_t k,
                                const PriorityOrder* order = nullptr);

// Drops the higher-priority half of an undirected index.
TwoHopIndex direct_two_hop_index(const TwoHopIndex& undirected, const PriorityOrder& order);

PriorityOrder vertex_priority(const TwoHopIndex& undirected);
PriorityOrder vertex_priority(const BipartiteGraph& g, Layer layer, std::uint32_t k);

enum class AnchorMode : std::uint8_t { Auto, U, V };

struct AnchorChoice {
  Layer layer = Layer::U;
  std::uint32_t p_eff = 0;
  std::uint32_t q_eff = 0;
  // Sum of C(d, 2) over the layer opposite to each candidate anchor, i.e.
  // the number of wedges its 2-hop index construction walks.
  std::uint64_t wedges_if_u = 0;
  std::uint64_t wedges_if_v = 0;
};

// Picks the anchor with fewer wedges (ties to U) unless `mode` forces a layer.
// Anchoring on V swaps (p, q) and the caller works on transpose(g).
AnchorChoice select_anchor_layer(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q,
                                 AnchorMode mode = AnchorMode::Auto);

}  // namespace gbc
