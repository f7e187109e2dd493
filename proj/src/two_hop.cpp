#include "gbc/two_hop.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "gbc/error.hpp"

namespace gbc {

TwoHopIndex::TwoHopIndex(Layer layer, std::uint32_t threshold, bool directed,
                         std::vector<std::size_t> offsets, std::vector<VertexId> targets)
    : layer_(layer),
      threshold_(threshold),
      directed_(directed),
      offsets_(std::move(offsets)),
      targets_(std::move(targets)) {}

TwoHopIndex build_two_hop_index(const BipartiteGraph& g, Layer layer, std::uint32_t k,
                                const PriorityOrder* order) {
  if (k == 0) throw ValidationError("graph", "2-hop threshold must be at least 1");
  const VertexId n = g.count(layer);
  const Layer other = opposite(layer);
  if (order != nullptr && order->size() != n) {
    throw ValidationError("graph", "priority order does not match layer size");
  }

  std::vector<std::size_t> offsets{0};
  offsets.reserve(static_cast<std::size_t>(n) + 1);
  std::vector<VertexId> targets;

  // Count map over neighbors-of-neighbors, reset through the touched list.
  std::vector<std::uint32_t> shared(n, 0);
  std::vector<VertexId> touched;
  for (VertexId x = 0; x < n; ++x) {
    touched.clear();
    for (VertexId mid : g.neighbors(layer, x)) {
      for (VertexId y : g.neighbors(other, mid)) {
        if (y == x) continue;
        if (shared[y]++ == 0) touched.push_back(y);
      }
    }
    const std::size_t begin = targets.size();
    for (VertexId y : touched) {
      if (shared[y] >= k && (order == nullptr || order->higher(x, y))) targets.push_back(y);
      shared[y] = 0;
    }
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(begin), targets.end());
    offsets.push_back(targets.size());
  }
  return TwoHopIndex(layer, k, order != nullptr, std::move(offsets), std::move(targets));
}

TwoHopIndex direct_two_hop_index(const TwoHopIndex& undirected, const PriorityOrder& order) {
  if (undirected.directed()) throw ValidationError("graph", "index is already directed");
  if (order.size() != undirected.vertex_count()) {
    throw ValidationError("graph", "priority order does not match index size");
  }
  std::vector<std::size_t> offsets{0};
  std::vector<VertexId> targets;
  for (VertexId x = 0; x < undirected.vertex_count(); ++x) {
    for (VertexId y : undirected.neighbors(x)) {
      if (order.higher(x, y)) targets.push_back(y);
    }
    offsets.push_back(targets.size());
  }
  return TwoHopIndex(undirected.layer(), undirected.threshold(), true, std::move(offsets),
                     std::move(targets));
}

PriorityOrder vertex_priority(const TwoHopIndex& undirected) {
  const std::size_t n = undirected.vertex_count();
  PriorityOrder result;
  result.order.resize(n);
  std::iota(result.order.begin(), result.order.end(), VertexId{0});
  std::stable_sort(result.order.begin(), result.order.end(), [&](VertexId a, VertexId b) {
    return undirected.list_size(a) < undirected.list_size(b);
  });
  result.rank.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.rank[result.order[i]] = static_cast<std::uint32_t>(n - i);
  }
  return result;
}

PriorityOrder vertex_priority(const BipartiteGraph& g, Layer layer, std::uint32_t k) {
  return vertex_priority(build_two_hop_index(g, layer, k));
}

namespace {

std::uint64_t wedge_mass(const BipartiteGraph& g, Layer layer) {
  std::uint64_t total = 0;
  for (VertexId x = 0; x < g.count(layer); ++x) {
    const std::uint64_t d = g.degree(layer, x);
    total += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  return total;
}

}  // namespace

AnchorChoice select_anchor_layer(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q,
                                 AnchorMode mode) {
  if (p == 0 || q == 0) throw ValidationError("graph", "p and q must be at least 1");
  AnchorChoice choice;
  choice.wedges_if_u = wedge_mass(g, Layer::V);
  choice.wedges_if_v = wedge_mass(g, Layer::U);
  switch (mode) {
    case AnchorMode::U:
      choice.layer = Layer::U;
      break;
    case AnchorMode::V:
      choice.layer = Layer::V;
      break;
    case AnchorMode::Auto:
      choice.layer = choice.wedges_if_u <= choice.wedges_if_v ? Layer::U : Layer::V;
      break;
  }
  choice.p_eff = choice.layer == Layer::U ? p : q;
  choice.q_eff = choice.layer == Layer::U ? q : p;
  return choice;
}

}  // namespace gbc
