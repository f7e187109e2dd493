#pragma once

// Shared fixtures and independent reference computations for the tests.
// Nothing here calls into the engine or the oracle module.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "gbc/count.hpp"
#include "gbc/graph.hpp"

namespace gbc::test {

// u_i -> id i-1, v_j -> id j.
inline BipartiteGraph reconstruction_graph() {
  return BipartiteGraph::from_edges(4, 5,
                                    {{0, 0}, {0, 1}, {0, 2},           // u1
                                     {1, 0}, {1, 1}, {1, 2}, {1, 4},   // u2
                                     {2, 1}, {2, 2}, {2, 3},           // u3
                                     {3, 0}, {3, 2}, {3, 3}, {3, 4}}); // u4
}

inline BipartiteGraph random_graph(VertexId nu, VertexId nv, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < nu; ++u)
    for (VertexId v = 0; v < nv; ++v)
      if (coin(rng)) edges.push_back({u, v});
  return BipartiteGraph::from_edges(nu, nv, std::move(edges));
}

// One graph of the 300-graph equivalence corpus: up to 30+30 vertices,
// density in [0.1, 0.5].
inline BipartiteGraph corpus_graph(int i) {
  std::mt19937_64 rng(0x5eed0000 + i);
  std::uniform_int_distribution<VertexId> size(1, 30);
  std::uniform_real_distribution<double> dens(0.1, 0.5);
  const VertexId nu = size(rng);
  const VertexId nv = size(rng);
  return random_graph(nu, nv, dens(rng), rng());
}

inline std::vector<std::vector<bool>> adjacency_matrix(const BipartiteGraph& g) {
  std::vector<std::vector<bool>> m(g.u_count(), std::vector<bool>(g.v_count(), false));
  for (const Edge& e : g.edges()) m[e.u][e.v] = true;
  return m;
}

// Plain double-precision-free binomial for small arguments.
inline Count small_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  Count r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Counts (p,q)-bicliques from the V side: every q-subset of V, then
// C(#common U neighbors, p). Walks the opposite direction of the oracle.
inline Count count_from_v_side(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q) {
  const auto m = adjacency_matrix(g);
  const VertexId nv = g.v_count();
  if (q > nv) return 0;
  Count total = 0;
  std::vector<VertexId> pick(q);
  for (std::uint32_t i = 0; i < q; ++i) pick[i] = i;
  while (true) {
    std::uint64_t common = 0;
    for (VertexId u = 0; u < g.u_count(); ++u) {
      bool all = true;
      for (VertexId v : pick) all = all && m[u][v];
      common += all;
    }
    total += small_choose(common, p);
    int i = static_cast<int>(q) - 1;
    while (i >= 0 && pick[i] == nv - q + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (std::uint32_t j = i + 1; j < q; ++j) pick[j] = pick[j - 1] + 1;
  }
  return total;
}

inline std::size_t shared(const BipartiteGraph& g, Layer layer, VertexId a, VertexId b) {
  auto na = g.neighbors(layer, a);
  auto nb = g.neighbors(layer, b);
  std::vector<VertexId> out;
  std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(out));
  return out.size();
}

// Quadratic pairwise 2-hop oracle.
inline std::vector<std::vector<VertexId>> pairwise_two_hop(const BipartiteGraph& g, Layer layer,
                                                           std::uint32_t k) {
  const VertexId n = g.count(layer);
  std::vector<std::vector<VertexId>> lists(n);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b)
      if (a != b && shared(g, layer, a, b) >= k) lists[a].push_back(b);
  return lists;
}

// 1-blocks of rows x columns, columns placed at pos[col], blocks of `bits`.
inline std::size_t recount_one_blocks(const std::vector<std::vector<VertexId>>& rows,
                                      const std::vector<VertexId>& pos, unsigned bits) {
  std::size_t ones = 0;
  for (const auto& row : rows) {
    std::vector<std::uint32_t> blocks;
    for (VertexId c : row) blocks.push_back(pos[c] / bits);
    std::sort(blocks.begin(), blocks.end());
    for (std::size_t i = 0; i < blocks.size();) {
      std::size_t j = i;
      while (j < blocks.size() && blocks[j] == blocks[i]) ++j;
      ones += (j - i == 1);
      i = j;
    }
  }
  return ones;
}

inline std::vector<std::vector<VertexId>> rows_of(const BipartiteGraph& g, Layer column_layer) {
  const Layer row_layer = opposite(column_layer);
  std::vector<std::vector<VertexId>> rows(g.count(row_layer));
  for (VertexId r = 0; r < g.count(row_layer); ++r) {
    auto n = g.neighbors(row_layer, r);
    rows[r].assign(n.begin(), n.end());
  }
  return rows;
}

}  // namespace gbc::test
