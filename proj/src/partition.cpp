#include "gbc/partition.hpp"

#include <algorithm>
#include <ostream>
#include <queue>

#include "gbc/error.hpp"

namespace gbc {

std::vector<std::uint64_t> partition_weights(const BipartiteGraph& g, const TwoHopIndex& undirected) {
  std::vector<std::uint64_t> w(g.u_count());
  for (VertexId x = 0; x < g.u_count(); ++x) w[x] = g.degree(Layer::U, x) + undirected.list_size(x);
  return w;
}

std::uint64_t closure_cost(std::span<const std::uint64_t> weights, std::span<const VertexId> closure) {
  std::uint64_t cost = 0;
  for (VertexId x : closure) cost += weights[x];
  return cost;
}

namespace {

struct HeapEntry {
  std::uint64_t gain;
  VertexId vertex;
};

// Max gain first, smaller id on ties.
struct GainOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.gain != b.gain ? a.gain < b.gain : a.vertex > b.vertex;
  }
};

}  // namespace

PartitionSet bcpar(const BipartiteGraph& g, const TwoHopIndex& undirected, std::uint64_t budget,
                   std::uint32_t min_two_hop) {
  if (budget == 0) throw ValidationError("partition", "budget must be positive");
  if (undirected.directed() || undirected.vertex_count() != g.u_count()) {
    throw ValidationError("partition", "expected the undirected 2-hop index of the anchor layer");
  }
  const VertexId n = g.u_count();
  const std::vector<std::uint64_t> w = partition_weights(g, undirected);

  std::vector<double> avg_w(n, 0.0);
  std::vector<bool> is_root(n, false);
  std::vector<VertexId> seeds;
  PartitionSet parts;
  parts.budget = budget;
  for (VertexId x = 0; x < n; ++x) {
    const auto n2 = undirected.neighbors(x);
    if (!n2.empty()) {
      std::uint64_t sum = 0;
      for (VertexId y : n2) sum += w[y];
      avg_w[x] = static_cast<double>(sum) / static_cast<double>(n2.size());
    }
    if (n2.size() >= min_two_hop) {
      is_root[x] = true;
      seeds.push_back(x);
    } else {
      ++parts.roots_filtered;
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(), [&](VertexId a, VertexId b) { return avg_w[a] > avg_w[b]; });

  std::vector<bool> assigned(n, false);
  std::vector<bool> in_closure(n, false);
  std::vector<std::uint64_t> gain(n, 0);
  std::vector<VertexId> gained;

  for (VertexId seed : seeds) {
    if (assigned[seed]) continue;
    PartitionGroup group;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, GainOrder> queue;

    // Admitting x into the closure saves w(x) for every root whose closure
    // also contains x, i.e. x itself and its 2-hop neighbors.
    auto absorb_vertex = [&](VertexId x) {
      if (in_closure[x]) return;
      in_closure[x] = true;
      group.closure.push_back(x);
      group.cost += w[x];
      auto credit = [&](VertexId v) {
        if (!is_root[v] || assigned[v]) return;
        if (gain[v] == 0) gained.push_back(v);
        gain[v] += w[x];
        queue.push({gain[v], v});
      };
      credit(x);
      for (VertexId v : undirected.neighbors(x)) credit(v);
    };
    auto admit = [&](VertexId r) {
      assigned[r] = true;
      group.roots.push_back(r);
      absorb_vertex(r);
      for (VertexId y : undirected.neighbors(r)) absorb_vertex(y);
    };

    admit(seed);
    if (group.cost > budget) {
      group.oversize = true;
    } else {
      while (!queue.empty()) {
        const HeapEntry top = queue.top();
        queue.pop();
        if (assigned[top.vertex] || top.gain != gain[top.vertex]) continue;
        std::uint64_t added = in_closure[top.vertex] ? 0 : w[top.vertex];
        for (VertexId y : undirected.neighbors(top.vertex)) {
          if (!in_closure[y]) added += w[y];
        }
        if (group.cost + added > budget) break;
        admit(top.vertex);
      }
    }

    for (VertexId x : group.closure) in_closure[x] = false;
    for (VertexId v : gained) gain[v] = 0;
    gained.clear();
    std::sort(group.roots.begin(), group.roots.end());
    std::sort(group.closure.begin(), group.closure.end());
    parts.groups.push_back(std::move(group));
  }
  return parts;
}

CountReport count_partitioned(const BipartiteGraph& g, const TwoHopIndex& undirected,
                              const PartitionSet& parts, std::uint32_t p, std::uint32_t q,
                              const EngineConfig& cfg) {
  if (undirected.threshold() != q) {
    throw ValidationError("partition", "2-hop index threshold does not match q");
  }
  const PriorityOrder order = vertex_priority(undirected);
  CountReport total;
  total.worker_count = cfg.worker_count;
  total.p_eff = p;
  total.q_eff = q;
  for (const PartitionGroup& group : parts.groups) {
    SearchSpace space;
    try {
      space = build_search_space(g, undirected, order, p, q, group.closure, group.roots);
    } catch (const IntegrityError& e) {
      throw IntegrityError("partition", std::string("closure subgraph is not self-contained: ") + e.what());
    }
    total.absorb(run_search(space, cfg));
  }
  total.roots_filtered += parts.roots_filtered;
  std::sort(total.bicliques.begin(), total.bicliques.end());
  return total;
}

PartitionedCount count_bicliques_partitioned(const BipartiteGraph& g, std::uint32_t p,
                                             std::uint32_t q, std::uint64_t budget,
                                             const EngineConfig& cfg) {
  validate(cfg);
  PartitionedCount result;
  result.anchor = select_anchor_layer(g, p, q, cfg.anchor);
  BipartiteGraph transposed;
  const BipartiteGraph* oriented = &g;
  if (result.anchor.layer == Layer::V) {
    transposed = transpose(g);
    oriented = &transposed;
  }
  const std::uint32_t pe = result.anchor.p_eff;
  const std::uint32_t qe = result.anchor.q_eff;
  const TwoHopIndex undirected = build_two_hop_index(*oriented, Layer::U, qe);
  result.parts = bcpar(*oriented, undirected, budget, pe - 1);
  result.report = count_partitioned(*oriented, undirected, result.parts, pe, qe, cfg);
  result.report.anchor = result.anchor.layer;
  if (result.anchor.layer == Layer::V) {
    for (Biclique& b : result.report.bicliques) std::swap(b.left, b.right);
    std::sort(result.report.bicliques.begin(), result.report.bicliques.end());
  }
  return result;
}

void write_partition_manifest(std::ostream& out, const PartitionSet& parts) {
  out << "# group\tcost\toversize\troots\n";
  for (std::size_t i = 0; i < parts.groups.size(); ++i) {
    const PartitionGroup& g = parts.groups[i];
    out << i << '\t' << g.cost << '\t' << (g.oversize ? 1 : 0) << '\t';
    for (std::size_t j = 0; j < g.roots.size(); ++j) out << (j ? "," : "") << g.roots[j];
    out << '\n';
  }
}

}  // namespace gbc
