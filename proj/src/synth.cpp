#include "gbc/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>

#include "gbc/error.hpp"

namespace gbc {

SynthResult synth_generate(const SynthParams& params) {
  if (params.u_count == 0 || params.v_count == 0) {
    throw ValidationError("synth", "layer sizes must be at least 1");
  }
  if (!(params.exponent > 1.0)) throw ValidationError("synth", "exponent must exceed 1");

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const VertexId nu = params.u_count;
  const VertexId nv = params.v_count;
  const double tail = 1.0 / (params.exponent - 1.0);

  SynthResult result;
  const std::uint32_t t_min = params.min_two_hop != 0 ? params.min_two_hop : std::max<std::uint32_t>(1, nu / 64);
  const std::uint32_t t_max = std::max<std::uint32_t>(1, nu - 1);
  result.targets.resize(nu);
  for (auto& t : result.targets) {
    // Inverse-CDF Pareto draw.
    const double x = static_cast<double>(t_min) * std::pow(1.0 - unit(rng), -tail);
    if (x > static_cast<double>(t_max)) {
      t = t_max;
      ++result.clipped;
    } else {
      t = static_cast<std::uint32_t>(x);
    }
  }

  std::vector<double> popularity(nv);
  {
    std::vector<VertexId> rank(nv);
    for (VertexId i = 0; i < nv; ++i) rank[i] = i;
    std::shuffle(rank.begin(), rank.end(), rng);
    for (VertexId v = 0; v < nv; ++v) popularity[v] = std::pow(1.0 + rank[v], -tail);
  }
  std::discrete_distribution<VertexId> pick_v(popularity.begin(), popularity.end());

  std::vector<std::vector<VertexId>> v_adj(nv);
  std::vector<std::vector<VertexId>> u_adj(nu);
  std::vector<VertexId> order(nu);
  for (VertexId i = 0; i < nu; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  // Seed pass: one edge each, so early vertices in the growth pass can reach
  // anyone at all.
  for (VertexId u : order) {
    const VertexId v = pick_v(rng);
    u_adj[u].push_back(v);
    v_adj[v].push_back(u);
  }

  std::vector<VertexId> seen(nu, 0);
  VertexId stamp = 0;
  for (VertexId u : order) {
    ++stamp;
    seen[u] = stamp;
    std::uint32_t reach = 0;
    auto absorb = [&](VertexId v) {
      for (VertexId w : v_adj[v]) {
        if (seen[w] != stamp) {
          seen[w] = stamp;
          ++reach;
        }
      }
    };
    for (VertexId v : u_adj[u]) absorb(v);

    const std::uint32_t target = result.targets[u];
    const std::size_t degree_cap = std::min<std::size_t>(nv, std::max<std::uint32_t>(1, target));
    std::size_t attempts = 0;
    while (reach < target && u_adj[u].size() < degree_cap && attempts < 8 * degree_cap + 64) {
      ++attempts;
      const VertexId v = pick_v(rng);
      if (std::find(u_adj[u].begin(), u_adj[u].end(), v) != u_adj[u].end()) continue;
      absorb(v);
      u_adj[u].push_back(v);
      v_adj[v].push_back(u);
    }
  }

  // Shuffle ids so no ordering signal survives into the output.
  std::vector<VertexId> perm_u(nu);
  std::vector<VertexId> perm_v(nv);
  for (VertexId i = 0; i < nu; ++i) perm_u[i] = i;
  for (VertexId i = 0; i < nv; ++i) perm_v[i] = i;
  std::shuffle(perm_u.begin(), perm_u.end(), rng);
  std::shuffle(perm_v.begin(), perm_v.end(), rng);

  std::vector<Edge> edges;
  std::vector<std::uint32_t> targets(nu);
  for (VertexId u = 0; u < nu; ++u) {
    targets[perm_u[u]] = result.targets[u];
    for (VertexId v : u_adj[u]) edges.push_back({perm_u[u], perm_v[v]});
  }
  result.targets = std::move(targets);
  result.graph = BipartiteGraph::from_edges(nu, nv, std::move(edges));
  return result;
}

SynthParams parse_synth_params(std::string_view text) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = text.find(',');
    fields.push_back(text.substr(0, comma));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (fields.size() != 4 && fields.size() != 5) {
    throw ValidationError("synth", "expected u,v,alpha,seed[,min_two_hop]");
  }
  auto integer = [](std::string_view f) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw ValidationError("synth", "bad integer '" + std::string(f) + "'");
    }
    return x;
  };
  SynthParams p;
  p.u_count = static_cast<VertexId>(integer(fields[0]));
  p.v_count = static_cast<VertexId>(integer(fields[1]));
  try {
    std::size_t used = 0;
    const std::string alpha(fields[2]);
    p.exponent = std::stod(alpha, &used);
    if (used != alpha.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("synth", "bad exponent '" + std::string(fields[2]) + "'");
  }
  p.seed = integer(fields[3]);
  if (fields.size() == 5) p.min_two_hop = static_cast<std::uint32_t>(integer(fields[4]));
  return p;
}

}  // namespace gbc
