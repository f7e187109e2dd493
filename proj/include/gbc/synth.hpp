#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "gbc/graph.hpp"

namespace gbc {

struct SynthParams {
  VertexId u_count = 0;
  VertexId v_count = 0;
  double exponent = 2.0;  // power-law exponent, > 1
  std::uint64_t seed = 0;
  // Smallest 2-hop target; 0 picks max(1, u_count / 64).
  std::uint32_t min_two_hop = 0;
};

struct SynthResult {
  BipartiteGraph graph;
  std::vector<std::uint32_t> targets;  // per U vertex, after clipping
  std::size_t clipped = 0;             // targets cut down to u_count - 1
};

// Power-law bipartite generator. Every U vertex draws a 2-hop neighbor
// target from a truncated power law; V vertices carry Zipf popularity with
// the same exponent. U vertices then sample V neighbors by popularity until
// their 2-hop reach meets the target (or the degree cap, equal to the target,
// is hit). Deterministic per seed; vertex ids are shuffled.
SynthResult synth_generate(const SynthParams& params);

// Parses "u,v,alpha,seed[,min_two_hop]".
SynthParams parse_synth_params(std::string_view text);

}  // namespace gbc
