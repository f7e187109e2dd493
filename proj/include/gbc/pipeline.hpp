#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "gbc/engine.hpp"
#include "gbc/reorder.hpp"
#include "gbc/synth.hpp"

namespace gbc {

enum class RunMode : std::uint8_t { Oracle, Dfs, Hybrid };

struct PipelineOptions {
  std::optional<std::filesystem::path> input;
  std::optional<SynthParams> synth;
  std::uint32_t p = 0;
  std::uint32_t q = 0;
  unsigned workers = 1;
  RunMode mode = RunMode::Hybrid;
  AnchorMode anchor = AnchorMode::Auto;
  ReorderMode reorder = ReorderMode::None;
  std::size_t border_iters = 1000;
  std::size_t batch_words = 4096;
  std::optional<std::uint64_t> partition_budget;
  bool enumerate = false;
  std::optional<std::filesystem::path> stats_json;
  // Remap tables, permutations, partition manifest and HTB dumps go here.
  std::optional<std::filesystem::path> artifacts_dir;
};

struct PipelineResult {
  CountReport report;
  std::size_t partition_groups = 0;
};

// load/synth -> reorder -> anchor -> 2-hop index -> HTB -> (partition) ->
// count. Prints enumerated bicliques (original labels, "left | right") and
// then the count on its own line. Throws gbc::Error subclasses.
PipelineResult run_pipeline(const PipelineOptions& options, std::ostream& out, std::ostream& err);

// Parses flags, runs the pipeline, reports errors with their module tag.
// Returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gbc
