#include "gbc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "gbc/error.hpp"
#include "gbc/oracle.hpp"
#include "gbc/partition.hpp"
#include "gbc/stats.hpp"

namespace gbc {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw ValidationError("cli", "cannot write " + path.string());
  return f;
}

void write_permutation(const fs::path& path, std::span<const VertexId> perm) {
  auto f = open_out(path);
  for (std::size_t i = 0; i < perm.size(); ++i) f << i << ' ' << perm[i] << '\n';
}

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::Oracle: return "oracle";
    case RunMode::Dfs: return "dfs";
    case RunMode::Hybrid: return "hybrid";
  }
  return "?";
}

const char* reorder_name(ReorderMode m) {
  switch (m) {
    case ReorderMode::None: return "none";
    case ReorderMode::Degree: return "degree";
    case ReorderMode::Border: return "border";
  }
  return "?";
}

}  // namespace

PipelineResult run_pipeline(const PipelineOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.input.has_value() == opt.synth.has_value()) {
    throw ValidationError("cli", "exactly one of --input and --synth is required");
  }
  if (opt.p == 0 || opt.q == 0) throw ValidationError("cli", "--p and --q must be at least 1");
  if (opt.partition_budget && *opt.partition_budget == 0) {
    throw ValidationError("cli", "--partition-budget must be positive");
  }
  if (opt.artifacts_dir) fs::create_directories(*opt.artifacts_dir);

  // Labels of the current ids, carried through reordering.
  std::vector<std::int64_t> u_labels, v_labels;
  BipartiteGraph g;
  std::size_t clipped = 0;
  if (opt.input) {
    LoadedGraph loaded = load_edge_list(*opt.input);
    g = std::move(loaded.graph);
    u_labels = std::move(loaded.u_labels);
    v_labels = std::move(loaded.v_labels);
    if (opt.artifacts_dir) {
      auto fu = open_out(*opt.artifacts_dir / "remap_u.txt");
      write_remap(fu, u_labels);
      auto fv = open_out(*opt.artifacts_dir / "remap_v.txt");
      write_remap(fv, v_labels);
    }
  } else {
    SynthResult s = synth_generate(*opt.synth);
    clipped = s.clipped;
    if (clipped > 0) {
      err << "warning: [synth] " << clipped << " 2-hop targets exceeded " << (s.graph.u_count() - 1)
          << " and were clipped\n";
    }
    g = std::move(s.graph);
    for (VertexId i = 0; i < g.u_count(); ++i) u_labels.push_back(i);
    for (VertexId i = 0; i < g.v_count(); ++i) v_labels.push_back(i);
  }

  if (opt.reorder != ReorderMode::None) {
    GraphReorder r = reorder_graph(g, opt.reorder, opt.border_iters);
    std::vector<std::int64_t> lu(u_labels.size()), lv(v_labels.size());
    for (std::size_t i = 0; i < lu.size(); ++i) lu[r.perm_u[i]] = u_labels[i];
    for (std::size_t i = 0; i < lv.size(); ++i) lv[r.perm_v[i]] = v_labels[i];
    u_labels = std::move(lu);
    v_labels = std::move(lv);
    if (opt.artifacts_dir) {
      write_permutation(*opt.artifacts_dir / "perm_u.txt", r.perm_u);
      write_permutation(*opt.artifacts_dir / "perm_v.txt", r.perm_v);
    }
    g = std::move(r.graph);
  }

  EngineConfig cfg;
  cfg.worker_count = opt.workers;
  cfg.batch_words = opt.batch_words;
  cfg.mode = opt.mode == RunMode::Dfs ? SearchMode::SequentialDfs : SearchMode::Hybrid;
  cfg.anchor = opt.anchor;
  cfg.enumerate = opt.enumerate;
  validate(cfg);

  PipelineResult result;
  CountReport& report = result.report;
  if (opt.mode == RunMode::Oracle) {
    const auto start = std::chrono::steady_clock::now();
    report.count = oracle::brute_force_count(g, opt.p, opt.q);
    if (opt.enumerate) report.bicliques = oracle::enumerate_bicliques(g, opt.p, opt.q);
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.p_eff = opt.p;
    report.q_eff = opt.q;
  } else {
    const AnchorChoice anchor = select_anchor_layer(g, opt.p, opt.q, opt.anchor);
    BipartiteGraph transposed;
    const BipartiteGraph* oriented = &g;
    if (anchor.layer == Layer::V) {
      transposed = transpose(g);
      oriented = &transposed;
    }
    if (opt.partition_budget) {
      const TwoHopIndex undirected = build_two_hop_index(*oriented, Layer::U, anchor.q_eff);
      const PartitionSet parts = bcpar(*oriented, undirected, *opt.partition_budget, anchor.p_eff - 1);
      const auto oversize = std::count_if(parts.groups.begin(), parts.groups.end(),
                                          [](const PartitionGroup& pg) { return pg.oversize; });
      if (oversize > 0) {
        err << "warning: [partition] " << oversize << " root(s) exceed the budget on their own\n";
      }
      if (opt.artifacts_dir) {
        auto f = open_out(*opt.artifacts_dir / "partitions.txt");
        write_partition_manifest(f, parts);
      }
      result.partition_groups = parts.groups.size();
      report = count_partitioned(*oriented, undirected, parts, anchor.p_eff, anchor.q_eff, cfg);
    } else {
      const SearchSpace space = build_search_space(*oriented, anchor.p_eff, anchor.q_eff);
      if (opt.artifacts_dir) {
        auto f1 = open_out(*opt.artifacts_dir / "htb_one_hop.bin", std::ios::binary);
        write_htb(f1, space.one_hop);
        auto f2 = open_out(*opt.artifacts_dir / "htb_two_hop.bin", std::ios::binary);
        write_htb(f2, space.two_hop);
      }
      report = run_search(space, cfg);
    }
    report.anchor = anchor.layer;
    if (anchor.layer == Layer::V) {
      for (Biclique& b : report.bicliques) std::swap(b.left, b.right);
    }
  }

  if (opt.enumerate) {
    // Original labels, so output is comparable across modes and reorders.
    std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> labelled;
    labelled.reserve(report.bicliques.size());
    for (const Biclique& b : report.bicliques) {
      std::vector<std::int64_t> l, r;
      for (VertexId x : b.left) l.push_back(u_labels[x]);
      for (VertexId x : b.right) r.push_back(v_labels[x]);
      std::sort(l.begin(), l.end());
      std::sort(r.begin(), r.end());
      labelled.emplace_back(std::move(l), std::move(r));
    }
    std::sort(labelled.begin(), labelled.end());
    for (const auto& [l, r] : labelled) {
      for (std::size_t i = 0; i < l.size(); ++i) out << (i ? " " : "") << l[i];
      out << " |";
      for (std::int64_t x : r) out << ' ' << x;
      out << '\n';
    }
  }
  if (report.overflow) err << "warning: [engine] count saturated at 2^128 - 1\n";
  out << to_string(report.count) << '\n';

  if (opt.stats_json) {
    nlohmann::json j = report_to_json(report);
    j["mode"] = mode_name(opt.mode);
    j["reorder"] = reorder_name(opt.reorder);
    j["u_count"] = g.u_count();
    j["v_count"] = g.v_count();
    j["edge_count"] = g.edge_count();
    j["partition_groups"] = result.partition_groups;
    j["synth_clipped"] = clipped;
    auto f = open_out(*opt.stats_json);
    write_stats(f, j);
  }
  return result;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact (p,q)-biclique counting on bipartite graphs"};
  PipelineOptions opt;
  std::string input, synth, artifacts, stats;
  std::uint64_t budget = 0;
  auto* in_opt = app.add_option("--input", input, "edge list file");
  auto* synth_opt = app.add_option("--synth", synth, "u,v,alpha,seed[,min_two_hop] synthetic graph");
  in_opt->excludes(synth_opt);
  app.add_option("--p", opt.p, "anchor-side size")->required();
  app.add_option("--q", opt.q, "opposite-side size")->required();
  app.add_option("--workers", opt.workers, "worker threads")->capture_default_str();
  std::string mode = "hybrid", anchor = "auto", reorder = "none";
  app.add_option("--mode", mode, "oracle, dfs or hybrid")
      ->check(CLI::IsMember({"oracle", "dfs", "hybrid"}))
      ->capture_default_str();
  app.add_option("--anchor", anchor, "auto, u or v")->check(CLI::IsMember({"auto", "u", "v"}))->capture_default_str();
  app.add_option("--reorder", reorder, "none, degree or border")
      ->check(CLI::IsMember({"none", "degree", "border"}))
      ->capture_default_str();
  app.add_option("--border-iters", opt.border_iters, "Border swap iterations per layer")->capture_default_str();
  app.add_option("--batch-words", opt.batch_words, "scratch words per batch")->capture_default_str();
  auto* budget_opt = app.add_option("--partition-budget", budget, "partition budget in list entries");
  app.add_flag("--enumerate", opt.enumerate, "print every biclique");
  app.add_option("--stats-json", stats, "write run statistics");
  app.add_option("--artifacts", artifacts, "directory for remap/permutation/partition/HTB files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    opt.mode = mode == "oracle" ? RunMode::Oracle : mode == "dfs" ? RunMode::Dfs : RunMode::Hybrid;
    opt.anchor = anchor == "u" ? AnchorMode::U : anchor == "v" ? AnchorMode::V : AnchorMode::Auto;
    opt.reorder = reorder == "degree" ? ReorderMode::Degree
                  : reorder == "border" ? ReorderMode::Border
                                        : ReorderMode::None;
    if (!input.empty()) opt.input = input;
    if (!synth.empty()) opt.synth = parse_synth_params(synth);
    if (budget_opt->count() > 0) opt.partition_budget = budget;
    if (!stats.empty()) opt.stats_json = stats;
    if (!artifacts.empty()) opt.artifacts_dir = artifacts;
    run_pipeline(opt, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: [cli] " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gbc
