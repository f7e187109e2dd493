#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "gbc/count.hpp"
#include "gbc/graph.hpp"
#include "gbc/htb.hpp"
#include "gbc/two_hop.hpp"

namespace gbc {

inline constexpr VertexId kNoVertex = 0xFFFFFFFF;

// Everything the search reads, over a local numbering of (a subset of) the
// anchor layer. The anchor layer plays U; p and q are already swapped when
// the caller anchored on V.
struct SearchSpace {
  std::uint32_t p = 0;
  std::uint32_t q = 0;
  Htb one_hop;  // per local anchor vertex: opposite-layer neighbors
  Htb two_hop;  // per local anchor vertex: lower-priority 2-hop neighbors
  std::vector<std::uint32_t> rank;  // priority of every local anchor vertex
  std::vector<VertexId> roots;      // roots that passed the filter, highest priority first
  std::size_t roots_filtered = 0;   // roots dropped for having < p - 1 2-hop neighbors
  std::vector<VertexId> anchor_labels;    // local anchor id -> caller id
  std::vector<VertexId> opposite_labels;  // local opposite id -> caller id
  std::vector<Count> leaf_counts;         // C(n, q) for n up to the largest degree
  std::size_t leaf_saturates_at = SIZE_MAX;

  std::size_t anchor_count() const { return anchor_labels.size(); }
};

// Builds the search space over all anchor vertices of `oriented` (anchor =
// U), with the q-thresholded 2-hop index and the priority order.
SearchSpace build_search_space(const BipartiteGraph& oriented, std::uint32_t p, std::uint32_t q);

// Search space restricted to `members` (sorted anchor ids). `undirected` and
// `order` belong to the whole of `oriented`. Roots are drawn from
// `root_candidates`; the lists of every root must lie inside `members` or an
// IntegrityError is thrown.
SearchSpace build_search_space(const BipartiteGraph& oriented, const TwoHopIndex& undirected,
                               const PriorityOrder& order, std::uint32_t p, std::uint32_t q,
                               std::span<const VertexId> members,
                               std::span<const VertexId> root_candidates);

enum class SearchMode : std::uint8_t { SequentialDfs, Hybrid };

// Records which anchor vertices had their lists read.
class AccessLog {
 public:
  explicit AccessLog(std::size_t vertex_count) : touched_(vertex_count) {}

  void mark(VertexId x) { touched_[x].store(true, std::memory_order_relaxed); }
  std::vector<VertexId> touched() const;

 private:
  std::vector<std::atomic<bool>> touched_;
};

struct EngineConfig {
  unsigned worker_count = 1;
  // Scratch words per worker for one batch of child sets.
  std::size_t batch_words = 4096;
  SearchMode mode = SearchMode::Hybrid;
  AnchorMode anchor = AnchorMode::Auto;
  bool enumerate = false;
  bool prune = true;
  // Verifies candidate nesting at every node; slow.
  bool check_nesting = false;
  bool work_stealing = true;
  // Called for every consumed task with (owning worker, position in its list).
  std::function<void(std::uint32_t, std::uint32_t)> on_task;
  // Indexed by local anchor id of the search space.
  AccessLog* access_log = nullptr;
};

// Throws ValidationError for an unusable configuration.
void validate(const EngineConfig& cfg);

struct CountReport {
  Count count = 0;
  bool overflow = false;
  double time_1hop = 0;  // intersections building C_R (opposite layer)
  double time_2hop = 0;  // intersections building C_L (anchor layer)
  double wall_time = 0;
  std::uint64_t batches_executed = 0;
  std::uint64_t expansions = 0;  // child candidate sets evaluated
  std::uint64_t tasks_total = 0;
  std::uint64_t tasks_stolen = 0;
  std::uint64_t roots = 0;
  std::uint64_t roots_filtered = 0;
  unsigned worker_count = 1;
  Layer anchor = Layer::U;
  std::uint32_t p_eff = 0;
  std::uint32_t q_eff = 0;
  std::vector<Biclique> bicliques;  // enumeration mode only, canonical order

  // Sums counters and times; wall time adds too (sequential groups).
  void absorb(const CountReport& other);
};

struct Task {
  VertexId root = kNoVertex;
  VertexId second = kNoVertex;  // kNoVertex for root-only tasks (p = 1)

  bool has_second() const { return second != kNoVertex; }
  friend bool operator==(const Task&, const Task&) = default;
};

// One task per directed 2-hop pair (root, second) when p >= 2, one per root
// otherwise, dealt round-robin in priority order.
std::vector<std::vector<Task>> pre_runtime_tasks(const SearchSpace& space, unsigned worker_count,
                                                 std::span<const VertexId> roots = {});

struct ClaimedTask {
  Task task;
  std::uint32_t owner;
  std::uint32_t position;
};

// Shared progress counters, one per worker. Entry i counts the tasks taken
// from worker i's list; kDone marks a drained list. Every claim happens under
// that entry's latch, so each task is handed out exactly once.
class ProgressBoard {
 public:
  static constexpr std::uint32_t kDone = 0xFFFFFFFF;

  explicit ProgressBoard(std::vector<std::vector<Task>> assignments);

  std::size_t worker_count() const { return tasks_.size(); }
  std::uint32_t progress(std::size_t worker) const {
    return entries_[worker].counter.load(std::memory_order_acquire);
  }
  std::span<const Task> assignment(std::size_t worker) const { return tasks_[worker]; }

  // Next task of the caller's own list; marks the entry kDone when drained.
  std::optional<ClaimedTask> claim_own(std::size_t worker);

  // Scans the other entries, skipping kDone; locks the first live one,
  // takes the task at its counter and advances it. Returns nullopt once
  // every entry is kDone.
  std::optional<ClaimedTask> steal(std::size_t thief);

 private:
  struct Entry {
    std::mutex latch;
    std::atomic<std::uint32_t> counter{0};
  };

  std::optional<ClaimedTask> take_locked(std::size_t owner);

  std::vector<std::vector<Task>> tasks_;
  std::unique_ptr<Entry[]> entries_;
};

// keep iff |c_r'| >= q and |c_l'| >= p - level - 1, where `level` is the
// child's level (the root sits at level 0).
bool keep_child(std::size_t c_l_size, std::size_t c_r_size, std::uint32_t level, std::uint32_t p,
                std::uint32_t q);

struct ExpandedChild {
  VertexId vertex;
  HtbSlice c_l;
  HtbSlice c_r;
};

struct ExpandStats {
  double time_1hop = 0;
  double time_2hop = 0;
  std::uint64_t batches = 0;
  std::uint64_t expansions = 0;
};

// Worker-owned buffers for the children of one node.
struct LevelScratch {
  std::vector<std::uint32_t> l_idx, l_val, r_idx, r_val;
  std::vector<std::size_t> r_offset;
  std::vector<ExpandedChild> children;
};

// Candidates per batch: floor(batch_words / words of the larger parent set),
// at least 1; always 1 in sequential DFS mode.
std::size_t batch_size(std::size_t batch_words, HtbSlice c_l, HtbSlice c_r, SearchMode mode);

// Computes c_r' = c_r ∩ N(u') for every u' in `batch`, then c_l' = c_l ∩
// N2(u') for those still viable, in one pass over the batch. Children are
// returned in batch order; with `prune`, children failing keep_child() are
// dropped. Returned slices live in `scratch`.
std::span<const ExpandedChild> expand_level(const SearchSpace& space, HtbSlice c_l, HtbSlice c_r,
                                            std::span<const VertexId> batch,
                                            std::uint32_t child_level, bool prune,
                                            LevelScratch& scratch, ExpandStats& stats,
                                            AccessLog* log = nullptr);

// Counts the bicliques rooted at `roots` (all roots of the space when empty).
// Enumerated bicliques are reported in the space's caller ids, anchor side
// first.
CountReport run_search(const SearchSpace& space, const EngineConfig& cfg,
                       std::span<const VertexId> roots = {});

// Full pipeline on a graph: anchor selection, index, HTB, search.
CountReport count_bicliques(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q,
                            const EngineConfig& cfg);

}  // namespace gbc
