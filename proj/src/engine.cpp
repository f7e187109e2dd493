#include "gbc/engine.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <string>
#include <thread>

#include "gbc/error.hpp"

namespace gbc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void ensure_size(std::vector<std::uint32_t>& v, std::size_t n) {
  if (v.size() < n) v.resize(n);
}

}  // namespace

std::vector<VertexId> AccessLog::touched() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < touched_.size(); ++i) {
    if (touched_[i].load(std::memory_order_relaxed)) out.push_back(static_cast<VertexId>(i));
  }
  return out;
}

void validate(const EngineConfig& cfg) {
  if (cfg.worker_count == 0) throw ValidationError("engine", "worker count must be at least 1");
  if (cfg.batch_words == 0) throw ValidationError("engine", "batch buffer must hold at least one word");
}

void CountReport::absorb(const CountReport& other) {
  if (!checked_add(count, other.count)) overflow = true;
  overflow = overflow || other.overflow;
  time_1hop += other.time_1hop;
  time_2hop += other.time_2hop;
  wall_time += other.wall_time;
  batches_executed += other.batches_executed;
  expansions += other.expansions;
  tasks_total += other.tasks_total;
  tasks_stolen += other.tasks_stolen;
  roots += other.roots;
  roots_filtered += other.roots_filtered;
  bicliques.insert(bicliques.end(), other.bicliques.begin(), other.bicliques.end());
}

SearchSpace build_search_space(const BipartiteGraph& oriented, std::uint32_t p, std::uint32_t q) {
  if (p == 0 || q == 0) throw ValidationError("engine", "p and q must be at least 1");
  const TwoHopIndex undirected = build_two_hop_index(oriented, Layer::U, q);
  const PriorityOrder order = vertex_priority(undirected);
  const std::vector<VertexId> all = identity_permutation(oriented.u_count());
  return build_search_space(oriented, undirected, order, p, q, all, all);
}

SearchSpace build_search_space(const BipartiteGraph& oriented, const TwoHopIndex& undirected,
                               const PriorityOrder& order, std::uint32_t p, std::uint32_t q,
                               std::span<const VertexId> members,
                               std::span<const VertexId> root_candidates) {
  if (p == 0 || q == 0) throw ValidationError("engine", "p and q must be at least 1");
  if (undirected.directed() || undirected.threshold() != q ||
      undirected.vertex_count() != oriented.u_count()) {
    throw ValidationError("engine", "2-hop index does not match the graph and q");
  }
  SearchSpace s;
  s.p = p;
  s.q = q;

  std::vector<VertexId> local(oriented.u_count(), kNoVertex);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] >= oriented.u_count() || (i > 0 && members[i] <= members[i - 1])) {
      throw ValidationError("engine", "search members must be sorted anchor ids");
    }
    local[members[i]] = static_cast<VertexId>(i);
  }
  s.anchor_labels.assign(members.begin(), members.end());

  const bool whole = members.size() == oriented.u_count();
  std::vector<VertexId> opposite_local;
  if (whole) {
    s.opposite_labels = identity_permutation(oriented.v_count());
    opposite_local = s.opposite_labels;
  } else {
    for (VertexId m : members) {
      auto n = oriented.u_neighbors(m);
      s.opposite_labels.insert(s.opposite_labels.end(), n.begin(), n.end());
    }
    std::sort(s.opposite_labels.begin(), s.opposite_labels.end());
    s.opposite_labels.erase(std::unique(s.opposite_labels.begin(), s.opposite_labels.end()),
                            s.opposite_labels.end());
    opposite_local.assign(oriented.v_count(), kNoVertex);
    for (std::size_t i = 0; i < s.opposite_labels.size(); ++i) {
      opposite_local[s.opposite_labels[i]] = static_cast<VertexId>(i);
    }
  }

  // Local numberings are monotone, so mapped lists stay sorted.
  HtbBuilder one_hop;
  HtbBuilder two_hop;
  std::vector<std::uint32_t> scratch;
  std::size_t max_degree = 0;
  s.rank.reserve(members.size());
  for (VertexId m : members) {
    scratch.clear();
    for (VertexId v : oriented.u_neighbors(m)) scratch.push_back(opposite_local[v]);
    max_degree = std::max(max_degree, scratch.size());
    one_hop.add_set(scratch);

    scratch.clear();
    for (VertexId y : undirected.neighbors(m)) {
      if (order.higher(m, y) && local[y] != kNoVertex) scratch.push_back(local[y]);
    }
    two_hop.add_set(scratch);
    s.rank.push_back(order.rank[m]);
  }
  s.one_hop = one_hop.finish();
  s.two_hop = two_hop.finish();

  for (VertexId r : root_candidates) {
    if (r >= oriented.u_count() || local[r] == kNoVertex) {
      throw IntegrityError("engine", "root " + std::to_string(r) + " is not a search member");
    }
    if (undirected.list_size(r) + 1 < p) {
      ++s.roots_filtered;
      continue;
    }
    for (VertexId y : undirected.neighbors(r)) {
      if (order.higher(r, y) && local[y] == kNoVertex) {
        throw IntegrityError("engine", "2-hop neighbor " + std::to_string(y) + " of root " +
                                           std::to_string(r) + " lies outside the search members");
      }
    }
    s.roots.push_back(local[r]);
  }
  std::sort(s.roots.begin(), s.roots.end(),
            [&](VertexId a, VertexId b) { return s.rank[a] > s.rank[b]; });

  s.leaf_counts.resize(max_degree + 1);
  for (std::size_t n = 0; n <= max_degree; ++n) {
    bool overflow = false;
    s.leaf_counts[n] = binomial(n, q, &overflow);
    if (overflow && s.leaf_saturates_at == SIZE_MAX) s.leaf_saturates_at = n;
  }
  return s;
}

std::vector<std::vector<Task>> pre_runtime_tasks(const SearchSpace& space, unsigned worker_count,
                                                 std::span<const VertexId> roots) {
  if (worker_count == 0) throw ValidationError("engine", "worker count must be at least 1");
  std::vector<VertexId> ordered(roots.begin(), roots.end());
  if (roots.empty()) {
    ordered = space.roots;
  } else {
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](VertexId a, VertexId b) { return space.rank[a] > space.rank[b]; });
  }
  std::vector<std::vector<Task>> lists(worker_count);
  std::size_t next = 0;
  auto deal = [&](Task t) { lists[next++ % worker_count].push_back(t); };
  for (VertexId root : ordered) {
    if (space.p == 1) {
      deal({root, kNoVertex});
    } else {
      space.two_hop.slice(root).for_each([&](VertexId second) { deal({root, second}); });
    }
  }
  return lists;
}

bool keep_child(std::size_t c_l_size, std::size_t c_r_size, std::uint32_t level, std::uint32_t p,
                std::uint32_t q) {
  const std::size_t still_needed = p > level + 1 ? p - level - 1 : 0;
  return c_r_size >= q && c_l_size >= still_needed;
}

std::size_t batch_size(std::size_t batch_words, HtbSlice c_l, HtbSlice c_r, SearchMode mode) {
  if (mode == SearchMode::SequentialDfs) return 1;
  const std::size_t widest = std::max<std::size_t>({c_l.words(), c_r.words(), 1});
  return std::max<std::size_t>(1, batch_words / widest);
}

std::span<const ExpandedChild> expand_level(const SearchSpace& space, HtbSlice c_l, HtbSlice c_r,
                                            std::span<const VertexId> batch,
                                            std::uint32_t child_level, bool prune,
                                            LevelScratch& scratch, ExpandStats& stats,
                                            AccessLog* log) {
  const std::size_t wl = c_l.words();
  const std::size_t wr = c_r.words();
  ensure_size(scratch.r_idx, batch.size() * wr);
  ensure_size(scratch.r_val, batch.size() * wr);
  ensure_size(scratch.l_idx, batch.size() * wl);
  ensure_size(scratch.l_val, batch.size() * wl);
  scratch.children.clear();

  // Opposite-layer candidates for the whole batch.
  auto t0 = Clock::now();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const VertexId u = batch[i];
    if (log) log->mark(u);
    HtbBuffer out{{scratch.r_idx.data() + i * wr, wr}, {scratch.r_val.data() + i * wr, wr}};
    const HtbSlice r = htb_intersect(c_r, space.one_hop.slice(u), out);
    if (prune && r.cardinality() < space.q) continue;
    scratch.children.push_back({u, {}, r});
  }
  stats.time_1hop += elapsed(t0);

  // Anchor-layer candidates for the survivors.
  t0 = Clock::now();
  for (std::size_t k = 0; k < scratch.children.size(); ++k) {
    ExpandedChild& child = scratch.children[k];
    HtbBuffer out{{scratch.l_idx.data() + k * wl, wl}, {scratch.l_val.data() + k * wl, wl}};
    child.c_l = htb_intersect(c_l, space.two_hop.slice(child.vertex), out);
  }
  stats.time_2hop += elapsed(t0);

  if (prune) {
    std::erase_if(scratch.children, [&](const ExpandedChild& c) {
      return !keep_child(c.c_l.cardinality(), c.c_r.cardinality(), child_level, space.p, space.q);
    });
  }
  ++stats.batches;
  stats.expansions += batch.size();
  return scratch.children;
}

namespace {

// One search worker: owns its frame stack and scratch, reads the shared
// search space only.
class Worker {
 public:
  Worker(const SearchSpace& space, const EngineConfig& cfg)
      : space_(space), cfg_(cfg), frames_(space.p + 1), chain_(space.p, kNoVertex) {}

  void run(const Task& task) {
    const VertexId root = task.root;
    mark(root);
    chain_[0] = root;
    const HtbSlice root_r = space_.one_hop.slice(root);
    const HtbSlice root_l = space_.two_hop.slice(root);
    if (!task.has_second()) {
      if (space_.p == 1) {
        add_leaf(root_r);
      } else {
        explore(1, root_l, root_r);
      }
      return;
    }

    const VertexId second = task.second;
    mark(second);
    chain_[1] = second;
    const std::size_t wr = std::min(root_r.words(), space_.one_hop.slice(second).words());
    ensure_size(task_r_idx_, wr);
    ensure_size(task_r_val_, wr);
    auto t0 = Clock::now();
    const HtbSlice c_r = htb_intersect(root_r, space_.one_hop.slice(second),
                                       {{task_r_idx_.data(), wr}, {task_r_val_.data(), wr}});
    stats_.time_1hop += elapsed(t0);
    ++stats_.batches;
    ++stats_.expansions;
    if (space_.p == 2) {
      add_leaf(c_r);
      return;
    }
    if (cfg_.prune && c_r.cardinality() < space_.q) return;

    const std::size_t wl = std::min(root_l.words(), space_.two_hop.slice(second).words());
    ensure_size(task_l_idx_, wl);
    ensure_size(task_l_val_, wl);
    t0 = Clock::now();
    const HtbSlice c_l = htb_intersect(root_l, space_.two_hop.slice(second),
                                       {{task_l_idx_.data(), wl}, {task_l_val_.data(), wl}});
    stats_.time_2hop += elapsed(t0);
    if (cfg_.prune && !keep_child(c_l.cardinality(), c_r.cardinality(), 1, space_.p, space_.q)) {
      return;
    }
    explore(2, c_l, c_r);
  }

  CountReport finish() {
    report_.time_1hop = stats_.time_1hop;
    report_.time_2hop = stats_.time_2hop;
    report_.batches_executed = stats_.batches;
    report_.expansions = stats_.expansions;
    return std::move(report_);
  }

  void note_stolen() { ++report_.tasks_stolen; }

 private:
  struct Frame {
    HtbSlice c_l;
    HtbSlice c_r;
    std::vector<VertexId> members;
    std::size_t cursor = 0;
    LevelScratch scratch;
    std::span<const ExpandedChild> children;
    std::size_t next_child = 0;
  };

  void mark(VertexId x) {
    if (cfg_.access_log) cfg_.access_log->mark(x);
  }

  void reset(Frame& f, HtbSlice c_l, HtbSlice c_r) {
    f.c_l = c_l;
    f.c_r = c_r;
    f.members.clear();
    c_l.for_each([&](VertexId x) { f.members.push_back(x); });
    f.cursor = 0;
    f.children = {};
    f.next_child = 0;
    if (cfg_.check_nesting) check_nesting(c_l, c_r);
  }

  // Every candidate set must sit inside the root's lists.
  void check_nesting(HtbSlice c_l, HtbSlice c_r) const {
    const VertexId root = chain_[0];
    if (htb_intersect_count(c_l, space_.two_hop.slice(root)) != c_l.cardinality() ||
        htb_intersect_count(c_r, space_.one_hop.slice(root)) != c_r.cardinality()) {
      throw IntegrityError("engine", "candidate set escaped the root's neighborhood");
    }
  }

  // Depth-first over frames, expanding one batch of children at a time.
  void explore(std::uint32_t start_depth, HtbSlice c_l, HtbSlice c_r) {
    reset(frames_[start_depth], c_l, c_r);
    std::uint32_t top = start_depth;
    while (top >= start_depth) {
      Frame& f = frames_[top];
      if (f.next_child < f.children.size()) {
        const ExpandedChild& child = f.children[f.next_child++];
        chain_[top] = child.vertex;
        reset(frames_[top + 1], child.c_l, child.c_r);
        ++top;
        continue;
      }
      if (f.cursor == f.members.size()) {
        --top;
        continue;
      }
      const std::size_t take =
          std::min(batch_size(cfg_.batch_words, f.c_l, f.c_r, cfg_.mode), f.members.size() - f.cursor);
      const std::span<const VertexId> batch(f.members.data() + f.cursor, take);
      f.cursor += take;
      if (top + 1 == space_.p) {
        leaf_batch(f, batch);
      } else {
        f.children = expand_level(space_, f.c_l, f.c_r, batch, top, cfg_.prune, f.scratch, stats_,
                                  cfg_.access_log);
        f.next_child = 0;
      }
    }
  }

  // Children that complete L contribute C(|c_r ∩ N(u')|, q).
  void leaf_batch(const Frame& f, std::span<const VertexId> batch) {
    const auto t0 = Clock::now();
    for (VertexId u : batch) {
      mark(u);
      if (cfg_.enumerate) {
        const std::size_t w = f.c_r.words();
        ensure_size(leaf_idx_, w);
        ensure_size(leaf_val_, w);
        chain_[space_.p - 1] = u;
        add_leaf(htb_intersect(f.c_r, space_.one_hop.slice(u), {{leaf_idx_.data(), w}, {leaf_val_.data(), w}}));
      } else {
        add_count(htb_intersect_count(f.c_r, space_.one_hop.slice(u)));
      }
    }
    stats_.time_1hop += elapsed(t0);
    ++stats_.batches;
    stats_.expansions += batch.size();
  }

  void add_count(std::size_t n) {
    if (n < space_.q) return;
    if (n >= space_.leaf_saturates_at || !checked_add(report_.count, space_.leaf_counts[n])) {
      report_.overflow = true;
    }
  }

  void add_leaf(HtbSlice c_r) {
    const std::size_t n = c_r.cardinality();
    add_count(n);
    if (cfg_.enumerate && n >= space_.q) enumerate_leaf(c_r);
  }

  void enumerate_leaf(HtbSlice c_r) {
    std::vector<VertexId> left;
    for (VertexId x : chain_) left.push_back(space_.anchor_labels[x]);
    std::sort(left.begin(), left.end());
    std::vector<VertexId> right_pool;
    c_r.for_each([&](VertexId y) { right_pool.push_back(space_.opposite_labels[y]); });
    const std::size_t q = space_.q;
    std::vector<std::size_t> pick(q);
    for (std::size_t i = 0; i < q; ++i) pick[i] = i;
    while (true) {
      Biclique b{left, {}};
      for (std::size_t i : pick) b.right.push_back(right_pool[i]);
      report_.bicliques.push_back(std::move(b));
      std::size_t i = q;
      while (i > 0 && pick[i - 1] == right_pool.size() - q + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < q; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  const SearchSpace& space_;
  const EngineConfig& cfg_;
  std::vector<Frame> frames_;
  std::vector<VertexId> chain_;  // chain_[d] is the vertex chosen at depth d + 1
  std::vector<std::uint32_t> task_r_idx_, task_r_val_, task_l_idx_, task_l_val_;
  std::vector<std::uint32_t> leaf_idx_, leaf_val_;
  ExpandStats stats_;
  CountReport report_;
};

}  // namespace

CountReport run_search(const SearchSpace& space, const EngineConfig& cfg,
                       std::span<const VertexId> roots) {
  validate(cfg);
  const auto start = Clock::now();
  auto lists = pre_runtime_tasks(space, cfg.worker_count, roots);

  CountReport total;
  total.worker_count = cfg.worker_count;
  total.p_eff = space.p;
  total.q_eff = space.q;
  total.roots = roots.empty() ? space.roots.size() : roots.size();
  total.roots_filtered = space.roots_filtered;
  for (const auto& l : lists) total.tasks_total += l.size();

  if (cfg.worker_count == 1) {
    Worker worker(space, cfg);
    for (std::size_t i = 0; i < lists[0].size(); ++i) {
      if (cfg.on_task) cfg.on_task(0, static_cast<std::uint32_t>(i));
      worker.run(lists[0][i]);
    }
    total.absorb(worker.finish());
  } else {
    ProgressBoard board(std::move(lists));
    std::vector<CountReport> partial(cfg.worker_count);
    std::vector<std::exception_ptr> errors(cfg.worker_count);
    std::vector<std::thread> threads;
    threads.reserve(cfg.worker_count);
    for (unsigned id = 0; id < cfg.worker_count; ++id) {
      threads.emplace_back([&, id] {
        try {
          Worker worker(space, cfg);
          while (true) {
            auto claimed = board.claim_own(id);
            bool stolen = false;
            if (!claimed && cfg.work_stealing) {
              claimed = board.steal(id);
              stolen = true;
            }
            if (!claimed) break;
            if (stolen) worker.note_stolen();
            if (cfg.on_task) cfg.on_task(claimed->owner, claimed->position);
            worker.run(claimed->task);
          }
          partial[id] = worker.finish();
        } catch (...) {
          errors[id] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const auto& r : partial) total.absorb(r);
  }
  std::sort(total.bicliques.begin(), total.bicliques.end());
  total.wall_time = elapsed(start);
  return total;
}

CountReport count_bicliques(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q,
                            const EngineConfig& cfg) {
  validate(cfg);
  const AnchorChoice choice = select_anchor_layer(g, p, q, cfg.anchor);
  BipartiteGraph transposed;
  const BipartiteGraph* oriented = &g;
  if (choice.layer == Layer::V) {
    transposed = transpose(g);
    oriented = &transposed;
  }
  const SearchSpace space = build_search_space(*oriented, choice.p_eff, choice.q_eff);
  CountReport report = run_search(space, cfg);
  report.anchor = choice.layer;
  if (choice.layer == Layer::V) {
    for (Biclique& b : report.bicliques) std::swap(b.left, b.right);
    std::sort(report.bicliques.begin(), report.bicliques.end());
  }
  return report;
}

}  // namespace gbc
