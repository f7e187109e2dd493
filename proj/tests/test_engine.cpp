#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "gbc/engine.hpp"
#include "gbc/error.hpp"
#include "gbc/oracle.hpp"
#include "support.hpp"

using namespace gbc;

namespace {

std::vector<std::uint32_t> ids(HtbSlice s) { return s.decode(); }

EngineConfig config(unsigned workers, SearchMode mode = SearchMode::Hybrid) {
  EngineConfig cfg;
  cfg.worker_count = workers;
  cfg.mode = mode;
  return cfg;
}

std::vector<std::vector<Task>> numbered_tasks(unsigned workers, std::size_t total) {
  std::vector<std::vector<Task>> lists(workers);
  for (std::size_t i = 0; i < total; ++i) lists[i % workers].push_back({static_cast<VertexId>(i), kNoVertex});
  return lists;
}

}  // namespace

TEST_CASE("reconstruction graph, (3,2)") {
  const auto g = test::reconstruction_graph();
  for (unsigned w : {1u, 2u, 3u}) {
    for (auto mode : {SearchMode::SequentialDfs, SearchMode::Hybrid}) {
      auto cfg = config(w, mode);
      cfg.enumerate = true;
      cfg.check_nesting = true;
      const auto r = count_bicliques(g, 3, 2, cfg);
      CHECK(r.count == 2);
      CHECK(r.bicliques == std::vector<Biclique>{{{0, 1, 2}, {1, 2}}, {{0, 1, 3}, {0, 2}}});
    }
  }
}

TEST_CASE("both bicliques are found under root u1") {
  const auto space = build_search_space(test::reconstruction_graph(), 3, 2);
  auto cfg = config(1);
  const std::vector<VertexId> u1{0};
  CHECK(run_search(space, cfg, u1).count == 2);
  const std::vector<VertexId> rest{1, 2, 3};
  CHECK(run_search(space, cfg, rest).count == 0);
}

TEST_CASE("single edges") {
  const auto g = test::random_graph(20, 20, 0.3, 1);
  CHECK(count_bicliques(g, 1, 1, config(1)).count == g.edge_count());
}

TEST_CASE("first expansion from u1") {
  const auto space = build_search_space(test::reconstruction_graph(), 3, 2);
  CHECK(ids(space.one_hop.slice(0)) == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(ids(space.two_hop.slice(0)) == std::vector<std::uint32_t>{1, 2, 3});
  LevelScratch scratch;
  ExpandStats stats;
  const std::vector<VertexId> batch{1};
  const auto kids = expand_level(space, space.two_hop.slice(0), space.one_hop.slice(0), batch, 1, true,
                                 scratch, stats);
  REQUIRE(kids.size() == 1);
  CHECK(ids(kids[0].c_r) == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(ids(kids[0].c_l) == std::vector<std::uint32_t>{2, 3});
  CHECK(stats.batches == 1);
  CHECK(stats.expansions == 1);

  // Leaf u1 -> u2 -> u3 keeps {v1, v2}.
  LevelScratch leaf_scratch;
  const std::vector<VertexId> third{2};
  const auto leaf = expand_level(space, kids[0].c_l, kids[0].c_r, third, 2, true, leaf_scratch, stats);
  REQUIRE(leaf.size() == 1);
  CHECK(ids(leaf[0].c_r) == std::vector<std::uint32_t>{1, 2});
  CHECK(keep_child(0, 2, 2, 3, 2));
}

TEST_CASE("keep rule") {
  CHECK(!keep_child(5, 0, 1, 3, 1));
  CHECK(!keep_child(0, 4, 1, 3, 2));  // still needs one more anchor vertex
  CHECK(keep_child(1, 4, 1, 3, 2));
  CHECK(keep_child(0, 2, 2, 3, 2));
  CHECK(!keep_child(0, 1, 2, 3, 2));
}

TEST_CASE("batched expansion equals one at a time") {
  for (int s = 0; s < 25; ++s) {
    const auto g = test::random_graph(30, 25, 0.3, 300 + s);
    const auto space = build_search_space(g, 3, 2);
    for (VertexId root : space.roots) {
      const HtbSlice cl = space.two_hop.slice(root);
      const HtbSlice cr = space.one_hop.slice(root);
      const auto members = cl.decode();
      for (bool prune : {false, true}) {
        LevelScratch all;
        ExpandStats st;
        const auto batched = expand_level(space, cl, cr, members, 1, prune, all, st);
        std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> got, want;
        for (const auto& k : batched) got.emplace_back(ids(k.c_l), ids(k.c_r));
        for (VertexId m : members) {
          LevelScratch one;
          const std::vector<VertexId> b{m};
          for (const auto& k : expand_level(space, cl, cr, b, 1, prune, one, st)) {
            want.emplace_back(ids(k.c_l), ids(k.c_r));
          }
        }
        CHECK(got == want);
        CHECK(st.batches == members.size() + 1);
      }
    }
  }
}

TEST_CASE("batch size") {
  const std::vector<std::vector<std::uint32_t>> sets{{0, 40, 80}, {1}};
  const Htb h = htb_build(sets);
  CHECK(batch_size(12, h.slice(0), h.slice(1), SearchMode::Hybrid) == 4);
  CHECK(batch_size(2, h.slice(0), h.slice(1), SearchMode::Hybrid) == 1);
  CHECK(batch_size(4096, h.slice(0), h.slice(1), SearchMode::SequentialDfs) == 1);
}

TEST_CASE("task lists") {
  const auto space = build_search_space(test::reconstruction_graph(), 3, 2);
  const auto two = pre_runtime_tasks(space, 2);
  const std::vector<Task> w0{{0, 1}, {0, 3}, {1, 3}};
  const std::vector<Task> w1{{0, 2}, {1, 2}, {2, 3}};
  CHECK(two[0] == w0);
  CHECK(two[1] == w1);
  const auto one = pre_runtime_tasks(space, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].size() == 6);

  for (int s = 0; s < 10; ++s) {
    const auto sp = build_search_space(test::random_graph(40, 30, 0.2, s), 3, 2);
    std::set<std::pair<VertexId, VertexId>> expect;
    for (VertexId r : sp.roots)
      for (auto y : sp.two_hop.slice(r).decode()) expect.insert({r, y});
    for (unsigned w : {1u, 3u, 8u}) {
      std::multiset<std::pair<VertexId, VertexId>> seen;
      for (const auto& l : pre_runtime_tasks(sp, w))
        for (const Task& t : l) seen.insert({t.root, t.second});
      CHECK(std::set<std::pair<VertexId, VertexId>>(seen.begin(), seen.end()) == expect);
      CHECK(seen.size() == expect.size());
    }
  }
  const auto p1 = build_search_space(test::reconstruction_graph(), 1, 2);
  CHECK(pre_runtime_tasks(p1, 1)[0].size() == 4);
  CHECK(!pre_runtime_tasks(p1, 1)[0][0].has_second());
}

TEST_CASE("board: drained board ends the search") {
  ProgressBoard board(numbered_tasks(3, 0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(board.progress(i) == ProgressBoard::kDone);
  CHECK(!board.claim_own(0));
  CHECK(!board.steal(1));
}

TEST_CASE("board: idle worker takes the victim's next task") {
  ProgressBoard board(numbered_tasks(2, 7));  // worker 0: 0,2,4,6; worker 1: 1,3,5
  auto a = board.claim_own(1);
  REQUIRE(a);
  CHECK(a->task.root == 1);
  // Worker 1 drains its own list...
  CHECK(board.claim_own(1)->task.root == 3);
  CHECK(board.claim_own(1)->task.root == 5);
  CHECK(!board.claim_own(1));
  CHECK(board.progress(1) == ProgressBoard::kDone);
  // ...while worker 0 has done one.
  CHECK(board.claim_own(0)->task.root == 0);
  auto stolen = board.steal(1);
  REQUIRE(stolen);
  CHECK(stolen->owner == 0);
  CHECK(stolen->position == 1);
  CHECK(stolen->task.root == 2);
  CHECK(board.progress(0) == 2);
  CHECK(board.claim_own(0)->task.root == 4);
  CHECK(board.steal(1)->task.root == 6);
  CHECK(board.progress(0) == 4);
  CHECK(!board.steal(1));  // finds the list exhausted and retires it
  CHECK(board.progress(0) == ProgressBoard::kDone);
  CHECK(!board.claim_own(0));
}

TEST_CASE("board stress: every task exactly once") {
  constexpr unsigned kWorkers = 8;
  constexpr std::size_t kTasks = 10000;
  // Skewed lists so that stealing really happens.
  std::vector<std::vector<Task>> lists(kWorkers);
  for (std::size_t i = 0; i < kTasks; ++i) {
    lists[i < kTasks / 2 ? 0 : i % kWorkers].push_back({static_cast<VertexId>(i), kNoVertex});
  }
  ProgressBoard board(lists);
  std::vector<std::atomic<int>> tally(kTasks);
  std::atomic<std::size_t> stolen{0};
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < kWorkers; ++w) {
    threads.emplace_back([&, w] {
      while (auto t = board.claim_own(w)) tally[t->task.root].fetch_add(1);
      while (auto t = board.steal(w)) {
        tally[t->task.root].fetch_add(1);
        stolen.fetch_add(1);
      }
    });
  }
  for (auto& t : threads) t.join();
  std::size_t once = 0;
  for (auto& c : tally) once += c.load() == 1;
  CHECK(once == kTasks);
  for (unsigned w = 0; w < kWorkers; ++w) CHECK(board.progress(w) == ProgressBoard::kDone);
  MESSAGE("stolen: " << stolen.load());
}

TEST_CASE("engine tally: each task consumed once") {
  const auto g = test::random_graph(60, 50, 0.25, 123);
  const auto space = build_search_space(g, 3, 3);
  const auto lists = pre_runtime_tasks(space, 4);
  std::vector<std::vector<std::atomic<int>>> tally;
  for (const auto& l : lists) tally.emplace_back(l.size());
  auto cfg = config(4);
  cfg.on_task = [&](std::uint32_t owner, std::uint32_t pos) { tally[owner][pos].fetch_add(1); };
  const auto r = run_search(space, cfg);
  for (auto& l : tally)
    for (auto& c : l) CHECK(c.load() == 1);
  std::size_t total = 0;
  for (const auto& l : lists) total += l.size();
  CHECK(r.tasks_total == total);
  CHECK(r.count == oracle::brute_force_count(g, 3, 3));
}

TEST_CASE("engine agrees with the oracle") {
  for (int i = 0; i < 120; ++i) {
    const auto g = test::corpus_graph(i);
    for (std::uint32_t p = 1; p <= 4; ++p) {
      for (std::uint32_t q = 1; q <= 4; ++q) {
        const Count expect = oracle::brute_force_count(g, p, q);
        auto cfg = config(1 + i % 3, i % 2 ? SearchMode::Hybrid : SearchMode::SequentialDfs);
        cfg.batch_words = 1 + i * 7;
        cfg.check_nesting = i % 10 == 0;
        CHECK(count_bicliques(g, p, q, cfg).count == expect);
        cfg.anchor = AnchorMode::V;
        CHECK(count_bicliques(g, p, q, cfg).count == expect);
      }
    }
  }
}

TEST_CASE("pruning never changes the count") {
  for (int i = 0; i < 40; ++i) {
    const auto g = test::random_graph(15, 15, 0.4, 700 + i);
    for (std::uint32_t p = 2; p <= 4; ++p) {
      for (std::uint32_t q = 1; q <= 3; ++q) {
        auto pruned = config(1);
        auto raw = config(1);
        raw.prune = false;
        raw.check_nesting = true;
        CHECK(count_bicliques(g, p, q, pruned).count == count_bicliques(g, p, q, raw).count);
      }
    }
  }
}

TEST_CASE("enumeration matches the oracle list") {
  for (int i = 0; i < 20; ++i) {
    const auto g = test::random_graph(12, 10, 0.45, 50 + i);
    for (auto anchor : {AnchorMode::U, AnchorMode::V}) {
      auto cfg = config(2);
      cfg.enumerate = true;
      cfg.anchor = anchor;
      CHECK(count_bicliques(g, 3, 2, cfg).bicliques == oracle::enumerate_bicliques(g, 3, 2));
    }
  }
}

TEST_CASE("large counts stay exact in 128 bits") {
  // K_{60,60}, (2,30): C(60,2) * C(60,30) needs more than 64 bits.
  std::vector<Edge> edges;
  for (VertexId u = 0; u < 60; ++u)
    for (VertexId v = 0; v < 60; ++v) edges.push_back({u, v});
  const auto g = BipartiteGraph::from_edges(60, 60, edges);
  const auto r = count_bicliques(g, 2, 30, config(1));
  CHECK(r.count == Count{1770} * binomial(60, 30));
  CHECK(!r.overflow);
  CHECK(to_string(r.count) == "209328309369804720480");
}

TEST_CASE("configuration is validated") {
  EngineConfig cfg;
  cfg.worker_count = 0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg.worker_count = 1;
  cfg.batch_words = 0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  CHECK_THROWS_AS(count_bicliques(test::reconstruction_graph(), 0, 1, config(1)), ValidationError);
}

TEST_CASE("access log sees only what the roots reach") {
  const auto g = test::reconstruction_graph();
  const auto space = build_search_space(g, 3, 2);
  AccessLog log(space.anchor_count());
  auto cfg = config(1);
  cfg.access_log = &log;
  run_search(space, cfg);
  CHECK(log.touched() == std::vector<VertexId>{0, 1, 2, 3});
}
