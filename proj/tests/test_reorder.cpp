#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>

#include "gbc/htb.hpp"
#include "gbc/reorder.hpp"
#include "support.hpp"

using namespace gbc;

namespace {

std::vector<VertexId> positions(const BlockMatrix& m) { return {m.positions().begin(), m.positions().end()}; }

// Rows of the illustrated 4x12 matrix, 4-bit blocks. Column c is v_{c+1}.
std::vector<std::vector<VertexId>> illustrated_rows() {
  return {{1, 4, 5, 6, 7, 11}, {3, 4, 10, 11}, {1, 2, 4, 5, 6, 7, 8, 9}, {0, 1, 4, 8, 9}};
}

std::size_t total_words(const BipartiteGraph& g, Layer layer) {
  std::vector<std::vector<std::uint32_t>> sets;
  for (VertexId x = 0; x < g.count(layer); ++x) {
    auto n = g.neighbors(layer, x);
    sets.emplace_back(n.begin(), n.end());
  }
  return htb_build(sets).word_count();
}

}  // namespace

TEST_CASE("masks and totals") {
  const auto g = test::random_graph(40, 90, 0.15, 3);
  const BlockMatrix m(g, Layer::V);
  std::size_t pop = 0;
  std::size_t ones = 0;
  for (VertexId r = 0; r < m.row_count(); ++r) {
    for (auto [block, mask] : m.row_blocks(r)) {
      CHECK(mask != 0);
      CHECK(m.mask(r, block) == mask);
      pop += std::popcount(mask);
      ones += std::popcount(mask) == 1;
    }
  }
  CHECK(pop == g.edge_count());
  CHECK(count_one_blocks(m) == ones);
  CHECK(m.one_blocks() == ones);
  CHECK(ones == test::recount_one_blocks(test::rows_of(g, Layer::V), positions(m), 32));
}

TEST_CASE("single bits and shared blocks") {
  CHECK(count_one_blocks(BlockMatrix({{5}}, 40)) == 1);
  CHECK(count_one_blocks(BlockMatrix({{3, 17}}, 40)) == 0);
  CHECK(count_one_blocks(BlockMatrix({{3, 33}}, 40)) == 2);
  const auto per = count_one_blocks_per_vertex(BlockMatrix({{3, 33}, {3}}, 40));
  CHECK(per[3] == 2);
  CHECK(per[33] == 1);
}

TEST_CASE("degree order") {
  const auto g = test::reconstruction_graph();
  // u2, u4, u1, u3 by degrees 4, 4, 3, 3.
  CHECK(degree_order(g, Layer::U) == std::vector<VertexId>{2, 0, 3, 1});

  const auto regular = BipartiteGraph::from_edges(3, 3, {{0, 0}, {1, 1}, {2, 2}});
  CHECK(degree_order(regular, Layer::U) == identity_permutation(3));

  const auto r = test::random_graph(30, 30, 0.3, 8);
  const auto perm = degree_order(r, Layer::V);
  const auto inv = invert_permutation(perm);
  for (std::size_t i = 1; i < inv.size(); ++i) CHECK(r.degree(Layer::V, inv[i - 1]) >= r.degree(Layer::V, inv[i]));
}

TEST_CASE("swap profit") {
  BlockMatrix m({{0, 1}, {2, 40}}, 64);
  CHECK(m.swap_profit(1, 1) == 0);
  CHECK(m.swap_profit(0, 2) == 0);  // same block

  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    const auto g = test::random_graph(25, 120, 0.05 + 0.01 * t, 500 + t);
    BlockMatrix bm(g, Layer::V);
    const auto rows = test::rows_of(g, Layer::V);
    std::uniform_int_distribution<VertexId> col(0, bm.column_count() - 1);
    for (int k = 0; k < 10; ++k) {
      const VertexId a = col(rng), b = col(rng);
      const std::size_t before = test::recount_one_blocks(rows, positions(bm), 32);
      const auto profit = bm.swap_profit(a, b);
      bm.swap_columns(a, b);
      const std::size_t after = test::recount_one_blocks(rows, positions(bm), 32);
      CHECK(profit == static_cast<std::int64_t>(before) - static_cast<std::int64_t>(after));
      CHECK(bm.one_blocks() == after);
      const auto per = count_one_blocks_per_vertex(bm);
      CHECK(std::equal(per.begin(), per.end(), bm.one_blocks_by_column().begin()));
    }
  }
}

TEST_CASE("illustrated Border step") {
  const auto rows = illustrated_rows();
  BlockMatrix m(rows, 12, 4);
  CHECK(m.one_blocks() == 5);
  CHECK(m.one_blocks_by_column()[4] == 2);  // v5 leads
  CHECK(m.swap_profit(4, 0) == 3);
  CHECK(m.swap_profit(4, 2) == 4);
  CHECK(m.swap_profit(4, 3) == 2);
  CHECK(m.swap_profit(4, 10) == 2);
  const auto step = border_step(m);
  REQUIRE(step.has_value());
  CHECK(step->most_one_blocks == 4);
  CHECK(step->candidates == std::vector<VertexId>{0, 2, 3, 10});
  CHECK(step->partner == 2);
  CHECK(step->profit == 4);
  CHECK(m.position(4) == 2);
  CHECK(m.position(2) == 4);
  CHECK(m.one_blocks() == 1);
  CHECK(m.one_blocks() == test::recount_one_blocks(rows, positions(m), 4));
}

TEST_CASE("no iterations leaves the order alone") {
  const auto g = test::random_graph(20, 70, 0.1, 4);
  const auto r = border_reorder(g, Layer::V, 0);
  CHECK(r.permutation == identity_permutation(70));
  CHECK(r.one_block_history == std::vector<std::size_t>{BlockMatrix(g, Layer::V).one_blocks()});
}

TEST_CASE("Border history and recount on random graphs") {
  for (int s = 0; s < 20; ++s) {
    const auto g = test::random_graph(30, 150, 0.04, 900 + s);
    const auto r = border_reorder(g, Layer::V, 10);
    check_permutation(r.permutation, 150);
    CHECK(std::is_sorted(r.one_block_history.rbegin(), r.one_block_history.rend()));
    const auto moved = relabel(g, identity_permutation(30), r.permutation);
    CHECK(r.one_block_history.back() == count_one_blocks(BlockMatrix(moved, Layer::V)));
  }
}

TEST_CASE("whole-graph reorder composes permutations") {
  const auto g = test::random_graph(60, 80, 0.08, 31);
  for (auto mode : {ReorderMode::None, ReorderMode::Degree, ReorderMode::Border}) {
    const auto r = reorder_graph(g, mode, 50);
    CHECK(r.graph == relabel(g, r.perm_u, r.perm_v));
  }
  const auto border = reorder_graph(g, ReorderMode::Border, 50);
  const auto degree = reorder_graph(g, ReorderMode::Degree, 0);
  CHECK(border.history_u.front() == count_one_blocks(BlockMatrix(degree.graph, Layer::U)));
  CHECK(std::is_sorted(border.history_u.rbegin(), border.history_u.rend()));
  CHECK(std::is_sorted(border.history_v.rbegin(), border.history_v.rend()));
  CHECK(total_words(border.graph, Layer::U) > 0);
}
