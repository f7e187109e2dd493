#include "gbc/reorder.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "gbc/error.hpp"

namespace gbc {

namespace {

int is_one(int popcount) { return popcount == 1 ? 1 : 0; }

// Change in 1-block count contributed by one block losing a bit (out) and
// another gaining one (in), written as removed minus created.
int move_profit(std::uint32_t source_mask, std::uint32_t target_mask) {
  const int ps = __builtin_popcount(source_mask);
  const int pt = __builtin_popcount(target_mask);
  return is_one(ps) - is_one(ps - 1) + is_one(pt) - is_one(pt + 1);
}

// Calls fn(row) for rows of `a` that are not rows of `b` (both sorted).
template <class Fn>
void for_each_difference(std::span<const VertexId> a, std::span<const VertexId> b, Fn&& fn) {
  std::size_t j = 0;
  for (VertexId r : a) {
    while (j < b.size() && b[j] < r) ++j;
    if (j < b.size() && b[j] == r) continue;
    fn(r);
  }
}

}  // namespace

BlockMatrix::BlockMatrix(const BipartiteGraph& g, Layer column_layer, unsigned block_bits) {
  const Layer row_layer = opposite(column_layer);
  row_cols_.resize(g.count(row_layer));
  for (VertexId r = 0; r < g.count(row_layer); ++r) {
    auto cols = g.neighbors(row_layer, r);
    row_cols_[r].assign(cols.begin(), cols.end());
  }
  col_rows_.resize(g.count(column_layer));
  for (VertexId c = 0; c < g.count(column_layer); ++c) {
    auto rows = g.neighbors(column_layer, c);
    col_rows_[c].assign(rows.begin(), rows.end());
  }
  build(block_bits);
}

BlockMatrix::BlockMatrix(std::vector<std::vector<VertexId>> rows, VertexId column_count,
                         unsigned block_bits)
    : row_cols_(std::move(rows)) {
  col_rows_.resize(column_count);
  for (VertexId r = 0; r < row_cols_.size(); ++r) {
    auto& cols = row_cols_[r];
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (VertexId c : cols) {
      if (c >= column_count) throw ValidationError("reorder", "column id out of range");
      col_rows_[c].push_back(r);
    }
  }
  build(block_bits);
}

void BlockMatrix::build(unsigned block_bits) {
  if (block_bits == 0 || block_bits > 32) {
    throw ValidationError("reorder", "block width must be in [1, 32]");
  }
  block_bits_ = block_bits;
  position_ = identity_permutation(col_rows_.size());
  column_at_ = position_;
  one_by_column_.assign(col_rows_.size(), 0);
  blocks_.assign(row_cols_.size(), {});
  for (VertexId r = 0; r < row_cols_.size(); ++r) {
    auto& row = blocks_[r];
    for (VertexId c : row_cols_[r]) {
      const std::uint32_t block = c / block_bits_;
      const std::uint32_t bit = 1u << (c % block_bits_);
      if (!row.empty() && row.back().first == block) {
        row.back().second |= bit;
      } else {
        row.emplace_back(block, bit);
      }
    }
    for (const auto& [block, m] : row) {
      if (__builtin_popcount(m) == 1) attribute(r, block, +1);
    }
  }
}

std::uint32_t BlockMatrix::mask(VertexId row, std::uint32_t block) const {
  const auto& r = blocks_[row];
  auto it = std::lower_bound(r.begin(), r.end(), block,
                             [](const auto& entry, std::uint32_t b) { return entry.first < b; });
  return it != r.end() && it->first == block ? it->second : 0;
}

void BlockMatrix::set_mask(VertexId row, std::uint32_t block, std::uint32_t value) {
  auto& r = blocks_[row];
  auto it = std::lower_bound(r.begin(), r.end(), block,
                             [](const auto& entry, std::uint32_t b) { return entry.first < b; });
  const bool present = it != r.end() && it->first == block;
  if (value == 0) {
    if (present) r.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    r.insert(it, {block, value});
  }
}

// Adds `delta` to the 1-block tallies if (row, block) is currently a 1-block.
void BlockMatrix::attribute(VertexId row, std::uint32_t block, int delta) {
  const std::uint32_t m = mask(row, block);
  if (__builtin_popcount(m) != 1) return;
  const VertexId pos = block * block_bits_ + static_cast<VertexId>(__builtin_ctz(m));
  one_by_column_[column_at_[pos]] += delta;
  one_blocks_ += delta;
}

std::int64_t BlockMatrix::swap_profit(VertexId a, VertexId b) const {
  const std::uint32_t block_a = position_[a] / block_bits_;
  const std::uint32_t block_b = position_[b] / block_bits_;
  if (a == b || block_a == block_b) return 0;
  std::int64_t profit = 0;
  // Rows holding only a: the bit leaves block_a and lands in block_b.
  for_each_difference(col_rows_[a], col_rows_[b], [&](VertexId r) {
    profit += move_profit(mask(r, block_a), mask(r, block_b));
  });
  for_each_difference(col_rows_[b], col_rows_[a], [&](VertexId r) {
    profit += move_profit(mask(r, block_b), mask(r, block_a));
  });
  return profit;
}

void BlockMatrix::swap_columns(VertexId a, VertexId b) {
  if (a == b) return;
  const VertexId pa = position_[a];
  const VertexId pb = position_[b];
  const std::uint32_t block_a = pa / block_bits_;
  const std::uint32_t block_b = pb / block_bits_;

  // Rows holding both columns keep their masks, but the bits change owner, so
  // every row of either column is re-attributed.
  std::vector<std::pair<VertexId, std::uint32_t>> touched;
  for (VertexId c : {a, b}) {
    for (VertexId r : col_rows_[c]) {
      touched.emplace_back(r, block_a);
      touched.emplace_back(r, block_b);
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  for (const auto& [r, block] : touched) attribute(r, block, -1);

  const std::uint32_t bit_a = 1u << (pa % block_bits_);
  const std::uint32_t bit_b = 1u << (pb % block_bits_);
  auto move_bit = [&](VertexId r, std::uint32_t from_block, std::uint32_t from_bit,
                      std::uint32_t to_block, std::uint32_t to_bit) {
    set_mask(r, from_block, mask(r, from_block) & ~from_bit);
    set_mask(r, to_block, mask(r, to_block) | to_bit);
  };
  for_each_difference(col_rows_[a], col_rows_[b],
                      [&](VertexId r) { move_bit(r, block_a, bit_a, block_b, bit_b); });
  for_each_difference(col_rows_[b], col_rows_[a],
                      [&](VertexId r) { move_bit(r, block_b, bit_b, block_a, bit_a); });
  std::swap(position_[a], position_[b]);
  column_at_[pa] = b;
  column_at_[pb] = a;

  for (const auto& [r, block] : touched) attribute(r, block, +1);
}

std::size_t count_one_blocks(const BlockMatrix& m) {
  std::size_t total = 0;
  for (VertexId r = 0; r < m.row_count(); ++r) {
    for (const auto& [block, mask] : m.row_blocks(r)) total += __builtin_popcount(mask) == 1;
  }
  return total;
}

std::vector<std::uint32_t> count_one_blocks_per_vertex(const BlockMatrix& m) {
  std::vector<std::uint32_t> per_column(m.column_count(), 0);
  for (VertexId r = 0; r < m.row_count(); ++r) {
    for (const auto& [block, mask] : m.row_blocks(r)) {
      if (__builtin_popcount(mask) != 1) continue;
      const VertexId pos = block * m.block_bits() + static_cast<VertexId>(__builtin_ctz(mask));
      ++per_column[m.column_at(pos)];
    }
  }
  return per_column;
}

std::vector<VertexId> degree_order(const BipartiteGraph& g, Layer layer) {
  std::vector<VertexId> order = identity_permutation(g.count(layer));
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    return g.degree(layer, a) > g.degree(layer, b);
  });
  return invert_permutation(order);
}

std::optional<BorderStep> border_step(BlockMatrix& m) {
  const auto per_column = m.one_blocks_by_column();
  if (per_column.empty()) return std::nullopt;
  const VertexId vm = static_cast<VertexId>(
      std::max_element(per_column.begin(), per_column.end()) - per_column.begin());
  if (per_column[vm] == 0) return std::nullopt;

  // Row overlap of every column with v_m: the product of v_m's column with M.
  std::vector<std::uint32_t> overlap(m.column_count(), 0);
  for (VertexId r : m.column_rows(vm)) {
    for (VertexId c : m.row_columns(r)) ++overlap[c];
  }
  std::uint32_t fewest = std::numeric_limits<std::uint32_t>::max();
  for (VertexId c = 0; c < m.column_count(); ++c) {
    if (c != vm) fewest = std::min(fewest, overlap[c]);
  }

  BorderStep step{vm, {}, vm, 0};
  bool found = false;
  for (VertexId c = 0; c < m.column_count(); ++c) {
    if (c == vm || overlap[c] != fewest) continue;
    step.candidates.push_back(c);
    const std::int64_t profit = m.swap_profit(vm, c);
    // max_profit starts at 0; strict improvement keeps the smallest id on ties.
    if (profit >= 0 && (!found || profit > step.profit)) {
      step.partner = c;
      step.profit = profit;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  m.swap_columns(vm, step.partner);
  return step;
}

ReorderResult border_reorder(BlockMatrix m, std::size_t iterations) {
  ReorderResult result;
  result.one_block_history.push_back(m.one_blocks());
  for (std::size_t i = 0; i < iterations; ++i) {
    if (!border_step(m)) break;
    result.one_block_history.push_back(m.one_blocks());
  }
  result.permutation.assign(m.positions().begin(), m.positions().end());
  return result;
}

ReorderResult border_reorder(const BipartiteGraph& g, Layer layer, std::size_t iterations) {
  return border_reorder(BlockMatrix(g, layer), iterations);
}

GraphReorder reorder_graph(const BipartiteGraph& g, ReorderMode mode, std::size_t border_iterations) {
  GraphReorder r;
  if (mode == ReorderMode::None) {
    r.graph = g;
    r.perm_u = identity_permutation(g.u_count());
    r.perm_v = identity_permutation(g.v_count());
    return r;
  }
  r.perm_u = degree_order(g, Layer::U);
  r.perm_v = degree_order(g, Layer::V);
  r.graph = relabel(g, r.perm_u, r.perm_v);
  if (mode == ReorderMode::Degree) return r;

  auto compose = [](std::vector<VertexId>& first, const std::vector<VertexId>& then) {
    for (VertexId& x : first) x = then[x];
  };
  ReorderResult ru = border_reorder(r.graph, Layer::U, border_iterations);
  r.graph = relabel(r.graph, ru.permutation, identity_permutation(g.v_count()));
  compose(r.perm_u, ru.permutation);
  r.history_u = std::move(ru.one_block_history);

  ReorderResult rv = border_reorder(r.graph, Layer::V, border_iterations);
  r.graph = relabel(r.graph, identity_permutation(g.u_count()), rv.permutation);
  compose(r.perm_v, rv.permutation);
  r.history_v = std::move(rv.one_block_history);
  return r;
}

}  // namespace gbc
