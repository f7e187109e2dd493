#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gbc/graph.hpp"
#include "gbc/htb.hpp"

namespace gbc {

// Sparse view of the adjacency matrix of one layer against the other, cut
// into row blocks of `block_bits` consecutive column positions. Columns are
// vertices of the layer being reordered; each column sits at a position that
// swap_columns() can exchange. Only nonzero block masks are stored.
class BlockMatrix {
 public:
  BlockMatrix(const BipartiteGraph& g, Layer column_layer, unsigned block_bits = kHtbWordBits);

  // rows[r] lists the columns set in row r; columns start at position = id.
  BlockMatrix(std::vector<std::vector<VertexId>> rows, VertexId column_count,
              unsigned block_bits = kHtbWordBits);

  VertexId row_count() const noexcept { return static_cast<VertexId>(row_cols_.size()); }
  VertexId column_count() const noexcept { return static_cast<VertexId>(position_.size()); }
  unsigned block_bits() const noexcept { return block_bits_; }

  VertexId position(VertexId column) const { return position_[column]; }
  VertexId column_at(VertexId pos) const { return column_at_[pos]; }
  std::span<const VertexId> positions() const { return position_; }

  std::span<const VertexId> column_rows(VertexId column) const { return col_rows_[column]; }
  std::span<const VertexId> row_columns(VertexId row) const { return row_cols_[row]; }

  // Occupancy of block `block` in `row`; 0 when not stored.
  std::uint32_t mask(VertexId row, std::uint32_t block) const;
  std::span<const std::pair<std::uint32_t, std::uint32_t>> row_blocks(VertexId row) const {
    return blocks_[row];
  }

  // Running totals maintained across swaps.
  std::size_t one_blocks() const noexcept { return one_blocks_; }
  std::span<const std::uint32_t> one_blocks_by_column() const { return one_by_column_; }

  // 1-blocks removed minus 1-blocks created by exchanging the positions of
  // columns a and b (x_m + x_n - y_m - y_n).
  std::int64_t swap_profit(VertexId a, VertexId b) const;

  void swap_columns(VertexId a, VertexId b);

 private:
  void build(unsigned block_bits);
  void set_mask(VertexId row, std::uint32_t block, std::uint32_t value);
  void attribute(VertexId row, std::uint32_t block, int delta);

  unsigned block_bits_ = kHtbWordBits;
  std::vector<std::vector<VertexId>> row_cols_;
  std::vector<std::vector<VertexId>> col_rows_;
  std::vector<VertexId> position_;
  std::vector<VertexId> column_at_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> blocks_;
  std::size_t one_blocks_ = 0;
  std::vector<std::uint32_t> one_by_column_;
};

// Full rescans, independent of the running totals.
std::size_t count_one_blocks(const BlockMatrix& m);
std::vector<std::uint32_t> count_one_blocks_per_vertex(const BlockMatrix& m);

// Vertices by descending degree, ties by ascending id. Returns the new
// position of every vertex.
std::vector<VertexId> degree_order(const BipartiteGraph& g, Layer layer);

struct BorderStep {
  VertexId most_one_blocks;          // v_m
  std::vector<VertexId> candidates;  // CandV
  VertexId partner;                  // v_n
  std::int64_t profit;
};

// One greedy iteration: pick the column with most 1-blocks, gather the
// columns sharing the fewest rows with it, and swap with the best partner
// of non-negative profit. Returns nullopt, leaving `m` untouched, when no
// column owns a 1-block or every candidate has negative profit.
std::optional<BorderStep> border_step(BlockMatrix& m);

struct ReorderResult {
  std::vector<VertexId> permutation;            // new position per vertex
  std::vector<std::size_t> one_block_history;  // initial count, then after each swap
};

ReorderResult border_reorder(BlockMatrix m, std::size_t iterations);
ReorderResult border_reorder(const BipartiteGraph& g, Layer layer, std::size_t iterations);

enum class ReorderMode : std::uint8_t { None, Degree, Border };

struct GraphReorder {
  BipartiteGraph graph;
  std::vector<VertexId> perm_u;  // old id -> new id
  std::vector<VertexId> perm_v;
  std::vector<std::size_t> history_u;  // Border 1-block history, U as columns
  std::vector<std::size_t> history_v;
};

// Reorders both layers, U first. Border starts from the degree order.
GraphReorder reorder_graph(const BipartiteGraph& g, ReorderMode mode, std::size_t border_iterations);

}  // namespace gbc
