#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace gbc {

using VertexId = std::uint32_t;

enum class Layer : std::uint8_t { U, V };

constexpr Layer opposite(Layer layer) { return layer == Layer::U ? Layer::V : Layer::U; }

const char* layer_name(Layer layer);

struct Edge {
  VertexId u;
  VertexId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A biclique as (U side, V side), both ascending.
struct Biclique {
  std::vector<VertexId> left;
  std::vector<VertexId> right;

  friend bool operator==(const Biclique&, const Biclique&) = default;
  friend auto operator<=>(const Biclique&, const Biclique&) = default;
};

// Immutable two-layer graph. Both adjacency directions are stored in CSR form
// with strictly increasing neighbor lists.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Edges may come in any order and may repeat; duplicates collapse.
  // Throws ValidationError if an endpoint is out of range.
  static BipartiteGraph from_edges(VertexId u_count, VertexId v_count, std::vector<Edge> edges);

  VertexId u_count() const noexcept { return u_count_; }
  VertexId v_count() const noexcept { return v_count_; }
  VertexId count(Layer layer) const noexcept { return layer == Layer::U ? u_count_ : v_count_; }
  std::size_t edge_count() const noexcept { return u_adj_.targets.size(); }

  std::span<const VertexId> neighbors(Layer layer, VertexId x) const {
    return (layer == Layer::U ? u_adj_ : v_adj_).row(x);
  }
  std::span<const VertexId> u_neighbors(VertexId u) const { return u_adj_.row(u); }
  std::span<const VertexId> v_neighbors(VertexId v) const { return v_adj_.row(v); }
  std::size_t degree(Layer layer, VertexId x) const { return neighbors(layer, x).size(); }

  // Edges sorted by (u, v).
  std::vector<Edge> edges() const;

  bool has_edge(VertexId u, VertexId v) const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  struct Csr {
    std::vector<std::size_t> offsets{0};
    std::vector<VertexId> targets;

    std::span<const VertexId> row(VertexId x) const {
      return {targets.data() + offsets[x], offsets[x + 1] - offsets[x]};
    }
    friend bool operator==(const Csr&, const Csr&) = default;
  };

  static Csr build_csr(VertexId rows, const std::vector<Edge>& sorted, bool by_u);

  VertexId u_count_ = 0;
  VertexId v_count_ = 0;
  Csr u_adj_;
  Csr v_adj_;
};

BipartiteGraph transpose(const BipartiteGraph& g);

// perm_u[old] = new id in U, perm_v[old] = new id in V.
BipartiteGraph relabel(const BipartiteGraph& g, std::span<const VertexId> perm_u,
                       std::span<const VertexId> perm_v);

// Throws ValidationError unless `perm` is a bijection on [0, perm.size()).
void check_permutation(std::span<const VertexId> perm, std::size_t expected_size);

std::vector<VertexId> identity_permutation(std::size_t n);
std::vector<VertexId> invert_permutation(std::span<const VertexId> perm);

// A graph read from an edge list, with the original token of every dense id.
struct LoadedGraph {
  BipartiteGraph graph;
  std::vector<std::int64_t> u_labels;
  std::vector<std::int64_t> v_labels;
};

// Whitespace separated "u v" pairs, one per line. Lines starting with '%' or
// '#' are comments, blank lines are skipped, and columns after the second
// (weights, timestamps in KONECT dumps) are ignored. Ids are remapped densely
// per layer in first-appearance order.
LoadedGraph load_edge_list(std::istream& in);
LoadedGraph load_edge_list(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const BipartiteGraph& g);

// Two columns per line: original label, dense id.
void write_remap(std::ostream& out, std::span<const std::int64_t> labels);

}  // namespace gbc
