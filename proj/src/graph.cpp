#include "gbc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "gbc/error.hpp"

namespace gbc {

const char* layer_name(Layer layer) { return layer == Layer::U ? "U" : "V"; }

BipartiteGraph::Csr BipartiteGraph::build_csr(VertexId rows, const std::vector<Edge>& sorted,
                                              bool by_u) {
  Csr csr;
  csr.offsets.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (const Edge& e : sorted) ++csr.offsets[(by_u ? e.u : e.v) + 1];
  for (std::size_t i = 1; i < csr.offsets.size(); ++i) csr.offsets[i] += csr.offsets[i - 1];
  csr.targets.resize(sorted.size());
  std::vector<std::size_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
  // `sorted` is ordered by (u, v), so U rows fill in increasing v and V rows
  // fill in increasing u.
  for (const Edge& e : sorted) {
    if (by_u) {
      csr.targets[cursor[e.u]++] = e.v;
    } else {
      csr.targets[cursor[e.v]++] = e.u;
    }
  }
  return csr;
}

BipartiteGraph BipartiteGraph::from_edges(VertexId u_count, VertexId v_count, std::vector<Edge> edges) {
  for (const Edge& e : edges) {
    if (e.u >= u_count || e.v >= v_count) {
      throw ValidationError("graph", "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                         ") out of range for layers of size " +
                                         std::to_string(u_count) + "x" + std::to_string(v_count));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  BipartiteGraph g;
  g.u_count_ = u_count;
  g.v_count_ = v_count;
  g.u_adj_ = build_csr(u_count, edges, true);
  g.v_adj_ = build_csr(v_count, edges, false);
  return g;
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId u = 0; u < u_count_; ++u) {
    for (VertexId v : u_neighbors(u)) out.push_back({u, v});
  }
  return out;
}

bool BipartiteGraph::has_edge(VertexId u, VertexId v) const {
  auto row = u_neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

BipartiteGraph transpose(const BipartiteGraph& g) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({e.v, e.u});
  return BipartiteGraph::from_edges(g.v_count(), g.u_count(), std::move(edges));
}

void check_permutation(std::span<const VertexId> perm, std::size_t expected_size) {
  if (perm.size() != expected_size) {
    throw ValidationError("graph", "permutation has " + std::to_string(perm.size()) +
                                       " entries, expected " + std::to_string(expected_size));
  }
  std::vector<bool> seen(perm.size(), false);
  for (VertexId x : perm) {
    if (x >= perm.size() || seen[x]) {
      throw ValidationError("graph", "permutation is not a bijection (entry " +
                                         std::to_string(x) + ")");
    }
    seen[x] = true;
  }
}

std::vector<VertexId> identity_permutation(std::size_t n) {
  std::vector<VertexId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<VertexId>(i);
  return perm;
}

std::vector<VertexId> invert_permutation(std::span<const VertexId> perm) {
  std::vector<VertexId> inverse(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = static_cast<VertexId>(i);
  return inverse;
}

BipartiteGraph relabel(const BipartiteGraph& g, std::span<const VertexId> perm_u,
                       std::span<const VertexId> perm_v) {
  check_permutation(perm_u, g.u_count());
  check_permutation(perm_v, g.v_count());
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edges.push_back({perm_u[e.u], perm_v[e.v]});
  return BipartiteGraph::from_edges(g.u_count(), g.v_count(), std::move(edges));
}

namespace {

class LabelMap {
 public:
  VertexId intern(std::int64_t label) {
    auto [it, inserted] = ids_.try_emplace(label, static_cast<VertexId>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  std::vector<std::int64_t> take() { return std::move(labels_); }
  VertexId size() const { return static_cast<VertexId>(labels_.size()); }

 private:
  std::unordered_map<std::int64_t, VertexId> ids_;
  std::vector<std::int64_t> labels_;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == ','; }

std::string_view next_token(std::string_view& rest) {
  std::size_t i = 0;
  while (i < rest.size() && is_space(rest[i])) ++i;
  std::size_t j = i;
  while (j < rest.size() && !is_space(rest[j])) ++j;
  std::string_view token = rest.substr(i, j - i);
  rest.remove_prefix(j);
  return token;
}

std::int64_t parse_id(std::string_view token, std::size_t line_no) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "expected an integer vertex id, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

LoadedGraph load_edge_list(std::istream& in) {
  LabelMap u_map;
  LabelMap v_map;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = line;
    std::string_view first = next_token(rest);
    if (first.empty() || first.front() == '%' || first.front() == '#') continue;
    std::string_view second = next_token(rest);
    if (second.empty()) throw ParseError(line_no, "expected two vertex ids");
    const std::int64_t u = parse_id(first, line_no);
    const std::int64_t v = parse_id(second, line_no);
    edges.push_back({u_map.intern(u), v_map.intern(v)});
  }
  LoadedGraph loaded;
  loaded.graph = BipartiteGraph::from_edges(u_map.size(), v_map.size(), std::move(edges));
  loaded.u_labels = u_map.take();
  loaded.v_labels = v_map.take();
  return loaded;
}

LoadedGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("graph", "cannot open " + path.string());
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const BipartiteGraph& g) {
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_remap(std::ostream& out, std::span<const std::int64_t> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << labels[i] << ' ' << i << '\n';
}

}  // namespace gbc
