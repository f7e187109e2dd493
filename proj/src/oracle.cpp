#include "gbc/oracle.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "gbc/error.hpp"

namespace gbc::oracle {

namespace {

// Local binomial so the oracle stays self-contained.
Count choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  Count r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double choose_approx(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

std::vector<VertexId> intersect(const std::vector<VertexId>& a, std::span<const VertexId> b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Visits every p-subset of U in lexicographic order together with the common
// V-neighborhood of the subset.
template <class Fn>
void for_each_left_subset(const BipartiteGraph& g, std::uint32_t p, Fn&& fn) {
  std::vector<VertexId> chosen;
  std::vector<std::vector<VertexId>> common(p + 1);
  common[0].resize(g.v_count());
  for (VertexId v = 0; v < g.v_count(); ++v) common[0][v] = v;

  auto recurse = [&](auto&& self, VertexId start) -> void {
    const std::size_t depth = chosen.size();
    if (depth == p) {
      fn(chosen, common[depth]);
      return;
    }
    for (VertexId u = start; u + (p - depth) <= g.u_count(); ++u) {
      common[depth + 1] = intersect(common[depth], g.u_neighbors(u));
      chosen.push_back(u);
      self(self, u + 1);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0);
}

void guard_left_subsets(const BipartiteGraph& g, std::uint32_t p) {
  const double subsets = choose_approx(g.u_count(), p);
  if (subsets > kMaxLeftSubsets) {
    throw GuardError("oracle", "brute force over C(" + std::to_string(g.u_count()) + ", " +
                                   std::to_string(p) + ") ~ " + std::to_string(subsets) +
                                   " subsets exceeds the limit");
  }
}

}  // namespace

Count brute_force_count(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q) {
  if (p == 0 || q == 0) throw ValidationError("oracle", "p and q must be at least 1");
  if (p > g.u_count() || q > g.v_count()) return 0;
  guard_left_subsets(g, p);
  Count total = 0;
  for_each_left_subset(g, p, [&](const std::vector<VertexId>&, const std::vector<VertexId>& common) {
    total += choose(common.size(), q);
  });
  return total;
}

std::optional<Count> closed_form_count(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q) {
  if (p == 1) {
    Count total = 0;
    for (VertexId u = 0; u < g.u_count(); ++u) total += choose(g.u_neighbors(u).size(), q);
    return total;
  }
  if (q == 1) {
    Count total = 0;
    for (VertexId v = 0; v < g.v_count(); ++v) total += choose(g.v_neighbors(v).size(), p);
    return total;
  }
  if (p == 2 && q == 2) {
    Count total = 0;
    for (VertexId u = 0; u < g.u_count(); ++u) {
      const auto nu = g.u_neighbors(u);
      for (VertexId w = u + 1; w < g.u_count(); ++w) {
        const auto nw = g.u_neighbors(w);
        std::size_t shared = 0;
        for (VertexId v : nu) shared += std::binary_search(nw.begin(), nw.end(), v);
        total += choose(shared, 2);
      }
    }
    return total;
  }
  return std::nullopt;
}

std::vector<Biclique> enumerate_bicliques(const BipartiteGraph& g, std::uint32_t p, std::uint32_t q) {
  const Count expected = brute_force_count(g, p, q);
  if (expected > kMaxEnumerated) {
    throw GuardError("oracle", to_string(expected) + " bicliques exceed the enumeration limit");
  }
  std::vector<Biclique> out;
  out.reserve(static_cast<std::size_t>(expected));
  if (expected == 0) return out;
  for_each_left_subset(g, p, [&](const std::vector<VertexId>& left, const std::vector<VertexId>& common) {
    if (common.size() < q) return;
    // Lexicographic q-subsets of the common neighborhood.
    std::vector<std::size_t> pick(q);
    for (std::size_t i = 0; i < q; ++i) pick[i] = i;
    while (true) {
      Biclique b{left, {}};
      for (std::size_t i : pick) b.right.push_back(common[i]);
      out.push_back(std::move(b));
      std::size_t i = q;
      while (i > 0 && pick[i - 1] == common.size() - q + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < q; ++j) pick[j] = pick[j - 1] + 1;
    }
  });
  return out;
}

}  // namespace gbc::oracle
