#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hgconc/core.hpp"
#include "hgconc/error.hpp"
#include "hgconc/rng.hpp"

namespace hgconc {

// Exact binomial coefficient, saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(acc);
}

// Colex rank of the K_N edge {u, v}: id = hi*(hi-1)/2 + lo. Independent of N,
// so the same pair has the same id in every K_N that contains it.
inline VertexId pair_id(std::uint32_t u, std::uint32_t v) {
  if (u == v) throw InvalidArgument("pair_id needs distinct endpoints");
  if (u > v) std::swap(u, v);
  return static_cast<VertexId>(std::uint64_t{v} * (v - 1) / 2 + u);
}

inline std::pair<std::uint32_t, std::uint32_t> pair_endpoints(VertexId id) {
  // Largest hi with hi*(hi-1)/2 <= id.
  auto hi = static_cast<std::uint32_t>((1.0 + std::sqrt(1.0 + 8.0 * id)) / 2.0);
  while (std::uint64_t{hi} * (hi - 1) / 2 > id) --hi;
  while (std::uint64_t{hi + 1} * hi / 2 <= id) ++hi;
  return {static_cast<std::uint32_t>(id - std::uint64_t{hi} * (hi - 1) / 2), hi};
}

/// Pattern graph G: complete K_r or complete bipartite K_{a,b} (a <= b).
class GraphSpec {
 public:
  enum class Family { kComplete, kCompleteBipartite };

  static GraphSpec complete(std::uint32_t r) {
    if (r < 2) throw InvalidArgument("complete graph needs r >= 2 (e_G >= 1)");
    return GraphSpec(Family::kComplete, r, 0);
  }

  // Sides are stored in canonical order a <= b.
  static GraphSpec complete_bipartite(std::uint32_t a, std::uint32_t b) {
    if (a < 1 || b < 1) throw InvalidArgument("complete bipartite graph needs a, b >= 1");
    if (a > b) std::swap(a, b);
    return GraphSpec(Family::kCompleteBipartite, a, b);
  }

  Family family() const { return family_; }
  bool is_complete() const { return family_ == Family::kComplete; }
  std::uint32_t r() const { return a_; }
  std::uint32_t side_a() const { return a_; }
  std::uint32_t side_b() const { return b_; }

  std::uint32_t vertex_count() const { return is_complete() ? a_ : a_ + b_; }
  std::uint32_t edge_count() const { return is_complete() ? a_ * (a_ - 1) / 2 : a_ * b_; }

  // Number of copies of G in K_N.
  std::uint64_t copies_in(std::uint32_t big_n) const {
    if (big_n < vertex_count()) return 0;
    if (is_complete()) return binomial(big_n, a_);
    std::uint64_t c = binomial(big_n, a_ + b_);
    const std::uint64_t split = binomial(a_ + b_, a_);
    if (c > UINT64_MAX / split) return UINT64_MAX;
    c *= split;
    return a_ == b_ ? c / 2 : c;
  }

  std::string name() const {
    return is_complete() ? "K" + std::to_string(a_)
                         : "K" + std::to_string(a_) + "," + std::to_string(b_);
  }

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;

 private:
  GraphSpec(Family f, std::uint32_t a, std::uint32_t b) : family_(f), a_(a), b_(b) {}

  Family family_;
  std::uint32_t a_;
  std::uint32_t b_;
};

inline constexpr std::uint64_t kDefaultGeneratorBudget = 10'000'000;

namespace detail {

// Calls fn(subset) for every r-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_combination(std::uint32_t n, std::uint32_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<std::uint32_t> c(r);
  std::iota(c.begin(), c.end(), 0u);
  while (true) {
    fn(static_cast<const std::vector<std::uint32_t>&>(c));
    int i = static_cast<int>(r) - 1;
    while (i >= 0 && c[i] == n - r + i) --i;
    if (i < 0) return;
    ++c[i];
    for (std::uint32_t j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace detail

/// H_G: vertices are the C(N,2) edges of K_N (colex pair ids), hyperedges are
/// the edge sets of the copies of G in K_N. Copies are enumerated by vertex
/// sets (and side splits for K_{a,b}, halved when a == b), never by injective
/// maps, so each copy appears exactly once.
inline Hypergraph subgraph_hypergraph(const GraphSpec& spec, std::uint32_t big_n,
                                      std::uint64_t budget = kDefaultGeneratorBudget) {
  const std::uint32_t vg = spec.vertex_count();
  if (big_n < vg) {
    throw InvalidArgument("N = " + std::to_string(big_n) + " is smaller than v_G = " +
                          std::to_string(vg));
  }
  const std::uint64_t m = spec.copies_in(big_n);
  if (m > budget) {
    throw BudgetExceeded("H_G for " + spec.name() + " in K_" + std::to_string(big_n) +
                         " has " + std::to_string(m) + " edges, budget is " +
                         std::to_string(budget));
  }
  const std::size_t n = static_cast<std::size_t>(big_n) * (big_n - 1) / 2;

  std::vector<std::vector<VertexId>> edges;
  edges.reserve(m);
  if (spec.is_complete()) {
    detail::for_each_combination(big_n, vg, [&](const std::vector<std::uint32_t>& s) {
      std::vector<VertexId> e;
      e.reserve(spec.edge_count());
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) e.push_back(pair_id(s[i], s[j]));
      edges.push_back(std::move(e));
    });
  } else {
    const std::uint32_t a = spec.side_a();
    const bool symmetric = spec.side_a() == spec.side_b();
    detail::for_each_combination(big_n, vg, [&](const std::vector<std::uint32_t>& t) {
      detail::for_each_combination(vg, a, [&](const std::vector<std::uint32_t>& pick) {
        // With equal sides, {A, B} and {B, A} are the same copy: keep the split
        // whose A side holds the smallest vertex of t.
        if (symmetric && pick[0] != 0) return;
        std::vector<bool> in_a(vg, false);
        for (auto i : pick) in_a[i] = true;
        std::vector<VertexId> e;
        e.reserve(spec.edge_count());
        for (std::uint32_t i = 0; i < vg; ++i) {
          if (!in_a[i]) continue;
          for (std::uint32_t j = 0; j < vg; ++j) {
            if (!in_a[j]) e.push_back(pair_id(t[i], t[j]));
          }
        }
        edges.push_back(std::move(e));
      });
    });
  }
  return Hypergraph::validate(std::move(edges), n, spec.edge_count());
}

/// m pairwise disjoint edges {ik, ..., ik+k-1}; X is Binomial(m, p^k).
inline Hypergraph disjoint_edges(std::size_t m_edges, std::size_t k) {
  if (m_edges < 1 || k < 1) throw InvalidArgument("disjoint_edges needs m >= 1 and k >= 1");
  std::vector<std::vector<VertexId>> edges(m_edges);
  for (std::size_t i = 0; i < m_edges; ++i) {
    edges[i].resize(k);
    std::iota(edges[i].begin(), edges[i].end(), static_cast<VertexId>(i * k));
  }
  return Hypergraph::validate(std::move(edges), m_edges * k, k);
}

/// m distinct k-subsets of {0..n-1}, uniform without replacement, as a
/// deterministic function of seed.
inline Hypergraph random_uniform(std::size_t n, std::size_t m, std::size_t k,
                                 std::uint64_t seed,
                                 std::uint64_t budget = kDefaultGeneratorBudget) {
  if (k < 1) throw InvalidArgument("uniformity k must be >= 1");
  const std::uint64_t total = binomial(n, k);
  if (m > total) {
    throw Infeasible("cannot draw " + std::to_string(m) + " distinct " + std::to_string(k) +
                     "-sets from " + std::to_string(n) + " vertices (C(n,k) = " +
                     std::to_string(total) + ")");
  }
  if (m > budget) throw BudgetExceeded("random_uniform: m exceeds budget");
  SequentialRng rng(seed, StreamDomain::kHypergraph, 0);

  std::vector<std::vector<VertexId>> edges;
  edges.reserve(m);
  constexpr std::uint64_t kEnumerateLimit = 1'000'000;
  if (total <= kEnumerateLimit) {
    std::vector<std::vector<VertexId>> all;
    all.reserve(total);
    detail::for_each_combination(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k),
                                 [&](const std::vector<std::uint32_t>& c) {
                                   all.emplace_back(c.begin(), c.end());
                                 });
    // Partial Fisher-Yates: the first m slots are a uniform m-subset.
    for (std::size_t i = 0; i < m; ++i) {
      const auto j = i + rng.below(all.size() - i);
      std::swap(all[i], all[j]);
      edges.push_back(std::move(all[i]));
    }
  } else {
    std::set<std::vector<VertexId>> seen;
    while (edges.size() < m) {
      // Floyd's algorithm for one uniform k-subset.
      std::set<VertexId> pick;
      for (std::size_t j = n - k; j < n; ++j) {
        auto t = static_cast<VertexId>(rng.below(j + 1));
        if (!pick.insert(t).second) pick.insert(static_cast<VertexId>(j));
      }
      std::vector<VertexId> e(pick.begin(), pick.end());
      if (seen.insert(e).second) edges.push_back(std::move(e));
    }
  }
  return Hypergraph::validate(std::move(edges), n, k);
}

}  // namespace hgconc
