#pragma once

// Brute-force reference computations used by the tests. They deliberately
// share no code with the library beyond the Hypergraph accessors.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "hgconc/core.hpp"

namespace oracle {

struct Moments {
  long double mean = 0;
  long double variance = 0;
};

// E and Var of X by looping over every vertex subset and every edge.
inline Moments brute_moments(const hgconc::Hypergraph& h, double p) {
  const std::size_t n = h.num_vertices();
  long double s1 = 0, s2 = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    long double w = 1;
    for (std::size_t v = 0; v < n; ++v) w *= ((mask >> v) & 1) ? p : 1 - p;
    std::uint64_t x = 0;
    for (hgconc::EdgeId e = 0; e < h.num_edges(); ++e) {
      bool all = true;
      for (auto v : h.edge(e)) all = all && ((mask >> v) & 1);
      x += all;
    }
    s1 += w * x;
    s2 += w * x * x;
  }
  return {s1, s2 - s1 * s1};
}

inline std::size_t naive_codegree(const hgconc::Hypergraph& h, hgconc::VertexId u, hgconc::VertexId v) {
  std::size_t c = 0;
  for (hgconc::EdgeId e = 0; e < h.num_edges(); ++e) {
    bool hu = false, hv = false;
    for (auto w : h.edge(e)) {
      hu = hu || w == u;
      hv = hv || w == v;
    }
    c += hu && hv;
  }
  return c;
}

inline std::vector<long double> binomial_pmf(std::uint64_t n, long double q) {
  std::vector<long double> pmf(n + 1);
  for (std::uint64_t x = 0; x <= n; ++x) {
    const long double lc = std::lgamma(static_cast<long double>(n + 1)) -
                           std::lgamma(static_cast<long double>(x + 1)) -
                           std::lgamma(static_cast<long double>(n - x + 1));
    pmf[x] = std::exp(lc + x * std::log(q) + (n - x) * std::log1p(-q));
  }
  return pmf;
}

// P(|X - center| >= t) for X ~ Binomial(n, q).
inline long double binomial_two_sided_tail(std::uint64_t n, long double q, long double center, long double t) {
  const auto pmf = binomial_pmf(n, q);
  long double s = 0;
  for (std::uint64_t x = 0; x <= n; ++x)
    if (std::fabs(static_cast<long double>(x) - center) >= t) s += pmf[x];
  return s;
}

// Rooted graph given as (r, s, edge list over labels 0..r+s-1).
struct RootedSpec {
  int r = 0;
  int s = 0;
  std::vector<std::pair<int, int>> edges;
};

// Balanced iff for every nonempty subset S'' of the non-roots, the edges
// with at least one end in S'' and the other in R ∪ S'' number at most
// |S''| * t / s. Compared as exact fractions via long long.
inline bool definitional_balanced(const RootedSpec& g) {
  auto count = [&](const std::vector<bool>& in) {
    long long t = 0;
    for (auto [a, b] : g.edges) {
      const bool a_ok = a < g.r || in[a - g.r];
      const bool b_ok = b < g.r || in[b - g.r];
      const bool touches = a >= g.r || b >= g.r;
      t += a_ok && b_ok && touches;
    }
    return t;
  };
  const long long full = count(std::vector<bool>(g.s, true));
  for (long long mask = 1; mask < (1LL << g.s); ++mask) {
    std::vector<bool> in(g.s);
    long long size = 0;
    for (int j = 0; j < g.s; ++j) {
      in[j] = (mask >> j) & 1;
      size += in[j];
    }
    // t'/size > full/s
    if (count(in) * g.s > full * size) return false;
  }
  return true;
}

}  // namespace oracle
