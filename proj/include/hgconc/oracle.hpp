#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hgconc/core.hpp"
#include "hgconc/error.hpp"

namespace hgconc {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void require_open_unit(double p, const char* name = "p") {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in (0, 1), got " + std::to_string(p));
  }
}

inline constexpr std::size_t kDefaultVariancePairBudget = 20'000;  // max m
inline constexpr std::size_t kDefaultEnumerationLimit = 22;        // max n

struct ExactMoments {
  double expectation = 0.0;
  double variance = 0.0;
};

/// E(X) = p^k m.
inline double exact_expectation(const Hypergraph& h, double p) {
  require_open_unit(p);
  return std::pow(p, static_cast<double>(h.uniformity())) * static_cast<double>(h.num_edges());
}

/// Histogram of |e ∪ e'| over ordered pairs of distinct edges that share at
/// least one vertex. Disjoint pairs (|e ∪ e'| = 2k) are independent and
/// contribute nothing to the variance, so they are left out of the table.
/// Union sizes come from a merge of the two sorted edges.
inline std::map<std::size_t, std::uint64_t> union_size_profile(
    const Hypergraph& h, std::size_t budget = kDefaultVariancePairBudget) {
  const std::size_t m = h.num_edges();
  if (m > budget) {
    throw BudgetExceeded("variance pair loop: m = " + std::to_string(m) + " exceeds budget " +
                         std::to_string(budget));
  }
  const std::size_t k = h.uniformity();
  std::map<std::size_t, std::uint64_t> profile;
  std::vector<EdgeId> mark(m, UINT32_MAX);
  for (EdgeId e = 0; e < m; ++e) {
    const auto a = h.edge(e);
    for (VertexId v : a) {
      for (EdgeId f : h.incident(v)) {
        if (f == e || mark[f] == e) continue;
        mark[f] = e;
        const auto b = h.edge(f);
        std::size_t common = 0;
        for (std::size_t i = 0, j = 0; i < k && j < k;) {
          if (a[i] < b[j]) {
            ++i;
          } else if (b[j] < a[i]) {
            ++j;
          } else {
            ++common;
            ++i;
            ++j;
          }
        }
        ++profile[2 * k - common];
      }
    }
  }
  return profile;
}

/// Var(X) = sum_e (p^k - p^2k) + sum_{e != e'} (p^|e∪e'| - p^2k).
inline double exact_variance(const Hypergraph& h, double p,
                             std::size_t budget = kDefaultVariancePairBudget) {
  require_open_unit(p);
  const auto profile = union_size_profile(h, budget);
  const double k = static_cast<double>(h.uniformity());
  const double pk = std::pow(p, k);
  const double p2k = std::pow(p, 2 * k);
  CompensatedSum var;
  var.add(static_cast<double>(h.num_edges()) * (pk - p2k));
  for (const auto& [union_size, pairs] : profile) {
    var.add(static_cast<double>(pairs) * (std::pow(p, static_cast<double>(union_size)) - p2k));
  }
  return var.value();
}

inline ExactMoments exact_moments(const Hypergraph& h, double p,
                                  std::size_t budget = kDefaultVariancePairBudget) {
  return {exact_expectation(h, p), exact_variance(h, p, budget)};
}

struct ExactDistribution {
  // probabilities[x] = P(X = x), x = 0..m.
  std::vector<double> probabilities;

  double total() const {
    CompensatedSum s;
    for (double q : probabilities) s.add(q);
    return s.value();
  }
  double mean() const {
    CompensatedSum s;
    for (std::size_t x = 0; x < probabilities.size(); ++x)
      s.add(static_cast<double>(x) * probabilities[x]);
    return s.value();
  }
  double variance() const {
    const double mu = mean();
    CompensatedSum s;
    for (std::size_t x = 0; x < probabilities.size(); ++x) {
      const double d = static_cast<double>(x) - mu;
      s.add(d * d * probabilities[x]);
    }
    return s.value();
  }
  // P(|X - center| >= t).
  double two_sided_tail(double center, double t) const {
    CompensatedSum s;
    for (std::size_t x = 0; x < probabilities.size(); ++x) {
      if (std::abs(static_cast<double>(x) - center) >= t) s.add(probabilities[x]);
    }
    return s.value();
  }
};

/// Exact law of X by walking all 2^n vertex subsets in Gray-code order.
/// Subsets are tallied by integer (|S|, X) counts and weighted only at the
/// end, so the sole rounding happens in n+1 compensated sums per value.
inline ExactDistribution exact_distribution(const Hypergraph& h, double p,
                                            std::size_t max_vertices = kDefaultEnumerationLimit) {
  require_open_unit(p);
  const std::size_t n = h.num_vertices();
  const std::size_t m = h.num_edges();
  if (n > max_vertices || n > 30) {
    throw BudgetExceeded("exact_distribution: n = " + std::to_string(n) +
                         " exceeds enumeration limit " + std::to_string(max_vertices));
  }
  std::vector<std::uint32_t> edge_mask(m, 0);
  for (EdgeId e = 0; e < m; ++e)
    for (VertexId v : h.edge(e)) edge_mask[e] |= std::uint32_t{1} << v;

  // counts[size * (m+1) + x]
  std::vector<std::uint64_t> counts((n + 1) * (m + 1), 0);
  std::uint32_t subset = 0;
  std::size_t x = 0;
  counts[0] = 1;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto v = static_cast<VertexId>(std::countr_zero(step));
    const std::uint32_t bit = std::uint32_t{1} << v;
    const bool adding = (subset & bit) == 0;
    const std::uint32_t with_v = subset | bit;
    std::size_t through_v = 0;
    for (EdgeId e : h.incident(v)) {
      if ((edge_mask[e] & with_v) == edge_mask[e]) ++through_v;
    }
    if (adding) {
      x += through_v;
      subset = with_v;
    } else {
      x -= through_v;
      subset &= ~bit;
    }
    ++counts[static_cast<std::size_t>(std::popcount(subset)) * (m + 1) + x];
  }

  ExactDistribution dist;
  dist.probabilities.assign(m + 1, 0.0);
  const double q = 1.0 - p;
  for (std::size_t xv = 0; xv <= m; ++xv) {
    CompensatedSum s;
    for (std::size_t size = 0; size <= n; ++size) {
      const auto c = counts[size * (m + 1) + xv];
      if (c == 0) continue;
      s.add(static_cast<double>(c) * std::pow(p, static_cast<double>(size)) *
            std::pow(q, static_cast<double>(n - size)));
    }
    dist.probabilities[xv] = s.value();
  }
  return dist;
}

}  // namespace hgconc
