#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "hgconc/error.hpp"

namespace hgconc {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Exact (Clopper-Pearson) two-sided interval at level 1 - alpha for a
/// binomial proportion with `successes` out of `trials`.
inline Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double alpha) {
  if (trials == 0) throw InvalidArgument("clopper_pearson: trials must be >= 1");
  if (successes > trials) throw InvalidArgument("clopper_pearson: successes > trials");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  using boost::math::binomial_distribution;
  const auto n = static_cast<double>(trials);
  const auto k = static_cast<double>(successes);
  Interval ci;
  ci.low = successes == 0 ? 0.0
                          : binomial_distribution<>::find_lower_bound_on_p(
                                n, k, alpha / 2, binomial_distribution<>::clopper_pearson_exact_interval);
  ci.high = successes == trials
                ? 1.0
                : binomial_distribution<>::find_upper_bound_on_p(
                      n, k, alpha / 2, binomial_distribution<>::clopper_pearson_exact_interval);
  return ci;
}

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t bins = 0;
  bool reject = false;
};

/// Two-sample chi-square test of homogeneity for two histograms over the same
/// integer support. Adjacent values are pooled left to right until each bin
/// holds at least `min_pooled` combined observations (a short leftover is
/// folded into the last bin).
inline ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                             const std::vector<std::uint64_t>& b, double alpha,
                                             std::uint64_t min_pooled = 10) {
  const std::size_t len = std::max(a.size(), b.size());
  auto at = [](const std::vector<std::uint64_t>& h, std::size_t i) -> std::uint64_t {
    return i < h.size() ? h[i] : 0;
  };
  std::vector<std::uint64_t> pa, pb;
  std::uint64_t ca = 0, cb = 0;
  for (std::size_t i = 0; i < len; ++i) {
    ca += at(a, i);
    cb += at(b, i);
    if (ca + cb >= min_pooled) {
      pa.push_back(ca);
      pb.push_back(cb);
      ca = cb = 0;
    }
  }
  if (ca + cb > 0) {
    if (pa.empty()) {
      pa.push_back(ca);
      pb.push_back(cb);
    } else {
      pa.back() += ca;
      pb.back() += cb;
    }
  }
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    na += static_cast<double>(pa[i]);
    nb += static_cast<double>(pb[i]);
  }
  if (na == 0.0 || nb == 0.0) throw InvalidArgument("chi_square_two_sample: empty sample");

  ChiSquareResult r;
  r.bins = pa.size();
  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double x = static_cast<double>(pa[i]);
    const double y = static_cast<double>(pb[i]);
    const double d = ka * x - kb * y;
    r.statistic += d * d / (x + y);
  }
  r.dof = static_cast<double>(r.bins) - (na == nb ? 1.0 : 0.0);
  if (r.dof <= 0.0) {
    r.p_value = 1.0;
  } else {
    r.p_value = boost::math::cdf(
        boost::math::complement(boost::math::chi_squared_distribution<>(r.dof), r.statistic));
  }
  r.reject = r.p_value < alpha;
  return r;
}

}  // namespace hgconc
