#include <gtest/gtest.h>

#include <cmath>

#include "common/oracles.hpp"
#include "hgconc/generators.hpp"
#include "hgconc/montecarlo.hpp"
#include "hgconc/oracle.hpp"

using namespace hgconc;

namespace {

TrialConfig cfg(std::uint64_t seed, std::uint64_t trials, unsigned workers = 1) {
  TrialConfig c;
  c.seed = seed;
  c.trials = trials;
  c.workers = workers;
  return c;
}

}  // namespace

TEST(TrialConfig, Validation) {
  TrialConfig c;
  c.trials = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.trials = 1;
  c.alpha = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(EstimateTail, IntegralityExample) {
  const auto r = estimate_tail(disjoint_edges(2, 2), 0.5, {0.05}, cfg(1, 2000));
  EXPECT_DOUBLE_EQ(r.expectation, 0.5);
  EXPECT_EQ(r.tails[0].exceed, 2000u);
  EXPECT_EQ(r.tails[0].point, 1.0);
}

TEST(EstimateTail, CoversExactBinomialAndMonotone) {
  const auto h = disjoint_edges(200, 3);
  const double sigma = std::sqrt(200 * 0.027 * 0.973);
  const std::vector<double> ts{0.5 * sigma, sigma, 2 * sigma, 3 * sigma};
  const auto r = estimate_tail(h, 0.3, ts, cfg(11, 20000));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& te = r.tails[i];
    const double exact = static_cast<double>(oracle::binomial_two_sided_tail(200, 0.027L, 5.4L, ts[i]));
    EXPECT_LE(te.ci_low, exact);
    EXPECT_GE(te.ci_high, exact);
    EXPECT_LE(te.ci_low, te.point);
    EXPECT_GE(te.ci_high, te.point);
    if (i > 0) {
      EXPECT_LE(te.exceed, r.tails[i - 1].exceed);
    }
  }
  EXPECT_THROW(estimate_tail(h, 0.3, {0.0}, cfg(1, 10)), InvalidArgument);
}

TEST(EstimateTail, AgreesWithExactDistribution) {
  const auto h = subgraph_hypergraph(GraphSpec::complete(3), 6);
  const double p = 0.5;
  const auto d = exact_distribution(h, p);
  const std::vector<double> ts{0.5, 1.0, 2.0, 3.5};
  const auto r = estimate_tail(h, p, ts, cfg(3, 20000));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double exact = d.two_sided_tail(r.expectation, ts[i]);
    EXPECT_LE(r.tails[i].ci_low, exact);
    EXPECT_GE(r.tails[i].ci_high, exact);
  }
}

TEST(EstimateTail, WorkerCountDoesNotChangeCounts) {
  const auto h = random_uniform(20, 80, 3, 5);
  const auto a = estimate_tail(h, 0.4, {1, 2, 3}, cfg(17, 3001, 1));
  const auto b = estimate_tail(h, 0.4, {1, 2, 3}, cfg(17, 3001, 8));
  EXPECT_EQ(a.histogram, b.histogram);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.tails[i].exceed, b.tails[i].exceed);
}

TEST(VerifyP4, CapDominatesWhenGammaAtLeastDelta) {
  const auto h = subgraph_hypergraph(GraphSpec::complete(3), 10);
  NicenessParams np;
  np.p = 0.01;
  np.gamma = 8;
  const auto ev = verify_p4(h, np, default_q_grid(0.01), cfg(1, 300));
  for (const auto& g : ev.grid) EXPECT_EQ(g.deg_violations, 0u);
  EXPECT_TRUE(ev.grid_within_range);
  EXPECT_EQ(ev.grid.size(), 8u);
}

TEST(VerifyP4, DisjointEdgesZeroViolations) {
  NicenessParams np;
  np.p = 1e-3;
  np.gamma = 1;
  np.lambda = 1;
  const auto ev = verify_p4(disjoint_edges(50, 3), np, {1e-3, 0.1, 0.5, 0.9}, cfg(2, 500));
  // deg_q <= 1 <= cap. When the co-degree trigger holds, a surviving edge
  // gives co-degree 1 against min degree 1 ln^-3 n, which is a violation.
  for (const auto& g : ev.grid) {
    EXPECT_EQ(g.deg_violations, 0u);
    EXPECT_LE(g.max_deg_seen, 1u);
  }
}

TEST(VerifyP4, TriangleCapExample) {
  const auto h = subgraph_hypergraph(GraphSpec::complete(3), 12);
  NicenessParams np;
  np.p = 0.5;
  np.gamma = 1;
  const auto ev = verify_p4(h, np, {0.9}, cfg(4, 500));
  EXPECT_DOUBLE_EQ(ev.grid[0].deg_cap, 2 * 0.81 * 10);
  EXPECT_EQ(ev.grid[0].deg_violations, 0u);
  EXPECT_THROW(verify_p4(h, np, {}, cfg(4, 5)), InvalidArgument);
}

TEST(VerifyP4, GridBelowPIsFlagged) {
  NicenessParams np;
  np.p = 0.3;
  const auto ev = verify_p4(disjoint_edges(5, 3), np, {0.1, 0.5}, cfg(1, 10));
  EXPECT_FALSE(ev.grid_within_range);
}

TEST(DefaultQGrid, Geometric) {
  const auto g = default_q_grid(1e-3);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.back(), 0.9);
  for (std::size_t i = 2; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], g[1] / g[0], 1e-9);
}

TEST(FitSubGaussian, BinomialInstance) {
  const auto h = disjoint_edges(2000, 3);
  const std::vector<double> lambdas{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  const auto fit = fit_subgaussian(h, 0.3, lambdas, VarianceSource::kExact, cfg(7, 20000));
  EXPECT_TRUE(fit.feasible);
  EXPECT_GT(fit.c_g, 0.0);
  EXPECT_LT(fit.c_g, 0.6);
  EXPECT_FALSE(fit.plugin_assumption);
  const double sd = std::sqrt(fit.variance);
  for (const auto& pt : fit.points) {
    const double exact = static_cast<double>(
        oracle::binomial_two_sided_tail(2000, 0.027L, 54.0L, pt.lambda * sd));
    EXPECT_GE(std::exp(-fit.c_g * pt.lambda * pt.lambda), exact * (1 - 1e-9));
  }
}

TEST(FitSubGaussian, ZeroExceedanceIsLowerBoundOnly) {
  const auto h = disjoint_edges(50, 3);
  const auto fit = fit_subgaussian(h, 0.3, {1.0, 40.0}, VarianceSource::kPlugin, cfg(1, 2000));
  EXPECT_TRUE(fit.plugin_assumption);
  EXPECT_TRUE(fit.points[1].lower_bound_only);
  EXPECT_EQ(fit.fitted_points, 1u);
}

TEST(FitSubGaussian, VarianceUnavailable) {
  EXPECT_THROW(fit_subgaussian(disjoint_edges(100, 2), 0.3, {1.0}, VarianceSource::kExact, cfg(1, 10), 10),
               BudgetExceeded);
}

TEST(FitSubGaussian, CiShrinksWithTrials) {
  const auto h = disjoint_edges(300, 3);
  const auto a = fit_subgaussian(h, 0.3, {1.0}, VarianceSource::kExact, cfg(5, 2000));
  const auto b = fit_subgaussian(h, 0.3, {1.0}, VarianceSource::kExact, cfg(5, 8000));
  EXPECT_LT(b.points[0].tail.ci_high - b.points[0].tail.ci_low,
            a.points[0].tail.ci_high - a.points[0].tail.ci_low);
}

TEST(Prop31, DisjointEdgeClosedForm) {
  const auto h = disjoint_edges(10, 3);
  RoundState st;
  st.sample = induced_sample(h, VertexSet(h.num_vertices(), 1));
  st.eta = 1.0;
  const double eps = 0.5;
  const auto r = check_prop31(h, st, eps, {0, 4, 8}, cfg(3, 40000));
  for (const auto& e : r.entries) {
    EXPECT_EQ(e.deg, 1u);
    EXPECT_NEAR(e.estimate, std::pow(eps, 3), 4 * e.stderr_est + 1e-12);
    EXPECT_TRUE(e.passes);
    EXPECT_GE(e.bound, std::pow(eps, 3));
  }
  const auto again = check_prop31(h, st, eps, {0, 4, 8}, cfg(3, 40000));
  EXPECT_EQ(again.entries[1].estimate, r.entries[1].estimate);
}

TEST(Prop31, IsolatedVertex) {
  const auto h = disjoint_edges(2, 2);
  VertexSet kept{1, 0, 1, 1};
  RoundState st;
  st.sample = induced_sample(h, kept);
  const auto r = check_prop31(h, st, 0.3, {0}, cfg(1, 100));
  EXPECT_EQ(r.entries[0].estimate, 0.0);
  EXPECT_EQ(r.entries[0].bound, 0.0);
  EXPECT_TRUE(r.all_pass);
  EXPECT_THROW(check_prop31(h, st, 0.3, {1}, cfg(1, 10)), InvalidArgument);
}

TEST(Prop32, DisjointEdgesPassAndReproducible) {
  const auto h = disjoint_edges(40, 3);
  const auto sched = build_schedule(0.125, h.num_vertices(), {0.1, 0.5}, false, 3u);
  const LemmaParams lp{0.125, 1.0, 1.0};
  const auto a = run_exposure_campaign(h, sched, lp, cfg(9, 2000));
  const auto b = run_exposure_campaign(h, sched, lp, cfg(9, 2000, 4));
  ASSERT_EQ(a.prop32.size(), 3u);
  for (std::size_t i = 0; i < a.prop32.size(); ++i) {
    EXPECT_EQ(a.prop32[i].conditioned, b.prop32[i].conditioned);
    EXPECT_EQ(a.prop32[i].mean_y, b.prop32[i].mean_y);
    EXPECT_TRUE(a.prop32[i].passes);
  }
  EXPECT_EQ(a.rounds[0].x.mean(), 40.0);
  EXPECT_EQ(check_prop32(h, sched, lp, cfg(9, 2000)).size(), 3u);
}
