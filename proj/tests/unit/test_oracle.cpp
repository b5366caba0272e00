#include <gtest/gtest.h>

#include <cmath>

#include "common/oracles.hpp"
#include "hgconc/error.hpp"
#include "hgconc/generators.hpp"
#include "hgconc/oracle.hpp"

using namespace hgconc;

TEST(ExactExpectation, Examples) {
  EXPECT_DOUBLE_EQ(exact_expectation(subgraph_hypergraph(GraphSpec::complete(3), 4), 0.5), 0.5);
  EXPECT_NEAR(exact_expectation(disjoint_edges(200, 3), 0.3), 5.4, 1e-12);
  const auto h = random_uniform(8, 10, 3, 5);
  double prev = 0.0;
  for (double p = 0.05; p < 1.0; p += 0.05) {
    const double e = exact_expectation(h, p);
    EXPECT_GT(e, prev);
    prev = e;
  }
  EXPECT_THROW(exact_expectation(h, 0.0), InvalidArgument);
  EXPECT_THROW(exact_expectation(h, 1.0), InvalidArgument);
}

TEST(ExactVariance, Examples) {
  EXPECT_NEAR(exact_variance(subgraph_hypergraph(GraphSpec::complete(3), 4), 0.5), 0.625, 1e-15);
  const auto single = Hypergraph::validate({{0, 1}}, 2, 2);
  EXPECT_NEAR(exact_variance(single, 0.5), 0.1875, 1e-15);
  for (double p : {0.1, 0.5, 0.9}) {
    const double q = std::pow(p, 3);
    EXPECT_NEAR(exact_variance(disjoint_edges(50, 3), p), 50 * (q - q * q), 1e-12);
  }
}

TEST(ExactVariance, CovarianceTermsNonnegative) {
  const auto h = random_uniform(10, 30, 3, 11);
  const auto prof = union_size_profile(h);
  for (double p : {0.1, 0.5, 0.9}) {
    for (auto [u, count] : prof) {
      EXPECT_LE(u, 6u);
      EXPECT_GE(std::pow(p, double(u)) - std::pow(p, 6.0), 0.0);
    }
  }
}

TEST(ExactVariance, BudgetError) {
  EXPECT_THROW(exact_variance(disjoint_edges(100, 2), 0.5, 50), BudgetExceeded);
}

TEST(ExactDistribution, Examples) {
  const auto one = Hypergraph::validate({{0}}, 1, 1);
  const auto d1 = exact_distribution(one, 0.3);
  ASSERT_EQ(d1.probabilities.size(), 2u);
  EXPECT_NEAR(d1.probabilities[0], 0.7, 1e-15);
  EXPECT_NEAR(d1.probabilities[1], 0.3, 1e-15);

  const auto d2 = exact_distribution(disjoint_edges(2, 2), 0.5);
  EXPECT_NEAR(d2.probabilities[0], 0.5625, 1e-15);
  EXPECT_NEAR(d2.probabilities[1], 0.375, 1e-15);
  EXPECT_NEAR(d2.probabilities[2], 0.0625, 1e-15);

  const auto d3 = exact_distribution(subgraph_hypergraph(GraphSpec::complete(3), 4), 0.5);
  EXPECT_NEAR(d3.mean(), 0.5, 1e-12);
  EXPECT_NEAR(d3.variance(), 0.625, 1e-12);
  EXPECT_NEAR(d3.total(), 1.0, 1e-12);

  EXPECT_THROW(exact_distribution(disjoint_edges(12, 2), 0.5), BudgetExceeded);
}

TEST(ExactDistribution, AgreesWithMomentsAndBruteForce) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto h = random_uniform(10 + seed % 3, 12 + 2 * seed, 3, seed);
    for (double p : {0.1, 0.3, 0.5, 0.9}) {
      const auto d = exact_distribution(h, p);
      const auto mo = exact_moments(h, p);
      const auto bf = oracle::brute_moments(h, p);
      EXPECT_NEAR(d.total(), 1.0, 1e-12);
      EXPECT_NEAR(d.mean(), mo.expectation, 1e-12);
      EXPECT_NEAR(d.variance(), mo.variance, 1e-12);
      EXPECT_NEAR(mo.expectation, static_cast<double>(bf.mean), 1e-12);
      EXPECT_NEAR(mo.variance, static_cast<double>(bf.variance), 1e-12);
    }
  }
}
