#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "hgconc/core.hpp"
#include "hgconc/error.hpp"
#include "hgconc/generators.hpp"

using namespace hgconc;

TEST(PairId, ColexRoundTrip) {
  VertexId expect = 0;
  for (std::uint32_t hi = 1; hi < 40; ++hi) {
    for (std::uint32_t lo = 0; lo < hi; ++lo) {
      EXPECT_EQ(pair_id(lo, hi), expect);
      EXPECT_EQ(pair_id(hi, lo), expect);
      EXPECT_EQ(pair_endpoints(expect), (std::pair<std::uint32_t, std::uint32_t>{lo, hi}));
      ++expect;
    }
  }
}

TEST(GraphSpec, CountsAndCanonicalOrder) {
  const auto k4 = GraphSpec::complete(4);
  EXPECT_EQ(k4.vertex_count(), 4u);
  EXPECT_EQ(k4.edge_count(), 6u);
  const auto k32 = GraphSpec::complete_bipartite(3, 2);
  EXPECT_EQ(k32.side_a(), 2u);
  EXPECT_EQ(k32.side_b(), 3u);
  EXPECT_EQ(k32.vertex_count(), 5u);
  EXPECT_EQ(k32.edge_count(), 6u);
  EXPECT_EQ(k32, GraphSpec::complete_bipartite(2, 3));
  EXPECT_THROW(GraphSpec::complete(1), InvalidArgument);
  EXPECT_THROW(GraphSpec::complete_bipartite(0, 3), InvalidArgument);
}

TEST(SubgraphHypergraph, TriangleN4) {
  const auto h = subgraph_hypergraph(GraphSpec::complete(3), 4);
  EXPECT_EQ(h.num_vertices(), 6u);
  EXPECT_EQ(h.num_edges(), 4u);
  EXPECT_EQ(h.uniformity(), 3u);
}

TEST(SubgraphHypergraph, TriangleN10) {
  const auto h = subgraph_hypergraph(GraphSpec::complete(3), 10);
  const auto p = degree_profile(h);
  EXPECT_EQ(h.num_vertices(), 45u);
  EXPECT_EQ(h.num_edges(), 120u);
  EXPECT_EQ(p.max_deg, 8u);
}

TEST(SubgraphHypergraph, K22InK4) {
  const auto h = subgraph_hypergraph(GraphSpec::complete_bipartite(2, 2), 4);
  EXPECT_EQ(h.num_edges(), 3u);
  EXPECT_EQ(h.uniformity(), 4u);
}

// Independent count: copies of K_{a,b} as (A, B) pairs of disjoint vertex
// sets, deduplicated by their edge sets.
static std::size_t brute_bipartite_copies(std::uint32_t a, std::uint32_t b, std::uint32_t big_n) {
  std::set<std::vector<VertexId>> copies;
  for (std::uint32_t ma = 0; ma < (1u << big_n); ++ma) {
    if (static_cast<std::uint32_t>(__builtin_popcount(ma)) != a) continue;
    for (std::uint32_t mb = 0; mb < (1u << big_n); ++mb) {
      if ((ma & mb) || static_cast<std::uint32_t>(__builtin_popcount(mb)) != b) continue;
      std::vector<VertexId> e;
      for (std::uint32_t u = 0; u < big_n; ++u)
        for (std::uint32_t v = 0; v < big_n; ++v)
          if (((ma >> u) & 1) && ((mb >> v) & 1)) e.push_back(pair_id(u, v));
      std::sort(e.begin(), e.end());
      copies.insert(e);
    }
  }
  return copies.size();
}

TEST(SubgraphHypergraph, BipartiteCountsMatchBruteForce) {
  for (auto [a, b] : {std::pair{1u, 2u}, {2u, 2u}, {2u, 3u}, {1u, 3u}, {3u, 3u}}) {
    for (std::uint32_t big_n = a + b; big_n <= 7; ++big_n) {
      const auto spec = GraphSpec::complete_bipartite(a, b);
      const auto h = subgraph_hypergraph(spec, big_n);
      EXPECT_EQ(h.num_edges(), brute_bipartite_copies(a, b, big_n)) << spec.name() << " N=" << big_n;
      EXPECT_EQ(h.num_edges(), spec.copies_in(big_n));
      EXPECT_EQ(h.uniformity(), a * b);
    }
  }
}

TEST(SubgraphHypergraph, CompleteDegreesAreRegular) {
  for (std::uint32_t r = 3; r <= 5; ++r) {
    for (std::uint32_t big_n = r; big_n <= 9; ++big_n) {
      const auto h = subgraph_hypergraph(GraphSpec::complete(r), big_n);
      const auto p = degree_profile(h);
      EXPECT_EQ(h.num_edges(), binomial(big_n, r));
      EXPECT_EQ(p.max_deg, binomial(big_n - 2, r - 2));
      EXPECT_EQ(p.min_deg, p.max_deg);
    }
  }
}

TEST(SubgraphHypergraph, BipartiteDegreesAreRegular) {
  for (auto [a, b] : {std::pair{2u, 2u}, {2u, 3u}}) {
    const auto p = degree_profile(subgraph_hypergraph(GraphSpec::complete_bipartite(a, b), 8));
    EXPECT_EQ(p.min_deg, p.max_deg);
  }
}

TEST(SubgraphHypergraph, Errors) {
  EXPECT_THROW(subgraph_hypergraph(GraphSpec::complete(4), 3), InvalidArgument);
  EXPECT_THROW(subgraph_hypergraph(GraphSpec::complete(3), 100, 1000), BudgetExceeded);
}

TEST(DisjointEdges, Shapes) {
  const auto h = disjoint_edges(3, 3);
  EXPECT_EQ(h.num_vertices(), 9u);
  const auto one = disjoint_edges(1, 2);
  EXPECT_EQ(one.edge_list(), (std::vector<std::vector<VertexId>>{{0, 1}}));
  const auto big = disjoint_edges(200, 3);
  const auto p = degree_profile(big);
  EXPECT_EQ(big.num_vertices(), 600u);
  std::size_t sum = 0;
  for (auto d : p.deg) sum += d;
  EXPECT_EQ(sum, 600u);
  EXPECT_EQ(p.max_deg, 1u);
  EXPECT_EQ(p.min_deg, 1u);
  EXPECT_EQ(degree_profile(disjoint_edges(5, 1)).max_codeg, 0u);
}

TEST(RandomUniform, ExhaustionAndDeterminism) {
  EXPECT_EQ(random_uniform(6, 20, 3, 1).num_edges(), 20u);
  EXPECT_EQ(random_uniform(6, 20, 3, 1), random_uniform(6, 20, 3, 99));
  EXPECT_EQ(random_uniform(10, 5, 3, 7), random_uniform(10, 5, 3, 7));
  EXPECT_NE(random_uniform(10, 5, 3, 7), random_uniform(10, 5, 3, 8));
  EXPECT_THROW(random_uniform(4, 5, 3, 1), Infeasible);
}

TEST(RandomUniform, LargeSpaceUsesSampling) {
  const auto h = random_uniform(400, 1000, 4, 3);
  EXPECT_EQ(h.num_edges(), 1000u);
  EXPECT_EQ(h, random_uniform(400, 1000, 4, 3));
}
