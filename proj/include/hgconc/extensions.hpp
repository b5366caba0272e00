#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hgconc/core.hpp"
#include "hgconc/error.hpp"
#include "hgconc/generators.hpp"
#include "hgconc/montecarlo.hpp"
#include "hgconc/parallel.hpp"
#include "hgconc/percolation.hpp"
#include "hgconc/rng.hpp"
#include "hgconc/stats.hpp"

namespace hgconc {

/// A graph on N vertices stored as a bitmap over colex pair ids, which is
/// exactly the vertex bitmap of a percolation of H_G.
struct SampledGraph {
  std::uint32_t order = 0;  // N
  VertexSet edges;          // edges[pair_id(u, v)]

  static SampledGraph complete(std::uint32_t big_n) {
    return {big_n, VertexSet(std::size_t{big_n} * (big_n - 1) / 2, 1)};
  }
  static SampledGraph empty(std::uint32_t big_n) {
    return {big_n, VertexSet(std::size_t{big_n} * (big_n - 1) / 2, 0)};
  }
  bool has(std::uint32_t u, std::uint32_t v) const { return u != v && edges[pair_id(u, v)]; }
};

/// Rooted graph (R, F). Labels 0..r-1 are the roots x_1..x_r, labels
/// r..r+s-1 the non-roots y_1..y_s.
class RootedGraph {
 public:
  RootedGraph(std::uint32_t r, std::uint32_t s, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
              std::optional<GraphSpec> origin = std::nullopt)
      : r_(r), s_(s), origin_(origin) {
    if (s == 0) throw InvalidArgument("rooted graph needs at least one non-root vertex");
    const std::uint32_t order = r + s;
    adj_.assign(std::size_t{order} * order, 0);
    for (auto [a, b] : edges) {
      if (a >= order || b >= order || a == b) throw InvalidArgument("rooted graph: bad edge");
      if (a > b) std::swap(a, b);
      if (adj_[a * order + b]) throw InvalidArgument("rooted graph: repeated edge");
      adj_[a * order + b] = adj_[b * order + a] = 1;
      edges_.emplace_back(a, b);
      if (b >= r) ++t_;  // an edge is induced by R only if both ends are roots
    }
    std::sort(edges_.begin(), edges_.end());
  }

  std::uint32_t roots() const { return r_; }
  std::uint32_t non_roots() const { return s_; }
  std::uint32_t order() const { return r_ + s_; }
  std::size_t t() const { return t_; }
  double density() const { return static_cast<double>(t_) / static_cast<double>(s_); }
  bool has_edge(std::uint32_t a, std::uint32_t b) const { return adj_[a * order() + b] != 0; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }
  const std::optional<GraphSpec>& origin() const { return origin_; }

 private:
  std::uint32_t r_;
  std::uint32_t s_;
  std::size_t t_ = 0;
  std::vector<std::uint8_t> adj_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::optional<GraphSpec> origin_;
};

/// (R_1, G) for root_count 2, (R_2, G) for 3, with {x_1, x_2} an edge of G.
/// For K_{a,b}: x_1 on the a side, x_2 on the b side, and x_3 (when present)
/// on the b side as well, i.e. adjacent to x_1.
inline RootedGraph build_rooted(const GraphSpec& spec, std::uint32_t root_count) {
  if (root_count != 2 && root_count != 3) throw InvalidArgument("root count must be 2 or 3");
  const std::uint32_t vg = spec.vertex_count();
  if (vg < 3) throw InvalidArgument("rooted graphs need v_G >= 3");
  if (vg < 4 && root_count == 3) {
    throw InvalidArgument("(R_2, G) needs v_G >= 4 so that |S| > 0");
  }
  std::vector<std::uint32_t> label(vg);  // original vertex -> rooted label
  std::vector<std::pair<std::uint32_t, std::uint32_t>> original_edges;
  if (spec.is_complete()) {
    for (std::uint32_t v = 0; v < vg; ++v) label[v] = v;
    for (std::uint32_t u = 0; u < vg; ++u)
      for (std::uint32_t v = u + 1; v < vg; ++v) original_edges.emplace_back(u, v);
  } else {
    // Original ids: side A = 0..a-1, side B = a..a+b-1.
    const std::uint32_t a = spec.side_a();
    const std::uint32_t b = spec.side_b();
    if (root_count == 3 && b < 2) throw InvalidArgument("(R_2, K_{a,b}) needs b >= 2");
    std::vector<std::uint32_t> order;
    order.push_back(0);      // x_1
    order.push_back(a);      // x_2
    if (root_count == 3) order.push_back(a + 1);  // x_3
    for (std::uint32_t v = 1; v < a; ++v) order.push_back(v);
    for (std::uint32_t v = a + (root_count == 3 ? 2 : 1); v < a + b; ++v) order.push_back(v);
    for (std::uint32_t i = 0; i < vg; ++i) label[order[i]] = i;
    for (std::uint32_t u = 0; u < a; ++u)
      for (std::uint32_t v = a; v < a + b; ++v) original_edges.emplace_back(u, v);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (auto [u, v] : original_edges) edges.emplace_back(label[u], label[v]);
  return RootedGraph(root_count, vg - root_count, std::move(edges), spec);
}

inline constexpr std::uint32_t kDefaultBalanceBudget = 20;  // max s

/// True iff no induced F' ⊇ R with at least one non-root is denser than F.
/// Densities are compared as cross-multiplied integers.
inline bool is_balanced(const RootedGraph& rg, std::uint32_t budget = kDefaultBalanceBudget) {
  const std::uint32_t r = rg.roots();
  const std::uint32_t s = rg.non_roots();
  if (s > budget) {
    throw BudgetExceeded("is_balanced: 2^" + std::to_string(s) + " subsets exceed budget 2^" +
                         std::to_string(budget));
  }
  const std::uint64_t full_t = rg.t();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
    std::uint64_t t = 0;
    std::uint64_t size = 0;
    for (std::uint32_t j = 0; j < s; ++j) {
      if (!((mask >> j) & 1)) continue;
      ++size;
      const std::uint32_t y = r + j;
      for (std::uint32_t x = 0; x < r; ++x) t += rg.has_edge(x, y);
      for (std::uint32_t i = 0; i < j; ++i)
        if ((mask >> i) & 1) t += rg.has_edge(r + i, y);
    }
    if (t * s > full_t * size) return false;
  }
  return true;
}

struct RootEmbedding {
  std::vector<std::uint32_t> vertices;  // x_1', ..., x_r'
};

/// Extension counts of (R, F) over R' in a sampled graph.
///
/// A labeling maps y_1..y_s injectively into V(K_N) \ R' such that every
/// edge of F not inside R lands on a sample edge. Its image F' is the
/// extension; edges among R' are never looked at.
struct ExtensionCount {
  std::uint64_t subgraphs = 0;    // distinct extensions F' (the Z of the identity deg_q(e_1) = Z_1)
  std::uint64_t vertex_sets = 0;  // distinct S' carrying at least one extension
  std::uint64_t labeled = 0;      // valid labelings
};

inline ExtensionCount count_extensions(const RootedGraph& rg, const RootEmbedding& re,
                                       const SampledGraph& g) {
  const std::uint32_t r = rg.roots();
  const std::uint32_t s = rg.non_roots();
  const std::uint32_t big_n = g.order;
  if (re.vertices.size() != r) throw InvalidArgument("root embedding size differs from |R|");
  std::vector<std::uint8_t> used(big_n, 0);
  for (auto x : re.vertices) {
    if (x >= big_n) throw InvalidArgument("root embedding vertex out of range");
    if (used[x]) throw InvalidArgument("root embedding vertices must be distinct");
    used[x] = 1;
  }
  if (big_n - r < s) throw InvalidArgument("N - r < s: no room for the non-roots");

  std::vector<std::uint32_t> image(s);
  std::set<std::vector<VertexId>> subgraphs;
  std::set<std::vector<std::uint32_t>> vertex_sets;
  ExtensionCount out;

  auto record = [&] {
    ++out.labeled;
    std::vector<VertexId> f;
    f.reserve(rg.t());
    for (auto [a, b] : rg.edges()) {
      if (b < r) continue;
      const std::uint32_t ua = a < r ? re.vertices[a] : image[a - r];
      f.push_back(pair_id(ua, image[b - r]));
    }
    std::sort(f.begin(), f.end());
    subgraphs.insert(std::move(f));
    std::vector<std::uint32_t> set(image.begin(), image.end());
    std::sort(set.begin(), set.end());
    vertex_sets.insert(std::move(set));
  };

  auto extend = [&](auto&& self, std::uint32_t j) -> void {
    if (j == s) {
      record();
      return;
    }
    const std::uint32_t y = r + j;
    for (std::uint32_t w = 0; w < big_n; ++w) {
      if (used[w]) continue;
      bool ok = true;
      for (std::uint32_t x = 0; x < r && ok; ++x)
        if (rg.has_edge(x, y) && !g.has(re.vertices[x], w)) ok = false;
      for (std::uint32_t i = 0; i < j && ok; ++i)
        if (rg.has_edge(r + i, y) && !g.has(image[i], w)) ok = false;
      if (!ok) continue;
      used[w] = 1;
      image[j] = w;
      self(self, j + 1);
      used[w] = 0;
    }
  };
  extend(extend, 0);
  out.subgraphs = subgraphs.size();
  out.vertex_sets = vertex_sets.size();
  return out;
}

/// E(Z) for the rooted graphs produced by build_rooted: (number of
/// extensions in K_N) * q^t, with the K_N count in closed form.
inline double expected_extensions(const RootedGraph& rg, std::uint32_t big_n, double q) {
  if (!rg.origin()) throw InvalidArgument("expected_extensions: rooted graph has no known family");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0, 1]");
  const GraphSpec& spec = *rg.origin();
  const std::uint32_t r = rg.roots();
  double count = 0.0;
  if (spec.is_complete()) {
    count = static_cast<double>(binomial(big_n - r, spec.vertex_count() - r));
  } else {
    const std::uint32_t a = spec.side_a();
    const std::uint32_t b = spec.side_b();
    // x_1 fixed on side A; x_2 (and x_3) fixed on side B.
    const std::uint32_t b_roots = r - 1;
    count = static_cast<double>(binomial(big_n - r, a - 1)) *
            static_cast<double>(binomial(big_n - r - (a - 1), b - b_roots));
  }
  return count * std::pow(q, static_cast<double>(rg.t()));
}

namespace detail {

inline SampledGraph sample_graph(std::uint32_t big_n, const PercolationSample& s) {
  return {big_n, s.kept};
}

}  // namespace detail

struct ZIdentityReport {
  std::string graph;
  std::uint32_t big_n = 0;
  double q = 0.0;
  std::uint64_t conditioned = 0;  // trials with e_1 kept
  std::uint64_t trials_used = 0;
  std::uint64_t mismatches = 0;   // Z_1 != deg_q(e_1)
  std::uint32_t labelings_summed = 1;
  MomentSums z1;
  double expected = 0.0;
  double deviation_in_stderr = 0.0;
  bool expectation_ok = false;  // |mean - E| <= 4 stderr
};

/// Percolates H_G at q until cfg.trials trials have the root edge e_1 = {0, 1}
/// kept, and on each of those compares Z_1 with deg_q(e_1). For K_{a,b} with
/// a != b the copies through e_1 split by which endpoint lies on the a side,
/// so Z_1 is summed over both root labelings.
inline ZIdentityReport z_identity_check(const GraphSpec& spec, std::uint32_t big_n, double q,
                                        const TrialConfig& cfg,
                                        std::uint64_t budget = kDefaultGeneratorBudget) {
  cfg.validate();
  require_open_unit(q, "q");
  if (spec.vertex_count() < 3) throw InvalidArgument("z_identity_check needs v_G >= 3");
  const Hypergraph hg = subgraph_hypergraph(spec, big_n, budget);
  const RootedGraph rg = build_rooted(spec, 2);
  const VertexId e1 = pair_id(0, 1);
  std::vector<RootEmbedding> labelings{{{0, 1}}};
  if (!spec.is_complete() && spec.side_a() != spec.side_b()) labelings.push_back({{1, 0}});

  ZIdentityReport rep;
  rep.graph = spec.name();
  rep.big_n = big_n;
  rep.q = q;
  rep.labelings_summed = static_cast<std::uint32_t>(labelings.size());
  rep.expected = static_cast<double>(labelings.size()) * expected_extensions(rg, big_n, q);

  struct Outcome {
    std::uint8_t conditioned = 0;
    std::uint64_t z = 0;
    std::uint64_t deg = 0;
  };
  const std::uint64_t max_trials = cfg.trials * 1000 + 1000;
  std::uint64_t next = 0;
  while (rep.conditioned < cfg.trials && next < max_trials) {
    const std::uint64_t need = cfg.trials - rep.conditioned;
    const std::uint64_t batch =
        std::min<std::uint64_t>(max_trials - next, std::max<std::uint64_t>(64, 2 * need / q));
    const auto outcomes = map_trials(next, batch, cfg.workers, [&](std::uint64_t t) {
      Outcome o;
      const auto s = percolate(hg, q, CounterRng(cfg.seed, StreamDomain::kVertexOutcome, t));
      if (!s.kept[e1]) return o;
      o.conditioned = 1;
      const auto g = detail::sample_graph(big_n, s);
      for (const auto& l : labelings) o.z += count_extensions(rg, l, g).subgraphs;
      o.deg = s.deg[e1];
      return o;
    });
    for (const auto& o : outcomes) {
      ++rep.trials_used;
      ++next;
      if (!o.conditioned) continue;
      ++rep.conditioned;
      rep.z1.add(o.z);
      rep.mismatches += o.z != o.deg;
      if (rep.conditioned == cfg.trials) break;
    }
  }
  const double se = rep.z1.stderr_mean();
  const double diff = std::abs(rep.z1.mean() - rep.expected);
  rep.deviation_in_stderr = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY);
  rep.expectation_ok = diff <= 4.0 * se;
  return rep;
}

struct LemmaZInputs {
  double p = 0.0;
  double q = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;  // Γ
  double b = 1.0;
};

struct Lemma43Report {
  std::string graph;
  std::uint32_t big_n = 0;
  LemmaZInputs inputs;
  double cap = 0.0;        // max{2 q^{k-1} Δ, Γ}
  bool z2_applicable = false;  // v_G >= 4
  bool z2_triggered = false;   // p^{1/2} q^{k-3/2} Δ^2 n ln n >= m
  double z2_factor = 0.0;      // ln^-4 n
  std::uint64_t trials = 0;
  std::uint64_t z1_violations = 0;
  std::uint64_t z2_violations = 0;
  Interval z1_ci;
  Interval z2_ci;
  double threshold = 0.0;  // 3 e^{-b λ^2}
  bool z1_supported = false;
  bool z2_supported = false;
  MomentSums z1;
  MomentSums z2;
};

/// Monte Carlo over G(N, q) and uniformly random root embeddings: how often
/// Z_1 exceeds the degree cap and, when the trigger inequality holds, how
/// often Z_2 > Z_1 ln^-4 n.
inline Lemma43Report lemma43_check(const GraphSpec& spec, std::uint32_t big_n,
                                   const LemmaZInputs& in, const TrialConfig& cfg,
                                   std::uint64_t budget = kDefaultGeneratorBudget) {
  cfg.validate();
  require_open_unit(in.q, "q");
  require_open_unit(in.p, "p");
  if (in.p > in.q) throw InvalidArgument("lemma43_check needs p <= q");
  if (!(in.lambda > 0.0 && in.gamma > 0.0 && in.b > 0.0))
    throw InvalidArgument("lemma43_check needs lambda, Gamma, b > 0");
  const Hypergraph hg = subgraph_hypergraph(spec, big_n, budget);
  const auto prof = degree_profile(hg);
  const double k = static_cast<double>(hg.uniformity());
  const double n = static_cast<double>(hg.num_vertices());
  const double m = static_cast<double>(hg.num_edges());
  const double delta = static_cast<double>(prof.max_deg);
  const double ln = std::log(n);

  Lemma43Report rep;
  rep.graph = spec.name();
  rep.big_n = big_n;
  rep.inputs = in;
  rep.cap = std::max(2.0 * std::pow(in.q, k - 1) * delta, in.gamma);
  rep.z2_applicable = spec.vertex_count() >= 4 && big_n >= spec.vertex_count();
  rep.z2_triggered = std::sqrt(in.p) * std::pow(in.q, k - 1.5) * delta * delta * n * ln >= m;
  rep.z2_factor = 1.0 / std::pow(ln, 4);
  rep.threshold = 3.0 * std::exp(-in.b * in.lambda * in.lambda);
  rep.trials = cfg.trials;

  const RootedGraph r1 = build_rooted(spec, 2);
  const std::optional<RootedGraph> r2 =
      rep.z2_applicable ? std::optional<RootedGraph>(build_rooted(spec, 3)) : std::nullopt;

  struct Acc {
    std::uint64_t v1 = 0, v2 = 0;
    MomentSums z1, z2;
  };
  const Acc acc = reduce_trials(
      0, cfg.trials, cfg.workers, [] { return Acc{}; },
      [&](std::uint64_t t, Acc& a) {
        const auto s = percolate(hg, in.q, CounterRng(cfg.seed, StreamDomain::kVertexOutcome, t));
        const auto g = detail::sample_graph(big_n, s);
        SequentialRng pick(cfg.seed, StreamDomain::kRootEmbedding, t);
        std::vector<std::uint32_t> roots;
        while (roots.size() < 3) {
          const auto v = static_cast<std::uint32_t>(pick.below(big_n));
          if (std::find(roots.begin(), roots.end(), v) == roots.end()) roots.push_back(v);
        }
        const auto z1 = count_extensions(r1, {{roots[0], roots[1]}}, g).subgraphs;
        a.z1.add(z1);
        a.v1 += static_cast<double>(z1) > rep.cap;
        if (r2) {
          const auto z2 = count_extensions(*r2, {roots}, g).subgraphs;
          a.z2.add(z2);
          if (rep.z2_triggered) a.v2 += static_cast<double>(z2) > static_cast<double>(z1) * rep.z2_factor;
        }
      },
      [](Acc& into, const Acc& from) {
        into.v1 += from.v1;
        into.v2 += from.v2;
        into.z1.merge(from.z1);
        into.z2.merge(from.z2);
      });
  rep.z1_violations = acc.v1;
  rep.z2_violations = acc.v2;
  rep.z1 = acc.z1;
  rep.z2 = acc.z2;
  rep.z1_ci = clopper_pearson(acc.v1, cfg.trials, cfg.alpha);
  rep.z2_ci = clopper_pearson(acc.v2, cfg.trials, cfg.alpha);
  rep.z1_supported = rep.z1_ci.high <= rep.threshold;
  rep.z2_supported = rep.z2_ci.high <= rep.threshold;
  return rep;
}

}  // namespace hgconc
