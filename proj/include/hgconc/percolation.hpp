#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hgconc/core.hpp"
#include "hgconc/error.hpp"
#include "hgconc/oracle.hpp"
#include "hgconc/rng.hpp"

namespace hgconc {

using VertexSet = std::vector<std::uint8_t>;  // membership bitmap, one byte per vertex

/// One realization of V_q and the induced sub-hypergraph H_q.
struct PercolationSample {
  double q = 0.0;
  VertexSet kept;
  std::vector<EdgeId> edges;       // surviving edge ids, ascending
  std::size_t x = 0;               // |E_q|
  std::vector<std::uint32_t> deg;  // deg_q(v), 0 for dropped vertices
};

namespace detail {

// Fills edges/x/deg of `s` from s.kept. `candidates` limits the edge scan
// (the previous round's survivors); empty span means all edges.
inline void induce(const Hypergraph& h, PercolationSample& s,
                   std::optional<std::span<const EdgeId>> candidates = std::nullopt) {
  s.deg.assign(h.num_vertices(), 0);
  s.edges.clear();
  auto visit = [&](EdgeId e) {
    const auto pins = h.edge(e);
    for (VertexId v : pins)
      if (!s.kept[v]) return;
    s.edges.push_back(e);
    for (VertexId v : pins) ++s.deg[v];
  };
  if (candidates) {
    for (EdgeId e : *candidates) visit(e);
  } else {
    for (EdgeId e = 0; e < h.num_edges(); ++e) visit(e);
  }
  s.x = s.edges.size();
}

}  // namespace detail

/// Builds the sample induced by an explicit vertex set (test hook and the
/// recompute path of the toggle audit).
inline PercolationSample induced_sample(const Hypergraph& h, VertexSet kept, double q = 1.0) {
  if (kept.size() != h.num_vertices()) throw InvalidArgument("vertex bitmap size mismatch");
  PercolationSample s;
  s.q = q;
  s.kept = std::move(kept);
  detail::induce(h, s);
  return s;
}

/// Keeps each vertex independently with probability q. Vertex v's fate is
/// rng.uniform(round, v) < q, so the result depends only on the stream
/// coordinates, never on traversal order.
inline PercolationSample percolate(const Hypergraph& h, double q, const CounterRng& rng,
                                   std::uint32_t round = 0) {
  require_open_unit(q, "q");
  PercolationSample s;
  s.q = q;
  s.kept.resize(h.num_vertices());
  for (VertexId v = 0; v < h.num_vertices(); ++v) s.kept[v] = rng.uniform(round, v) < q;
  detail::induce(h, s);
  return s;
}

/// Maximum co-degree among surviving vertices of a sample, computed from the
/// surviving edges only.
inline std::size_t surviving_max_codegree(const Hypergraph& h, const PercolationSample& s) {
  const std::size_t n = h.num_vertices();
  std::vector<std::uint8_t> alive_edge(h.num_edges(), 0);
  for (EdgeId e : s.edges) alive_edge[e] = 1;
  std::vector<std::uint32_t> count(n, 0);
  std::vector<VertexId> touched;
  std::size_t best = 0;
  for (VertexId u = 0; u < n; ++u) {
    if (s.deg[u] < 2 || s.deg[u] <= best) continue;  // codeg(u,.) <= deg(u)
    for (EdgeId e : h.incident(u)) {
      if (!alive_edge[e]) continue;
      for (VertexId w : h.edge(e)) {
        if (w == u) continue;
        if (count[w]++ == 0) touched.push_back(w);
      }
    }
    for (VertexId w : touched) {
      best = std::max<std::size_t>(best, count[w]);
      count[w] = 0;
    }
    touched.clear();
  }
  // A single surviving edge still gives co-degree 1 between its vertices.
  if (best == 0 && !s.edges.empty() && h.uniformity() >= 2) best = 1;
  return best;
}

struct EpsilonRange {
  double min = 1e-6;
  double max = 1e-3;

  static constexpr EpsilonRange paper() { return {1e-6, 1e-3}; }
};

/// (epsilon, I) with epsilon^I = p.
struct ExposureSchedule {
  double p = 0.0;
  double epsilon = 0.0;
  std::uint32_t rounds = 0;
  EpsilonRange range;
  bool paper_mode = false;
};

namespace detail {

inline bool within(double x, double lo, double hi, double rel = 1e-12) {
  return x >= lo * (1.0 - rel) && x <= hi * (1.0 + rel);
}

}  // namespace detail

/// I = max(1, floor(ln p / ln eps_max)), epsilon = p^(1/I); the range (and
/// in paper mode I <= ln n) is then checked, not solved for. `forced_rounds`
/// replaces the rule for I. Throws Infeasible when the checks fail.
inline ExposureSchedule build_schedule(double p, std::size_t n, EpsilonRange range,
                                       bool paper_mode,
                                       std::optional<std::uint32_t> forced_rounds = std::nullopt) {
  require_open_unit(p);
  if (!(range.min > 0.0 && range.min <= range.max && range.max < 1.0)) {
    throw InvalidArgument("epsilon range must satisfy 0 < min <= max < 1");
  }
  if (paper_mode && (range.min != 1e-6 || range.max != 1e-3)) {
    throw InvalidArgument("paper mode fixes the epsilon range to [1e-6, 1e-3]");
  }
  if (!(p <= range.max * (1.0 + 1e-12))) {
    throw Infeasible("p = " + std::to_string(p) + " exceeds eps_max = " +
                     std::to_string(range.max));
  }

  std::uint32_t rounds = 1;
  if (forced_rounds) {
    if (*forced_rounds < 1) throw InvalidArgument("forced round count must be >= 1");
    rounds = *forced_rounds;
  } else {
    // The small nudge keeps exact powers (ln 1e-6 / ln 1e-3 = 2) from
    // flooring to one less.
    const double ratio = std::log(p) / std::log(range.max);
    rounds = static_cast<std::uint32_t>(std::max(1.0, std::floor(ratio + 1e-9)));
  }
  const double eps = std::pow(p, 1.0 / rounds);
  if (!detail::within(eps, range.min, range.max)) {
    throw Infeasible("epsilon = " + std::to_string(eps) + " (I = " + std::to_string(rounds) +
                     ") falls outside [" + std::to_string(range.min) + ", " +
                     std::to_string(range.max) + "]");
  }
  if (paper_mode && n >= 1 && static_cast<double>(rounds) > std::log(static_cast<double>(n))) {
    throw Infeasible("I = " + std::to_string(rounds) + " exceeds ln n = " +
                     std::to_string(std::log(static_cast<double>(n))));
  }
  return {p, eps, rounds, range, paper_mode};
}

/// State after i exposure rounds (V_i, H_i).
struct RoundState {
  std::uint32_t round = 0;
  PercolationSample sample;  // kept = V_i, x = X_i, deg = deg_i
  std::uint64_t y = 0;       // sum_v deg_i(v)^2
  bool eq_iq = false;        // p^(1/2) eps^((k-3/2)i) Delta^2 n ln n >= m
  double eta = 1.0;          // k ln^-3 n if eq_iq else 1
};

inline std::uint64_t sum_of_squares(std::span<const std::uint32_t> deg) {
  std::uint64_t y = 0;
  for (auto d : deg) y += std::uint64_t{d} * d;
  return y;
}

namespace detail {

inline double ln_n(std::size_t n) { return std::log(static_cast<double>(n)); }

inline bool exposure_inequality(double p, double eps, std::uint32_t i, std::size_t k,
                                std::size_t max_deg, std::size_t n, std::size_t m) {
  const double lhs = std::sqrt(p) * std::pow(eps, (static_cast<double>(k) - 1.5) * i) *
                     static_cast<double>(max_deg) * static_cast<double>(max_deg) *
                     static_cast<double>(n) * ln_n(n);
  return lhs >= static_cast<double>(m);
}

inline void annotate(RoundState& st, const ExposureSchedule& sched, const Hypergraph& h,
                     std::size_t max_deg) {
  const std::size_t n = h.num_vertices();
  const std::size_t k = h.uniformity();
  st.y = sum_of_squares(st.sample.deg);
  st.eq_iq = exposure_inequality(sched.p, sched.epsilon, st.round, k, max_deg, n, h.num_edges());
  st.eta = st.eq_iq ? static_cast<double>(k) / std::pow(ln_n(n), 3) : 1.0;
}

}  // namespace detail

/// V_0 = V; V_{i+1} keeps each vertex of V_i with probability epsilon, using
/// rng.uniform(i, v). Returns the I+1 states i = 0..I. `max_deg` is Δ of h.
inline std::vector<RoundState> run_exposure(const Hypergraph& h, const ExposureSchedule& sched,
                                            const CounterRng& rng, std::size_t max_deg) {
  std::vector<RoundState> states;
  states.reserve(sched.rounds + 1);

  RoundState first;
  first.round = 0;
  first.sample.q = 1.0;
  first.sample.kept.assign(h.num_vertices(), 1);
  detail::induce(h, first.sample);
  detail::annotate(first, sched, h, max_deg);
  states.push_back(std::move(first));

  for (std::uint32_t i = 0; i < sched.rounds; ++i) {
    const RoundState& prev = states.back();
    RoundState next;
    next.round = i + 1;
    next.sample.q = std::pow(sched.epsilon, static_cast<double>(i + 1));
    next.sample.kept.assign(h.num_vertices(), 0);
    for (VertexId v = 0; v < h.num_vertices(); ++v) {
      if (prev.sample.kept[v]) next.sample.kept[v] = rng.uniform(i, v) < sched.epsilon;
    }
    detail::induce(h, next.sample, std::span<const EdgeId>(prev.sample.edges));
    detail::annotate(next, sched, h, max_deg);
    states.push_back(std::move(next));
  }
  return states;
}

inline std::vector<RoundState> run_exposure(const Hypergraph& h, const ExposureSchedule& sched,
                                            const CounterRng& rng) {
  return run_exposure(h, sched, rng, degree_profile(h).max_deg);
}

struct LemmaParams {
  double p = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;  // Γ
};

/// Preconditions (i)-(iv) at one round, with the quantities they compare.
struct PreconditionReport {
  std::uint32_t round = 0;
  // (i)
  bool x_window_holds = false;
  double x_center = 0.0;
  double x_radius = 0.0;
  std::size_t x_observed = 0;
  // (ii)
  bool deg_sq_holds = false;
  double deg_sq_bound = 0.0;
  std::uint64_t y_observed = 0;
  // (iii)
  bool deg_cap_holds = false;
  double deg_cap = 0.0;
  std::size_t max_deg_observed = 0;
  // (iv): w ranges over surviving vertices of positive degree; the literal
  // reading lets w range over all of V_i, isolated survivors included.
  bool eq_iq = false;
  bool codeg_holds = false;
  bool codeg_holds_literal = false;
  std::size_t max_codeg_observed = 0;
  std::size_t min_positive_deg = 0;
  std::size_t min_deg_literal = 0;
  double ln_inv3 = 0.0;
  // deviation radii of the two consequences, and max_v of the a_v bound
  double t1 = 0.0;
  double t2 = 0.0;
  double lipschitz_max = 0.0;

  bool all_hold() const { return x_window_holds && deg_sq_holds && deg_cap_holds && codeg_holds; }
};

/// deg_i(v)^2 + 4 sum_{u != v} codeg_i(u,v) deg_i(u). The sum is taken edge
/// by edge: each surviving edge through v contributes deg_i(u) once for every
/// other vertex u it contains.
inline double lipschitz_bound(const Hypergraph& h, const RoundState& st, VertexId v) {
  if (v >= h.num_vertices() || !st.sample.kept[v]) {
    throw InvalidArgument("lipschitz_bound: vertex " + std::to_string(v) + " is not in V_i");
  }
  const auto& s = st.sample;
  double acc = 0.0;
  for (EdgeId e : h.incident(v)) {
    const auto pins = h.edge(e);
    bool alive = true;
    for (VertexId u : pins) alive = alive && s.kept[u];
    if (!alive) continue;
    for (VertexId u : pins)
      if (u != v) acc += s.deg[u];
  }
  const double d = s.deg[v];
  return d * d + 4.0 * acc;
}

inline PreconditionReport check_preconditions(const Hypergraph& h, const DegreeProfile& stats,
                                              const ExposureSchedule& sched,
                                              const RoundState& st, const LemmaParams& params) {
  const std::size_t n = h.num_vertices();
  if (st.sample.kept.size() != n || st.sample.deg.size() != n || stats.deg.size() != n) {
    throw InvalidArgument("check_preconditions: state or profile does not match the hypergraph");
  }
  for (EdgeId e : st.sample.edges) {
    if (e >= h.num_edges()) throw InvalidArgument("check_preconditions: edge id out of range");
  }
  require_open_unit(params.p);

  const double k = static_cast<double>(h.uniformity());
  const double m = static_cast<double>(h.num_edges());
  const double nd = static_cast<double>(n);
  const double ln = std::log(nd);
  const double i = st.round;
  const double p = params.p;
  const double eps = sched.epsilon;
  const double lam = params.lambda;
  const double delta = static_cast<double>(stats.max_deg);
  const double pkm = std::pow(p, k) * m;

  PreconditionReport r;
  r.round = st.round;

  r.x_center = std::pow(eps, k * i) * m;
  r.x_radius = i / std::sqrt(pkm) * std::pow(eps, k * i) * m +
               lam * std::sqrt(std::pow(eps, (k + 1) * i) * m / p);
  r.x_observed = st.sample.x;
  r.x_window_holds = std::abs(static_cast<double>(r.x_observed) - r.x_center) <= r.x_radius;

  r.deg_sq_bound = std::pow(eps, (2 * k - 1) * i) * delta * delta * nd *
                       (1.0 + 3.0 * i / (ln * ln)) +
                   6.0 * k * std::pow(eps, (k + 0.5) * i) * m / std::sqrt(p);
  r.y_observed = sum_of_squares(st.sample.deg);
  r.deg_sq_holds = static_cast<double>(r.y_observed) <= r.deg_sq_bound;

  r.deg_cap = std::max(2.0 * std::pow(eps, (k - 1) * i) * delta, params.gamma);
  std::size_t min_pos = std::numeric_limits<std::size_t>::max();
  std::size_t min_all = std::numeric_limits<std::size_t>::max();
  for (VertexId v = 0; v < n; ++v) {
    if (!st.sample.kept[v]) continue;
    const std::size_t d = st.sample.deg[v];
    r.max_deg_observed = std::max(r.max_deg_observed, d);
    min_all = std::min(min_all, d);
    if (d > 0) min_pos = std::min(min_pos, d);
  }
  r.deg_cap_holds = static_cast<double>(r.max_deg_observed) <= r.deg_cap;

  r.eq_iq = detail::exposure_inequality(p, eps, st.round, h.uniformity(), stats.max_deg, n,
                                        h.num_edges());
  r.ln_inv3 = 1.0 / (ln * ln * ln);
  r.max_codeg_observed = surviving_max_codegree(h, st.sample);
  r.min_positive_deg = min_pos == std::numeric_limits<std::size_t>::max() ? 0 : min_pos;
  r.min_deg_literal = min_all == std::numeric_limits<std::size_t>::max() ? 0 : min_all;
  if (r.eq_iq) {
    // No positive-degree survivor means no surviving edge, hence codeg 0.
    r.codeg_holds = r.min_positive_deg == 0 ||
                    static_cast<double>(r.max_codeg_observed) <=
                        static_cast<double>(r.min_positive_deg) * r.ln_inv3;
    r.codeg_holds_literal = min_all == std::numeric_limits<std::size_t>::max() ||
                            static_cast<double>(r.max_codeg_observed) <=
                                static_cast<double>(r.min_deg_literal) * r.ln_inv3;
  } else {
    r.codeg_holds = true;
    r.codeg_holds_literal = true;
  }

  r.t1 = std::pow(eps, k * (i + 1)) * m / std::sqrt(pkm) +
         (1.0 - eps) * lam * std::sqrt(std::pow(eps, (k + 1) * (i + 1)) * m / p);
  r.t2 = std::pow(eps, (2 * k - 1) * (i + 1)) * delta * delta * nd / (ln * ln) +
         k * std::pow(eps, (k + 0.5) * (i + 1)) * m / std::sqrt(p);

  for (VertexId v = 0; v < n; ++v) {
    if (st.sample.kept[v]) r.lipschitz_max = std::max(r.lipschitz_max, lipschitz_bound(h, st, v));
  }
  return r;
}

/// Effect of flipping one vertex's outcome in the transition V_i -> V_{i+1},
/// found by rebuilding H_{i+1} from scratch with the flipped bit.
struct ToggleEffect {
  std::int64_t delta_x = 0;
  std::int64_t delta_y = 0;
};

inline ToggleEffect toggle_effect(const Hypergraph& h, const RoundState& before,
                                  const RoundState& after, VertexId v) {
  if (!before.sample.kept[v]) throw InvalidArgument("toggle_effect: vertex not in V_i");
  VertexSet flipped = after.sample.kept;
  flipped[v] = flipped[v] ? 0 : 1;
  const auto alt = induced_sample(h, std::move(flipped));
  return {static_cast<std::int64_t>(alt.x) - static_cast<std::int64_t>(after.sample.x),
          static_cast<std::int64_t>(sum_of_squares(alt.deg)) -
              static_cast<std::int64_t>(sum_of_squares(after.sample.deg))};
}

}  // namespace hgconc
