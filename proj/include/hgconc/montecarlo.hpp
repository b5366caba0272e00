#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hgconc/bounds.hpp"
#include "hgconc/core.hpp"
#include "hgconc/error.hpp"
#include "hgconc/oracle.hpp"
#include "hgconc/parallel.hpp"
#include "hgconc/percolation.hpp"
#include "hgconc/rng.hpp"
#include "hgconc/stats.hpp"

namespace hgconc {

struct TrialConfig {
  std::uint64_t seed = 0;
  std::uint64_t trials = 10'000;
  double alpha = 0.01;
  unsigned workers = 1;

  void validate() const {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  }
};

// Sample mean and standard error from integer first/second moment sums.
struct MomentSums {
  std::uint64_t count = 0;
  unsigned __int128 sum = 0;
  unsigned __int128 sum_sq = 0;

  void add(std::uint64_t x) {
    ++count;
    sum += x;
    sum_sq += static_cast<unsigned __int128>(x) * x;
  }
  void merge(const MomentSums& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return count ? static_cast<double>(sum) / static_cast<double>(count) : 0.0; }
  double variance() const {
    if (count < 2) return 0.0;
    const double c = static_cast<double>(count);
    const double mu = mean();
    return std::max(0.0, (static_cast<double>(sum_sq) - c * mu * mu) / (c - 1.0));
  }
  double stderr_mean() const {
    return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

// ---------------------------------------------------------------------------
// Tail probabilities

struct TailEstimate {
  double threshold = 0.0;
  std::uint64_t exceed = 0;
  std::uint64_t trials = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

struct TailReport {
  double expectation = 0.0;                 // p^k m, the centre
  std::vector<std::uint64_t> histogram;     // histogram[x] = #trials with X = x
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  std::vector<TailEstimate> tails;
};

/// Histogram of X over cfg.trials independent percolations at p.
inline std::vector<std::uint64_t> sample_histogram(const Hypergraph& h, double p,
                                                   const TrialConfig& cfg) {
  cfg.validate();
  require_open_unit(p);
  return reduce_trials(
      0, cfg.trials, cfg.workers,
      [&] { return std::vector<std::uint64_t>(h.num_edges() + 1, 0); },
      [&](std::uint64_t t, std::vector<std::uint64_t>& hist) {
        const auto s = percolate(h, p, CounterRng(cfg.seed, StreamDomain::kVertexOutcome, t));
        ++hist[s.x];
      },
      [](std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
        for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
      });
}

inline TailEstimate tail_from_histogram(const std::vector<std::uint64_t>& hist, double center,
                                        double threshold, double alpha) {
  TailEstimate te;
  te.threshold = threshold;
  for (std::size_t x = 0; x < hist.size(); ++x) {
    te.trials += hist[x];
    if (std::abs(static_cast<double>(x) - center) >= threshold) te.exceed += hist[x];
  }
  te.point = static_cast<double>(te.exceed) / static_cast<double>(te.trials);
  const auto ci = clopper_pearson(te.exceed, te.trials, alpha);
  te.ci_low = ci.low;
  te.ci_high = ci.high;
  return te;
}

/// For each threshold t, the fraction of trials with |X - p^k m| >= t and its
/// exact binomial interval at level 1 - alpha.
inline TailReport estimate_tail(const Hypergraph& h, double p, const std::vector<double>& thresholds,
                                const TrialConfig& cfg) {
  for (double t : thresholds) {
    if (!(t > 0.0)) throw InvalidArgument("tail thresholds must be > 0");
  }
  TailReport r;
  r.expectation = exact_expectation(h, p);
  r.histogram = sample_histogram(h, p, cfg);
  MomentSums ms;
  for (std::size_t x = 0; x < r.histogram.size(); ++x) {
    ms.count += r.histogram[x];
    ms.sum += static_cast<unsigned __int128>(x) * r.histogram[x];
    ms.sum_sq += static_cast<unsigned __int128>(x) * x * r.histogram[x];
  }
  r.sample_mean = ms.mean();
  r.sample_variance = ms.variance();
  for (double t : thresholds) r.tails.push_back(tail_from_histogram(r.histogram, r.expectation, t, cfg.alpha));
  return r;
}

// ---------------------------------------------------------------------------
// (P4) evidence

struct P4GridPoint {
  double q = 0.0;
  double deg_cap = 0.0;             // max{2 q^{k-1} Δ, Γ}
  bool codeg_triggered = false;     // p^{1/2} q^{k-3/2} Δ^2 n ln n >= m
  std::size_t max_deg_seen = 0;
  std::uint64_t deg_violations = 0;
  std::uint64_t codeg_violations = 0;          // w over positive-degree survivors
  std::uint64_t codeg_violations_literal = 0;  // w over all survivors
  std::uint64_t violations = 0;                // trials with any violation
  std::uint64_t trials = 0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  bool supported = false;  // ci_high <= e^{-b λ^2}
};

struct P4Evidence {
  double threshold = 0.0;  // e^{-b λ^2}
  std::vector<P4GridPoint> grid;
  std::uint64_t violations = 0;
  bool supported = false;
  bool grid_within_range = false;

  P4Summary summary() const { return {grid.size(), grid_within_range, violations, supported}; }
};

/// Geometric grid of `points` values from p to q_max inclusive.
inline std::vector<double> default_q_grid(double p, std::size_t points = 8, double q_max = 0.9) {
  require_open_unit(p);
  if (points == 0) throw InvalidArgument("q grid needs at least one point");
  if (points == 1 || p >= q_max) return {p};
  std::vector<double> grid(points);
  const double ratio = std::log(q_max / p) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = p * std::exp(ratio * static_cast<double>(i));
  grid.back() = q_max;
  return grid;
}

inline P4Evidence verify_p4(const Hypergraph& h, const NicenessParams& params,
                            const std::vector<double>& q_grid, const TrialConfig& cfg) {
  params.validate();
  cfg.validate();
  if (q_grid.empty()) throw InvalidArgument("verify_p4: empty q grid");
  const auto prof = degree_profile(h);
  const double k = static_cast<double>(h.uniformity());
  const double n = static_cast<double>(h.num_vertices());
  const double m = static_cast<double>(h.num_edges());
  const double delta = static_cast<double>(prof.max_deg);
  const double ln = std::log(n);
  const double ln_inv3 = 1.0 / (ln * ln * ln);

  P4Evidence ev;
  ev.threshold = std::exp(-params.b * params.lambda * params.lambda);
  ev.grid_within_range = true;
  for (double q : q_grid) {
    require_open_unit(q, "q");
    if (q < params.p) ev.grid_within_range = false;

    P4GridPoint g;
    g.q = q;
    g.deg_cap = std::max(2.0 * std::pow(q, k - 1) * delta, params.gamma);
    g.codeg_triggered =
        std::sqrt(params.p) * std::pow(q, k - 1.5) * delta * delta * n * ln >= m;

    struct Acc {
      std::size_t max_deg = 0;
      std::uint64_t deg_v = 0, codeg_v = 0, codeg_lit = 0, any = 0;
    };
    const Acc acc = reduce_trials(
        0, cfg.trials, cfg.workers, [] { return Acc{}; },
        [&](std::uint64_t t, Acc& a) {
          const auto s = percolate(h, q, CounterRng(cfg.seed, StreamDomain::kVertexOutcome, t));
          std::size_t max_deg = 0;
          std::size_t min_pos = std::numeric_limits<std::size_t>::max();
          bool isolated_survivor = false;
          for (VertexId v = 0; v < h.num_vertices(); ++v) {
            if (!s.kept[v]) continue;
            max_deg = std::max<std::size_t>(max_deg, s.deg[v]);
            if (s.deg[v] > 0) {
              min_pos = std::min<std::size_t>(min_pos, s.deg[v]);
            } else {
              isolated_survivor = true;
            }
          }
          a.max_deg = std::max(a.max_deg, max_deg);
          const bool deg_bad = static_cast<double>(max_deg) > g.deg_cap;
          bool codeg_bad = false;
          bool codeg_bad_lit = false;
          if (g.codeg_triggered && !s.edges.empty()) {
            const double cd = static_cast<double>(surviving_max_codegree(h, s));
            codeg_bad = cd > static_cast<double>(min_pos) * ln_inv3;
            codeg_bad_lit = codeg_bad || (isolated_survivor && cd > 0.0);
          }
          a.deg_v += deg_bad;
          a.codeg_v += codeg_bad;
          a.codeg_lit += codeg_bad_lit;
          a.any += (deg_bad || codeg_bad);
        },
        [](Acc& into, const Acc& from) {
          into.max_deg = std::max(into.max_deg, from.max_deg);
          into.deg_v += from.deg_v;
          into.codeg_v += from.codeg_v;
          into.codeg_lit += from.codeg_lit;
          into.any += from.any;
        });
    g.max_deg_seen = acc.max_deg;
    g.deg_violations = acc.deg_v;
    g.codeg_violations = acc.codeg_v;
    g.codeg_violations_literal = acc.codeg_lit;
    g.violations = acc.any;
    g.trials = cfg.trials;
    const auto ci = clopper_pearson(g.violations, g.trials, cfg.alpha);
    g.ci_low = ci.low;
    g.ci_high = ci.high;
    g.supported = g.ci_high <= ev.threshold;
    ev.violations += g.violations;
    ev.grid.push_back(g);
  }
  ev.supported = std::all_of(ev.grid.begin(), ev.grid.end(),
                             [](const P4GridPoint& g) { return g.supported; });
  return ev;
}

// ---------------------------------------------------------------------------
// Sub-Gaussian constant

enum class VarianceSource { kExact, kPlugin };

struct SubGaussianPoint {
  double lambda = 0.0;
  TailEstimate tail;
  double constant = 0.0;          // -ln(ci_high) / λ^2
  bool lower_bound_only = false;  // zero exceedances: not used in the fit
};

struct SubGaussianFit {
  VarianceSource variance_source = VarianceSource::kExact;
  double variance = 0.0;
  // The plug-in sqrt(p^k m) stands in for sqrt(Var X) on the strength of
  // 0.5 E(X)^{1/2} < Var(X)^{1/2}; flagged because it is assumed, not checked.
  bool plugin_assumption = false;
  std::vector<SubGaussianPoint> points;
  double c_g = 0.0;
  std::size_t fitted_points = 0;
  bool feasible = false;
};

/// Conservative c_G: the smallest -ln(upper CI)/λ^2 over grid points that saw
/// at least one exceedance, so e^{-c_G λ^2} dominates every upper CI.
inline SubGaussianFit fit_subgaussian(const Hypergraph& h, double p,
                                      const std::vector<double>& lambdas, VarianceSource source,
                                      const TrialConfig& cfg,
                                      std::size_t variance_budget = kDefaultVariancePairBudget) {
  if (lambdas.empty()) throw InvalidArgument("fit_subgaussian: empty lambda grid");
  for (double l : lambdas)
    if (!(l > 0.0)) throw InvalidArgument("fit_subgaussian: lambdas must be > 0");
  SubGaussianFit fit;
  fit.variance_source = source;
  if (source == VarianceSource::kExact) {
    try {
      fit.variance = exact_variance(h, p, variance_budget);
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(std::string("variance unavailable: ") + e.what());
    }
  } else {
    fit.variance = exact_expectation(h, p);
    fit.plugin_assumption = true;
  }
  if (!(fit.variance > 0.0)) throw InvalidArgument("fit_subgaussian: variance is zero");
  const double sd = std::sqrt(fit.variance);
  std::vector<double> thresholds;
  for (double l : lambdas) thresholds.push_back(l * sd);
  const auto report = estimate_tail(h, p, thresholds, cfg);

  fit.feasible = true;
  fit.c_g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    SubGaussianPoint pt;
    pt.lambda = lambdas[i];
    pt.tail = report.tails[i];
    pt.constant = pt.tail.ci_high >= 1.0 ? 0.0 : -std::log(pt.tail.ci_high) / (pt.lambda * pt.lambda);
    pt.lower_bound_only = pt.tail.exceed == 0;
    if (pt.tail.ci_high >= 1.0) fit.feasible = false;
    if (!pt.lower_bound_only) {
      fit.c_g = std::min(fit.c_g, pt.constant);
      ++fit.fitted_points;
    }
    fit.points.push_back(pt);
  }
  if (fit.fitted_points == 0) {
    fit.feasible = false;
    fit.c_g = 0.0;
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Conditional checks of the second-moment propositions

struct Prop31Entry {
  VertexId vertex = 0;
  std::uint32_t deg = 0;  // deg_i(v)
  double estimate = 0.0;  // Monte Carlo E(deg_{i+1}(v)^2 | H_i)
  double stderr_est = 0.0;
  double bound = 0.0;
  bool passes = false;  // estimate <= bound + 3 stderr
};

struct Prop31Report {
  std::uint32_t round = 0;
  double eta = 1.0;
  std::uint64_t continuations = 0;
  std::vector<Prop31Entry> entries;
  bool all_pass = true;
};

/// For each requested surviving vertex, runs cfg.trials independent
/// continuations of round i -> i+1 from the fixed state H_i. Continuation j
/// draws vertex u's fate as uniform(i, u) of stream j, shared by all the
/// vertices being examined.
inline Prop31Report check_prop31(const Hypergraph& h, const RoundState& st, double eps,
                                 const std::vector<VertexId>& vertices, const TrialConfig& cfg) {
  cfg.validate();
  require_open_unit(eps, "epsilon");
  for (VertexId v : vertices) {
    if (v >= h.num_vertices() || !st.sample.kept[v])
      throw InvalidArgument("check_prop31: vertex " + std::to_string(v) + " not in V_i");
  }
  // Surviving edges through each examined vertex.
  std::vector<std::vector<EdgeId>> through(vertices.size());
  std::vector<std::uint8_t> alive(h.num_edges(), 0);
  for (EdgeId e : st.sample.edges) alive[e] = 1;
  for (std::size_t j = 0; j < vertices.size(); ++j)
    for (EdgeId e : h.incident(vertices[j]))
      if (alive[e]) through[j].push_back(e);

  struct Acc {
    std::vector<unsigned __int128> s2, s4;
  };
  const Acc acc = reduce_trials(
      0, cfg.trials, cfg.workers,
      [&] { return Acc{std::vector<unsigned __int128>(vertices.size(), 0),
                       std::vector<unsigned __int128>(vertices.size(), 0)}; },
      [&](std::uint64_t t, Acc& a) {
        const CounterRng rng(cfg.seed, StreamDomain::kContinuation, t);
        auto survives = [&](VertexId u) { return rng.uniform(st.round, u) < eps; };
        for (std::size_t j = 0; j < vertices.size(); ++j) {
          const VertexId v = vertices[j];
          if (!survives(v)) continue;
          std::uint64_t d = 0;
          for (EdgeId e : through[j]) {
            bool all = true;
            for (VertexId u : h.edge(e))
              if (u != v && !survives(u)) {
                all = false;
                break;
              }
            d += all;
          }
          const auto d2 = static_cast<unsigned __int128>(d) * d;
          a.s2[j] += d2;
          a.s4[j] += d2 * d2;
        }
      },
      [](Acc& into, const Acc& from) {
        for (std::size_t j = 0; j < into.s2.size(); ++j) {
          into.s2[j] += from.s2[j];
          into.s4[j] += from.s4[j];
        }
      });

  Prop31Report r;
  r.round = st.round;
  r.eta = st.eta;
  r.continuations = cfg.trials;
  const double T = static_cast<double>(cfg.trials);
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    Prop31Entry e;
    e.vertex = vertices[j];
    e.deg = st.sample.deg[vertices[j]];
    e.estimate = static_cast<double>(acc.s2[j]) / T;
    const double var =
        cfg.trials > 1
            ? std::max(0.0, (static_cast<double>(acc.s4[j]) - T * e.estimate * e.estimate) / (T - 1))
            : 0.0;
    e.stderr_est = std::sqrt(var / T);
    e.bound = prop31_bound(e.deg, h.uniformity(), st.eta, eps);
    e.passes = e.estimate <= e.bound + 3.0 * e.stderr_est;
    r.all_pass = r.all_pass && e.passes;
    r.entries.push_back(e);
  }
  return r;
}

struct RoundAggregate {
  std::uint32_t round = 0;
  MomentSums x;         // X_i over all trials
  MomentSums y;         // Y_i over all trials
  std::uint64_t eq_iq = 0;
  std::uint64_t holds_i = 0, holds_ii = 0, holds_iii = 0, holds_iv = 0, holds_iv_literal = 0;
  std::uint64_t holds_all = 0;
};

struct Prop32Round {
  std::uint32_t round = 0;  // i; Y is taken at round i+1
  std::uint64_t conditioned = 0;
  double mean_y = 0.0;
  double stderr_y = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - mean
  bool passes = true;   // mean <= bound + 3 stderr (vacuous when nothing conditioned)
};

struct ExposureCampaign {
  ExposureSchedule schedule;
  std::uint64_t trials = 0;
  std::vector<RoundAggregate> rounds;  // i = 0..I
  std::vector<Prop32Round> prop32;     // i = 0..I-1
  bool prop32_pass = true;
};

/// Runs cfg.trials exposure chains and aggregates, per round, X_i, Y_i and the
/// preconditions; Y_{i+1} is also averaged over the trials whose round-i
/// preconditions all hold and compared with its expectation bound.
inline ExposureCampaign run_exposure_campaign(const Hypergraph& h, const ExposureSchedule& sched,
                                              const LemmaParams& params, const TrialConfig& cfg) {
  cfg.validate();
  const auto prof = degree_profile(h);
  const auto summary = summarize(h, prof);
  const std::uint32_t rounds = sched.rounds;

  struct Acc {
    std::vector<RoundAggregate> agg;
    std::vector<MomentSums> cond_y;
  };
  Acc acc = reduce_trials(
      0, cfg.trials, cfg.workers,
      [&] {
        Acc a;
        a.agg.resize(rounds + 1);
        for (std::uint32_t i = 0; i <= rounds; ++i) a.agg[i].round = i;
        a.cond_y.resize(rounds);
        return a;
      },
      [&](std::uint64_t t, Acc& a) {
        const auto states =
            run_exposure(h, sched, CounterRng(cfg.seed, StreamDomain::kVertexOutcome, t),
                         prof.max_deg);
        for (std::uint32_t i = 0; i <= rounds; ++i) {
          const auto& st = states[i];
          auto& g = a.agg[i];
          g.x.add(st.sample.x);
          g.y.add(st.y);
          g.eq_iq += st.eq_iq;
          const auto rep = check_preconditions(h, prof, sched, st, params);
          g.holds_i += rep.x_window_holds;
          g.holds_ii += rep.deg_sq_holds;
          g.holds_iii += rep.deg_cap_holds;
          g.holds_iv += rep.codeg_holds;
          g.holds_iv_literal += rep.codeg_holds_literal;
          g.holds_all += rep.all_hold();
          if (i < rounds && rep.all_hold()) a.cond_y[i].add(states[i + 1].y);
        }
      },
      [](Acc& into, const Acc& from) {
        for (std::size_t i = 0; i < into.agg.size(); ++i) {
          auto& a = into.agg[i];
          const auto& b = from.agg[i];
          a.x.merge(b.x);
          a.y.merge(b.y);
          a.eq_iq += b.eq_iq;
          a.holds_i += b.holds_i;
          a.holds_ii += b.holds_ii;
          a.holds_iii += b.holds_iii;
          a.holds_iv += b.holds_iv;
          a.holds_iv_literal += b.holds_iv_literal;
          a.holds_all += b.holds_all;
        }
        for (std::size_t i = 0; i < into.cond_y.size(); ++i) into.cond_y[i].merge(from.cond_y[i]);
      });

  ExposureCampaign c;
  c.schedule = sched;
  c.trials = cfg.trials;
  c.rounds = std::move(acc.agg);
  for (std::uint32_t i = 0; i < rounds; ++i) {
    Prop32Round pr;
    pr.round = i;
    pr.conditioned = acc.cond_y[i].count;
    pr.mean_y = acc.cond_y[i].mean();
    pr.stderr_y = acc.cond_y[i].stderr_mean();
    pr.bound = prop32_bound(summary, params.p, sched.epsilon, i);
    pr.margin = pr.bound - pr.mean_y;
    pr.passes = pr.conditioned == 0 || pr.mean_y <= pr.bound + 3.0 * pr.stderr_y;
    c.prop32_pass = c.prop32_pass && pr.passes;
    c.prop32.push_back(pr);
  }
  return c;
}

/// The second-moment expectation check on its own.
inline std::vector<Prop32Round> check_prop32(const Hypergraph& h, const ExposureSchedule& sched,
                                             const LemmaParams& params, const TrialConfig& cfg) {
  return run_exposure_campaign(h, sched, params, cfg).prop32;
}

}  // namespace hgconc
