#pragma once

// Command-line front end. Requires CLI11 (CLI11.hpp on the include path).

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hgconc/bounds.hpp"
#include "hgconc/core.hpp"
#include "hgconc/error.hpp"
#include "hgconc/extensions.hpp"
#include "hgconc/generators.hpp"
#include "hgconc/hgr.hpp"
#include "hgconc/montecarlo.hpp"
#include "hgconc/oracle.hpp"
#include "hgconc/percolation.hpp"
#include "hgconc/record.hpp"

namespace hgconc {

inline constexpr const char* kVersion = "0.1.0";

namespace cli {

class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

inline Json to_json(const HypergraphSummary& s) {
  return {{"n", s.n}, {"m", s.m}, {"k", s.k},
          {"max_deg", s.max_deg}, {"min_deg", s.min_deg}, {"max_codeg", s.max_codeg}};
}

inline Json to_json(const NicenessParams& p) {
  return {{"p", p.p}, {"lambda", p.lambda}, {"gamma", p.gamma}, {"b", p.b}, {"bk", p.bk}, {"n0", p.n0}};
}

inline Json to_json(const MainBound& b) {
  return {{"gamma1", b.gamma1},           {"gamma2", b.gamma2},
          {"g1_lambda_b", b.g1_lambda_b}, {"g1_lambda_bk", b.g1_lambda_bk},
          {"g1_degree", b.g1_degree},     {"g2_n", b.g2_n},
          {"g2_gamma", b.g2_gamma},       {"window", b.window},
          {"prob_bound", b.prob_bound},   {"prob_bound_clamped", b.clamped()},
          {"vacuous", b.vacuous}};
}

inline Json to_json(const P4Evidence& ev) {
  Json grid = Json::array();
  for (const auto& g : ev.grid) {
    grid.push_back({{"q", g.q},
                    {"deg_cap", g.deg_cap},
                    {"codeg_triggered", g.codeg_triggered},
                    {"max_deg_seen", g.max_deg_seen},
                    {"deg_violations", g.deg_violations},
                    {"codeg_violations", g.codeg_violations},
                    {"codeg_violations_literal", g.codeg_violations_literal},
                    {"violations", g.violations},
                    {"trials", g.trials},
                    {"ci_low", g.ci_low},
                    {"ci_high", g.ci_high},
                    {"supported", g.supported}});
  }
  return {{"threshold", ev.threshold},
          {"violations", ev.violations},
          {"supported", ev.supported},
          {"grid_within_range", ev.grid_within_range},
          {"grid", grid}};
}

inline Json to_json(const NicenessReport& r) {
  Json j = {{"p1", r.p1},
            {"p2", {{"holds", r.p2}, {"lhs", r.p2_lhs}, {"rhs", r.p2_rhs}}},
            {"p3", {{"holds", r.p3}, {"lhs", r.p3_lhs}, {"rhs", r.p3_rhs}}},
            {"p4", to_string(r.p4)},
            {"analytic_ok", r.analytic_ok()}};
  return j;
}

inline Json to_json(const TailEstimate& t) {
  return {{"threshold", t.threshold}, {"exceed", t.exceed}, {"trials", t.trials},
          {"point", t.point},         {"ci_low", t.ci_low}, {"ci_high", t.ci_high}};
}

inline Json to_json(const SubGaussianFit& f) {
  Json pts = Json::array();
  for (const auto& p : f.points) {
    pts.push_back({{"lambda", p.lambda},
                   {"tail", to_json(p.tail)},
                   {"constant", p.constant},
                   {"lower_bound_only", p.lower_bound_only}});
  }
  return {{"variance_source", f.variance_source == VarianceSource::kExact ? "exact" : "plugin"},
          {"variance", f.variance},
          {"plugin_assumption", f.plugin_assumption},
          {"c_g", f.c_g},
          {"fitted_points", f.fitted_points},
          {"feasible", f.feasible},
          {"points", pts}};
}

inline Json to_json(const MomentSums& m) {
  return {{"count", m.count}, {"mean", m.mean()}, {"variance", m.variance()}, {"stderr", m.stderr_mean()}};
}

inline Json to_json(const ExposureSchedule& s) {
  return {{"p", s.p},
          {"epsilon", s.epsilon},
          {"rounds", s.rounds},
          {"eps_min", s.range.min},
          {"eps_max", s.range.max},
          {"paper_mode", s.paper_mode}};
}

inline Json to_json(const ExposureCampaign& c) {
  Json rounds = Json::array();
  for (const auto& r : c.rounds) {
    rounds.push_back({{"round", r.round},
                      {"x", to_json(r.x)},
                      {"y", to_json(r.y)},
                      {"eq_iq", r.eq_iq},
                      {"holds_i", r.holds_i},
                      {"holds_ii", r.holds_ii},
                      {"holds_iii", r.holds_iii},
                      {"holds_iv", r.holds_iv},
                      {"holds_iv_literal", r.holds_iv_literal},
                      {"holds_all", r.holds_all}});
  }
  Json p32 = Json::array();
  for (const auto& r : c.prop32) {
    p32.push_back({{"round", r.round},
                   {"conditioned", r.conditioned},
                   {"mean_y", r.mean_y},
                   {"stderr_y", r.stderr_y},
                   {"bound", r.bound},
                   {"margin", r.margin},
                   {"passes", r.passes}});
  }
  return {{"schedule", to_json(c.schedule)},
          {"trials", c.trials},
          {"rounds", rounds},
          {"prop32", p32},
          {"prop32_pass", c.prop32_pass}};
}

inline Json to_json(const Prop31Report& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"vertex", e.vertex},
                       {"deg", e.deg},
                       {"estimate", e.estimate},
                       {"stderr", e.stderr_est},
                       {"bound", e.bound},
                       {"passes", e.passes}});
  }
  return {{"round", r.round},
          {"eta", r.eta},
          {"continuations", r.continuations},
          {"all_pass", r.all_pass},
          {"entries", entries}};
}

inline Json to_json(const Interval& i) { return Json::array({i.low, i.high}); }

namespace detail {

struct SeedChoice {
  std::uint64_t value = 0;
  bool automatic = false;
};

inline SeedChoice resolve_seed(const std::string& text, const std::string& cmd) {
  if (text.empty()) {
    throw UsageError(cmd + " is stochastic: pass --seed <uint64> or --seed auto");
  }
  if (text == "auto") {
    std::random_device rd;
    const std::uint64_t hi = rd();
    return {(hi << 32) ^ rd(), true};
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("--seed must be a non-negative integer or \"auto\", got \"" + text + "\"");
  }
  return {v, false};
}

inline GraphSpec parse_pattern(const std::string& family, std::uint32_t r,
                               const std::vector<std::uint32_t>& sides) {
  if (family == "complete") {
    if (r == 0) throw UsageError("--family complete needs --r");
    return GraphSpec::complete(r);
  }
  if (family == "bipartite") {
    if (sides.size() != 2) throw UsageError("--family bipartite needs --sides a,b");
    return GraphSpec::complete_bipartite(sides[0], sides[1]);
  }
  throw UsageError("unknown pattern family \"" + family + "\" (complete | bipartite)");
}

inline Json pattern_json(const GraphSpec& g) {
  return {{"name", g.name()}, {"v_g", g.vertex_count()}, {"e_g", g.edge_count()}};
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name. Records go to
/// `out` (or to --out), diagnostics to `err`. Exit codes: 0 success, 1 usage
/// or malformed input, 2 infeasible parameters or exceeded budget.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concentration of hyperedge counts under vertex percolation", "hgconc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file supplying defaults; flags take precedence");
  app.set_version_flag("--version", kVersion);

  std::string seed_text;
  std::uint64_t trials = 10'000;
  unsigned workers = 1;
  std::string out_path;
  std::uint64_t budget = kDefaultGeneratorBudget;
  double alpha = 0.01;
  app.add_option("--seed", seed_text, "Master seed (uint64) or \"auto\"");
  app.add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Output path (HGR file for gen, JSON lines otherwise)");
  app.add_option("--budget", budget, "Enumeration budget (edges / pairs)")->check(CLI::PositiveNumber);
  app.add_option("--alpha", alpha, "Confidence-interval level 1 - alpha");

  // Options shared by several subcommands.
  std::string in_path;
  std::string family;
  std::uint32_t r = 0;
  std::vector<std::uint32_t> sides;
  std::uint32_t big_n = 0;
  NicenessParams np;
  auto add_input = [&](CLI::App* sub) { sub->add_option("--in", in_path, "HGR input file")->required(); };
  auto add_pattern = [&](CLI::App* sub) {
    sub->add_option("--family", family, "complete | bipartite")->required();
    sub->add_option("--r", r, "Clique size for --family complete");
    sub->add_option("--sides", sides, "Side sizes a,b for --family bipartite")->delimiter(',');
  };
  auto add_niceness = [&](CLI::App* sub, bool need_p) {
    auto* p = sub->add_option("--p", np.p, "Percolation probability");
    if (need_p) p->required();
    sub->add_option("--lambda", np.lambda, "lambda");
    sub->add_option("--gamma", np.gamma, "Gamma");
    sub->add_option("--b", np.b, "b in e^{-b lambda^2}");
    sub->add_option("--bk", np.bk, "b_k");
    sub->add_option("--n0", np.n0, "n0 for (P1)");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a hypergraph in HGR format");
  std::uint64_t gen_n = 0, gen_m = 0, gen_k = 0;
  gen->add_option("--family", family, "complete | bipartite | disjoint | random")->required();
  gen->add_option("--r", r, "Clique size (complete)");
  gen->add_option("--sides", sides, "Side sizes a,b (bipartite)")->delimiter(',');
  gen->add_option("--N", big_n, "Host clique K_N (complete, bipartite)");
  gen->add_option("--n", gen_n, "Vertices (random)");
  gen->add_option("--m", gen_m, "Edges (disjoint, random)");
  gen->add_option("--k", gen_k, "Uniformity (disjoint, random)");

  // stats
  auto* stats = app.add_subcommand("stats", "Degree and co-degree statistics");
  bool with_degrees = false;
  add_input(stats);
  stats->add_flag("--degrees", with_degrees, "Include the degree vector");

  // nice
  auto* nice = app.add_subcommand("nice", "Evaluate the niceness conditions (P1)-(P4)");
  bool run_p4 = false;
  std::vector<double> q_grid;
  std::size_t q_points = 8;
  double q_max = 0.9;
  add_input(nice);
  add_niceness(nice, true);
  nice->add_flag("--p4", run_p4, "Collect Monte Carlo evidence for (P4)");
  nice->add_option("--q-grid", q_grid, "Explicit q grid for (P4)")->delimiter(',');
  nice->add_option("--q-points", q_points, "Points in the default geometric q grid");
  nice->add_option("--q-max", q_max, "Largest q in the default grid");

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate the main tail bound");
  HypergraphSummary manual;
  bound->add_option("--in", in_path, "HGR input file");
  bound->add_option("--n", manual.n, "n (without --in)");
  bound->add_option("--m", manual.m, "m (without --in)");
  bound->add_option("--k", manual.k, "k (without --in)");
  bound->add_option("--max-deg", manual.max_deg, "Delta (without --in)");
  add_niceness(bound, true);

  // regime
  auto* reg = app.add_subcommand("regime", "Parameter window for subgraph counts of G in G(N, p)");
  double reg_n = 0.0, c1 = 0.01;
  add_pattern(reg);
  reg->add_option("--N", reg_n, "N")->required();
  reg->add_option("--c1", c1, "c1 > 0");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo tail estimates for X");
  double sim_p = 0.0;
  std::vector<double> thresholds, lambdas;
  std::string variance_source = "exact";
  add_input(sim);
  sim->add_option("--p", sim_p, "Percolation probability")->required();
  sim->add_option("--thresholds", thresholds, "Absolute deviations t")->delimiter(',');
  sim->add_option("--lambdas", lambdas, "lambda grid for the sub-Gaussian fit")->delimiter(',');
  sim->add_option("--variance", variance_source, "exact | plugin");

  // expose
  auto* expose = app.add_subcommand("expose", "Iterative exposure campaign");
  double ex_p = 0.0, eps_min = 1e-6, eps_max = 1e-3;
  bool paper_mode = false;
  std::uint32_t forced_rounds = 0;
  double ex_lambda = 1.0, ex_gamma = 1.0;
  std::size_t prop31_vertices = 0;
  std::uint32_t prop31_round = 0;
  add_input(expose);
  expose->add_option("--p", ex_p, "Target p = epsilon^I")->required();
  expose->add_option("--eps-min", eps_min, "Smallest allowed epsilon");
  expose->add_option("--eps-max", eps_max, "Largest allowed epsilon");
  expose->add_flag("--paper-mode", paper_mode, "Fix epsilon to [1e-6, 1e-3] and require I <= ln n");
  expose->add_option("--rounds", forced_rounds, "Force the number of rounds I");
  expose->add_option("--lambda", ex_lambda, "lambda for the preconditions");
  expose->add_option("--gamma", ex_gamma, "Gamma for the preconditions");
  expose->add_option("--prop31", prop31_vertices, "Check the conditional second moment on this many vertices");
  expose->add_option("--prop31-round", prop31_round, "Round i of the state used by --prop31");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact moments and distribution of X");
  double orc_p = 0.0;
  bool with_dist = false;
  std::size_t max_vertices = kDefaultEnumerationLimit;
  add_input(orc);
  orc->add_option("--p", orc_p, "Percolation probability")->required();
  orc->add_flag("--dist", with_dist, "Enumerate the exact distribution");
  orc->add_option("--max-vertices", max_vertices, "Largest n for --dist");

  // ext
  auto* ext = app.add_subcommand("ext", "Rooted-graph extensions");
  std::string mode;
  std::uint32_t roots = 2;
  double ext_q = 0.0;
  add_pattern(ext);
  ext->add_option("--mode", mode, "balanced | expected | identity | lemma")->required();
  ext->add_option("--N", big_n, "Host clique K_N");
  ext->add_option("--roots", roots, "Root count 2 or 3");
  ext->add_option("--q", ext_q, "Edge probability q");
  ext->add_option("--p", np.p, "p (lemma mode)");
  ext->add_option("--lambda", np.lambda, "lambda (lemma mode)");
  ext->add_option("--gamma", np.gamma, "Gamma (lemma mode)");
  ext->add_option("--b", np.b, "b (lemma mode)");

  // mcdiarmid
  auto* mcd = app.add_subcommand("mcdiarmid", "Bounded-differences tail bound");
  double mcd_t = 0.0;
  std::vector<double> lipschitz;
  mcd->add_option("--t", mcd_t, "Deviation t")->required();
  mcd->add_option("--a", lipschitz, "Lipschitz constants a_i")->delimiter(',')->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Json params;
  params["version"] = kVersion;
  Json result;
  std::optional<detail::SeedChoice> seed;
  auto need_seed = [&] {
    seed = detail::resolve_seed(seed_text, cmd);
    params["seed"] = seed->value;
    params["seed_auto"] = seed->automatic;
  };
  auto trial_config = [&] {
    need_seed();
    TrialConfig cfg;
    cfg.seed = seed->value;
    cfg.trials = trials;
    cfg.alpha = alpha;
    cfg.workers = workers;
    params["trials"] = trials;
    params["alpha"] = alpha;
    params["workers"] = workers;
    return cfg;
  };
  auto load = [&] {
    params["in"] = in_path;
    return read_hgr(in_path);
  };
  std::string hgr_text;  // gen only

  try {
    if (cmd == "gen") {
      Hypergraph h;
      params["family"] = family;
      if (family == "complete" || family == "bipartite") {
        const auto g = detail::parse_pattern(family, r, sides);
        if (big_n == 0) throw UsageError("gen --family " + family + " needs --N");
        params["pattern"] = detail::pattern_json(g);
        params["N"] = big_n;
        params["budget"] = budget;
        h = subgraph_hypergraph(g, big_n, budget);
      } else if (family == "disjoint") {
        if (gen_m == 0 || gen_k == 0) throw UsageError("gen --family disjoint needs --m and --k");
        params["m"] = gen_m;
        params["k"] = gen_k;
        h = disjoint_edges(gen_m, gen_k);
      } else if (family == "random") {
        if (gen_n == 0 || gen_k == 0) throw UsageError("gen --family random needs --n, --m and --k");
        need_seed();
        params["n"] = gen_n;
        params["m"] = gen_m;
        params["k"] = gen_k;
        params["budget"] = budget;
        h = random_uniform(gen_n, gen_m, gen_k, seed->value, budget);
      } else {
        throw UsageError("unknown --family \"" + family + "\" (complete | bipartite | disjoint | random)");
      }
      hgr_text = to_hgr(h);
      result = to_json(summarize(h));
    } else if (cmd == "stats") {
      const auto h = load();
      const auto prof = degree_profile(h);
      result = to_json(summarize(h, prof));
      result["max_codeg_pair"] = Json::array({prof.max_codeg_pair.first, prof.max_codeg_pair.second});
      if (with_degrees) result["degrees"] = prof.deg;
    } else if (cmd == "nice") {
      const auto h = load();
      np.validate();
      params["niceness"] = to_json(np);
      const auto summary = summarize(h);
      std::optional<P4Evidence> ev;
      if (run_p4) {
        const auto cfg = trial_config();
        const auto grid = q_grid.empty() ? default_q_grid(np.p, q_points, q_max) : q_grid;
        params["q_grid"] = grid;
        ev = verify_p4(h, np, grid, cfg);
      }
      const auto rep = check_nice(summary, np, ev ? std::optional<P4Summary>(ev->summary()) : std::nullopt);
      result = to_json(rep);
      result["summary"] = to_json(summary);
      if (ev) result["p4_evidence"] = to_json(*ev);
    } else if (cmd == "bound") {
      HypergraphSummary summary;
      if (!in_path.empty()) {
        summary = summarize(load());
      } else {
        if (manual.n == 0 || manual.m == 0 || manual.k == 0 || manual.max_deg == 0)
          throw UsageError("bound needs --in or all of --n, --m, --k, --max-deg");
        summary = manual;
        params["n"] = manual.n;
        params["m"] = manual.m;
        params["k"] = manual.k;
        params["max_deg"] = manual.max_deg;
      }
      params["niceness"] = to_json(np);
      result = to_json(main_bound(summary, np));
      result["summary"] = to_json(summary);
    } else if (cmd == "regime") {
      const auto g = detail::parse_pattern(family, r, sides);
      params["pattern"] = detail::pattern_json(g);
      params["N"] = reg_n;
      params["c1"] = c1;
      const auto rp = regime(g, reg_n, c1);
      result = {{"rho1", rp.rho1},
                {"rho2", rp.rho2},
                {"c1", rp.c1},
                {"c2", rp.c2},
                {"p_low", rp.p_low},
                {"p_high", rp.p_high},
                {"p_range_nonempty", rp.p_range_nonempty},
                {"lambda_low", rp.lambda_low},
                {"lambda_high", rp.lambda_high},
                {"lambda_range_nonempty", rp.lambda_range_nonempty}};
    } else if (cmd == "simulate") {
      const auto h = load();
      if (thresholds.empty() && lambdas.empty())
        throw UsageError("simulate needs --thresholds and/or --lambdas");
      const auto cfg = trial_config();
      params["p"] = sim_p;
      params["thresholds"] = thresholds;
      if (!thresholds.empty()) {
        const auto rep = estimate_tail(h, sim_p, thresholds, cfg);
        result["expectation"] = rep.expectation;
        result["sample_mean"] = rep.sample_mean;
        result["sample_variance"] = rep.sample_variance;
        result["histogram"] = rep.histogram;
        Json tails = Json::array();
        for (const auto& t : rep.tails) tails.push_back(to_json(t));
        result["tails"] = tails;
      }
      if (!lambdas.empty()) {
        VarianceSource src;
        if (variance_source == "exact") src = VarianceSource::kExact;
        else if (variance_source == "plugin") src = VarianceSource::kPlugin;
        else throw UsageError("--variance must be exact or plugin");
        params["lambdas"] = lambdas;
        params["variance"] = variance_source;
        params["budget"] = budget;
        result["fit"] = to_json(fit_subgaussian(h, sim_p, lambdas, src, cfg, budget));
      }
    } else if (cmd == "expose") {
      const auto h = load();
      const auto cfg = trial_config();
      params["p"] = ex_p;
      params["eps_min"] = eps_min;
      params["eps_max"] = eps_max;
      params["paper_mode"] = paper_mode;
      params["lambda"] = ex_lambda;
      params["gamma"] = ex_gamma;
      if (forced_rounds) params["rounds"] = forced_rounds;
      const auto sched = build_schedule(ex_p, h.num_vertices(), {eps_min, eps_max}, paper_mode,
                                        forced_rounds ? std::optional<std::uint32_t>(forced_rounds)
                                                      : std::nullopt);
      const auto campaign = run_exposure_campaign(h, sched, {ex_p, ex_lambda, ex_gamma}, cfg);
      result = to_json(campaign);
      if (prop31_vertices > 0) {
        if (prop31_round >= sched.rounds) throw UsageError("--prop31-round must be < I");
        params["prop31"] = prop31_vertices;
        params["prop31_round"] = prop31_round;
        // The state comes from trial 0's chain; vertices are the first
        // surviving ones of positive degree.
        const auto states =
            run_exposure(h, sched, CounterRng(cfg.seed, StreamDomain::kVertexOutcome, 0));
        const auto& st = states[prop31_round];
        std::vector<VertexId> picked;
        for (VertexId v = 0; v < h.num_vertices() && picked.size() < prop31_vertices; ++v)
          if (st.sample.kept[v] && st.sample.deg[v] > 0) picked.push_back(v);
        result["prop31"] = to_json(check_prop31(h, st, sched.epsilon, picked, cfg));
      }
    } else if (cmd == "oracle") {
      const auto h = load();
      params["p"] = orc_p;
      params["budget"] = budget;
      result["expectation"] = exact_expectation(h, orc_p);
      result["variance"] = exact_variance(h, orc_p, budget);
      if (with_dist) {
        params["max_vertices"] = max_vertices;
        const auto d = exact_distribution(h, orc_p, max_vertices);
        result["distribution"] = d.probabilities;
        result["dist_mean"] = d.mean();
        result["dist_variance"] = d.variance();
      }
    } else if (cmd == "ext") {
      const auto g = detail::parse_pattern(family, r, sides);
      params["pattern"] = detail::pattern_json(g);
      params["mode"] = mode;
      if (mode == "balanced" || mode == "expected") {
        params["roots"] = roots;
        const auto rg = build_rooted(g, roots);
        result = {{"r", rg.roots()}, {"s", rg.non_roots()}, {"t", rg.t()}, {"density", rg.density()}};
        if (mode == "balanced") {
          result["balanced"] = is_balanced(rg);
        } else {
          if (big_n == 0) throw UsageError("ext --mode expected needs --N");
          params["N"] = big_n;
          params["q"] = ext_q;
          result["expected"] = expected_extensions(rg, big_n, ext_q);
        }
      } else if (mode == "identity") {
        if (big_n == 0) throw UsageError("ext --mode identity needs --N");
        const auto cfg = trial_config();
        params["N"] = big_n;
        params["q"] = ext_q;
        params["budget"] = budget;
        const auto rep = z_identity_check(g, big_n, ext_q, cfg, budget);
        result = {{"conditioned", rep.conditioned},
                  {"trials_used", rep.trials_used},
                  {"mismatches", rep.mismatches},
                  {"labelings_summed", rep.labelings_summed},
                  {"z1", to_json(rep.z1)},
                  {"expected", rep.expected},
                  {"deviation_in_stderr", rep.deviation_in_stderr},
                  {"expectation_ok", rep.expectation_ok}};
      } else if (mode == "lemma") {
        if (big_n == 0) throw UsageError("ext --mode lemma needs --N");
        const auto cfg = trial_config();
        const LemmaZInputs in{np.p, ext_q, np.lambda, np.gamma, np.b};
        params["N"] = big_n;
        params["p"] = in.p;
        params["q"] = in.q;
        params["lambda"] = in.lambda;
        params["gamma"] = in.gamma;
        params["b"] = in.b;
        params["budget"] = budget;
        const auto rep = lemma43_check(g, big_n, in, cfg, budget);
        result = {{"cap", rep.cap},
                  {"z2_applicable", rep.z2_applicable},
                  {"z2_triggered", rep.z2_triggered},
                  {"z2_factor", rep.z2_factor},
                  {"threshold", rep.threshold},
                  {"z1_violations", rep.z1_violations},
                  {"z1_ci", to_json(rep.z1_ci)},
                  {"z1_supported", rep.z1_supported},
                  {"z2_violations", rep.z2_violations},
                  {"z2_ci", to_json(rep.z2_ci)},
                  {"z2_supported", rep.z2_supported},
                  {"z1", to_json(rep.z1)},
                  {"z2", to_json(rep.z2)}};
      } else {
        throw UsageError("unknown --mode \"" + mode + "\" (balanced | expected | identity | lemma)");
      }
    } else if (cmd == "mcdiarmid") {
      params["t"] = mcd_t;
      params["a"] = lipschitz;
      const auto b = mcdiarmid(mcd_t, lipschitz);
      result = {{"raw", b.raw}, {"value", b.value}, {"degenerate", b.degenerate}};
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return 2;
  }

  const std::string line = format_record(make_record(cmd, std::move(params), std::move(result)));
  if (cmd == "gen") {
    if (out_path.empty()) {
      out << hgr_text;
      return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << out_path << '\n';
      return 1;
    }
    f << hgr_text;
    out << line;
    return 0;
  }
  if (out_path.empty()) {
    out << line;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << out_path << '\n';
      return 1;
    }
    f << line;
  }
  return 0;
}

}  // namespace cli
}  // namespace hgconc
