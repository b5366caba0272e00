#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "hgconc/core.hpp"
#include "hgconc/error.hpp"
#include "hgconc/generators.hpp"

namespace hgconc {

/// Parameters of the niceness condition and the main tail bound. b_k and n0
/// are never pinned down as numbers; the defaults below are only defaults
/// and every report echoes the values used.
struct NicenessParams {
  double p = 1e-3;
  double lambda = 1.0;
  double gamma = 1.0;   // Γ
  double b = 1.0;       // constant in the (P4) probability e^{-b λ^2}
  double n0 = 1e3;      // minimum n for (P1)
  double bk = 1e-2;     // b_k

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0, 1)");
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
    if (!(gamma > 0.0)) throw InvalidArgument("Gamma must be > 0");
    if (!(b > 0.0)) throw InvalidArgument("b must be > 0");
    if (!(bk > 0.0)) throw InvalidArgument("b_k must be > 0");
    if (!(n0 >= 1.0)) throw InvalidArgument("n0 must be >= 1");
  }
};

enum class P4Status { kVerifiedEmpirically, kAssumed, kFailed };

inline const char* to_string(P4Status s) {
  switch (s) {
    case P4Status::kVerifiedEmpirically: return "verified-empirically";
    case P4Status::kAssumed: return "assumed";
    case P4Status::kFailed: return "failed";
  }
  return "?";
}

// What check_nice needs to know about a Monte Carlo (P4) run.
struct P4Summary {
  std::size_t grid_points = 0;
  bool grid_within_range = false;  // every q in [p, 1)
  std::uint64_t violations = 0;    // summed over the grid
  bool supported = false;          // every upper CI <= e^{-b λ^2}
};

struct NicenessReport {
  NicenessParams params;
  // (P1)
  bool p1 = false;
  // (P2): sqrt(p^k m) >= max(ln n, λ)
  bool p2 = false;
  double p2_lhs = 0.0;
  double p2_rhs = 0.0;
  // (P3): Δ2 <= δ ln^-3 n
  bool p3 = false;
  double p3_lhs = 0.0;
  double p3_rhs = 0.0;
  // (P4)
  P4Status p4 = P4Status::kAssumed;
  std::optional<P4Summary> p4_evidence;

  bool analytic_ok() const { return p1 && p2 && p3; }
};

/// (P1)-(P3) evaluated exactly as stated; (P4) comes from Monte Carlo
/// evidence when supplied. Verified needs zero violations and every upper CI
/// under e^{-bλ^2}; any violation fails it; no evidence, or evidence too thin
/// to reach the threshold, leaves it assumed.
inline NicenessReport check_nice(const HypergraphSummary& h, const NicenessParams& params,
                                 std::optional<P4Summary> p4_evidence = std::nullopt) {
  params.validate();
  NicenessReport r;
  r.params = params;
  const double n = static_cast<double>(h.n);
  const double ln = std::log(n);

  r.p1 = params.p <= 1e-3 && h.k >= 3 && n >= params.n0;

  r.p2_lhs = std::sqrt(std::pow(params.p, static_cast<double>(h.k)) * static_cast<double>(h.m));
  r.p2_rhs = std::max(ln, params.lambda);
  r.p2 = r.p2_lhs >= r.p2_rhs;

  r.p3_lhs = static_cast<double>(h.max_codeg);
  r.p3_rhs = static_cast<double>(h.min_deg) / (ln * ln * ln);
  r.p3 = r.p3_lhs <= r.p3_rhs;

  r.p4_evidence = p4_evidence;
  if (!p4_evidence || p4_evidence->grid_points == 0 || !p4_evidence->grid_within_range) {
    r.p4 = P4Status::kAssumed;
  } else if (p4_evidence->violations > 0) {
    r.p4 = P4Status::kFailed;
  } else if (p4_evidence->supported) {
    r.p4 = P4Status::kVerifiedEmpirically;
  } else {
    r.p4 = P4Status::kAssumed;
  }
  return r;
}

/// The main tail bound: P(|X - EX| > window) <= prob_bound (raw, may exceed 1).
struct MainBound {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  // individual terms, in the order they appear in γ1 then γ2
  double g1_lambda_b = 0.0;   // e^{-bλ^2}
  double g1_lambda_bk = 0.0;  // 2e^{-b_k λ^2}
  double g1_degree = 0.0;     // 2exp(-b_k m / (p^{k-1} Δ^2 n ln n))
  double g2_n = 0.0;          // 2exp(-b_k p n / ln^5 n)
  double g2_gamma = 0.0;      // 2exp(-b_k p^k m / (Γ^2 ln^6 n))
  double window = 0.0;        // (ln n + λ) sqrt(p^k m)
  double prob_bound = 0.0;    // 2(γ1 + γ2) ln n
  bool vacuous = false;       // prob_bound >= 1

  double clamped() const { return std::min(1.0, prob_bound); }
};

inline MainBound main_bound(const HypergraphSummary& h, const NicenessParams& params) {
  params.validate();
  const double n = static_cast<double>(h.n);
  const double m = static_cast<double>(h.m);
  const double k = static_cast<double>(h.k);
  const double delta = static_cast<double>(h.max_deg);
  const double ln = std::log(n);
  const double p = params.p;
  const double lam2 = params.lambda * params.lambda;
  const double bk = params.bk;

  MainBound r;
  r.g1_lambda_b = std::exp(-params.b * lam2);
  r.g1_lambda_bk = 2.0 * std::exp(-bk * lam2);
  r.g1_degree = 2.0 * std::exp(-bk * m / (std::pow(p, k - 1) * delta * delta * n * ln));
  r.g2_n = 2.0 * std::exp(-bk * p * n / std::pow(ln, 5));
  r.g2_gamma = 2.0 * std::exp(-bk * std::pow(p, k) * m /
                              (params.gamma * params.gamma * std::pow(ln, 6)));
  r.gamma1 = r.g1_lambda_b + r.g1_lambda_bk + r.g1_degree;
  r.gamma2 = r.g2_n + r.g2_gamma;
  r.window = (ln + params.lambda) * std::sqrt(std::pow(p, k) * m);
  r.prob_bound = 2.0 * (r.gamma1 + r.gamma2) * ln;
  r.vacuous = r.prob_bound >= 1.0;
  return r;
}

/// Bounded-differences bound 2 exp(-2t^2 / sum a_i^2).
struct McDiarmidBound {
  double raw = 0.0;    // unclamped formula value
  double value = 0.0;  // min(1, raw)
  bool degenerate = false;  // all a_i zero: W is constant
};

inline McDiarmidBound mcdiarmid(double t, std::span<const double> lipschitz) {
  if (!(t >= 0.0)) throw InvalidArgument("mcdiarmid: t must be >= 0");
  if (lipschitz.empty()) throw InvalidArgument("mcdiarmid: need at least one Lipschitz constant");
  double sum_sq = 0.0;
  for (double a : lipschitz) {
    if (!(a >= 0.0)) throw InvalidArgument("mcdiarmid: Lipschitz constants must be >= 0");
    sum_sq += a * a;
  }
  McDiarmidBound r;
  if (sum_sq == 0.0) {
    // A constant W never deviates by t > 0; at t = 0 the trivial bound 1 stands.
    r.degenerate = true;
    r.raw = t > 0.0 ? 0.0 : 1.0;
    r.value = r.raw;
    return r;
  }
  r.raw = 2.0 * std::exp(-2.0 * t * t / sum_sq);
  r.value = std::min(1.0, r.raw);
  return r;
}

/// Upper bound on E(deg_{i+1}(v)^2 | H_i):
/// (eps^{2k-1} + eps^{k+1} eta) deg^2 + eps^k deg.
inline double prop31_bound(double deg, std::size_t k, double eta, double eps) {
  if (!(deg >= 0.0)) throw InvalidArgument("prop31_bound: degree must be >= 0");
  const double kd = static_cast<double>(k);
  return (std::pow(eps, 2 * kd - 1) + std::pow(eps, kd + 1) * eta) * deg * deg +
         std::pow(eps, kd) * deg;
}

/// Upper bound on E(Y_{i+1}) given preconditions at round i.
inline double prop32_bound(const HypergraphSummary& h, double p, double eps, std::uint32_t i) {
  const double k = static_cast<double>(h.k);
  const double n = static_cast<double>(h.n);
  const double m = static_cast<double>(h.m);
  const double delta = static_cast<double>(h.max_deg);
  const double ln = std::log(n);
  const double ip1 = i + 1.0;
  return std::pow(eps, (2 * k - 1) * ip1) * delta * delta * n *
             (1.0 + (3.0 * i + 2.0) / (ln * ln)) +
         5.0 * k * std::pow(eps, (k + 0.5) * ip1) * m / std::sqrt(p);
}

/// Parameter window of the subgraph-count theorem for G in K_N.
struct RegimeParams {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double p_low = 0.0;   // N^{-ρ1 + c1}
  double p_high = 0.0;  // N^{-ρ2 - c1}
  bool p_range_nonempty = false;
  double lambda_low = 0.0;   // 8 ln N
  double lambda_high = 0.0;  // N^{c2}
  bool lambda_range_nonempty = false;
};

inline RegimeParams regime(const GraphSpec& spec, double big_n, double c1) {
  const double vg = spec.vertex_count();
  const double eg = spec.edge_count();
  if (eg < 3) throw InvalidArgument("regime needs e_G >= 3, got " + std::to_string(int(eg)));
  if (!(c1 > 0.0)) throw InvalidArgument("regime needs c1 > 0");
  if (!(big_n >= 2.0)) throw InvalidArgument("regime needs N >= 2");
  RegimeParams r;
  r.rho1 = vg / eg;
  r.rho2 = (vg - 2.0) / (eg - 1.0);
  r.c1 = c1;
  r.c2 = 0.1 * c1 / (eg + c1);
  r.p_low = std::pow(big_n, -r.rho1 + c1);
  r.p_high = std::pow(big_n, -r.rho2 - c1);
  r.p_range_nonempty = r.p_low <= r.p_high;
  r.lambda_low = 8.0 * std::log(big_n);
  r.lambda_high = std::pow(big_n, r.c2);
  r.lambda_range_nonempty = r.lambda_low <= r.lambda_high;
  return r;
}

}  // namespace hgconc
