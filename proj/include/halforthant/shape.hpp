#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halforthant/env.hpp"
#include "halforthant/parallel.hpp"
#include "halforthant/rational.hpp"

namespace ho {

// Emergent thresholds used to place p relative to the flat regime:
// inside iff p < dual_critical or 1 - p > site_critical.
struct RegimeThresholds {
  std::optional<double> dual_critical;  // oriented triangular-lattice threshold
  std::optional<double> site_critical;  // site percolation threshold in Z^d
};

enum class Regime { Inside, Outside, Unchecked };
Regime classify_regime(double p, const RegimeThresholds& thresholds);
const char* regime_name(Regime r);

struct ZetaOptions {
  // Horizon starts at ceil(2 |target|_1) and doubles while the target is
  // unreached, up to cap_factor * |target|_1 (and the 16-bit limit).
  std::int64_t cap_factor = 8;
  RegimeThresholds thresholds;
  Execution exec = Execution::Parallel;
};

struct ZetaEstimate {
  Direction u;
  double p = 0.0;
  std::vector<std::int64_t> scales;          // n values; targets are [n u]
  std::vector<std::uint64_t> seeds;
  // ratios[i][j] = T_{[n_i u]} / n_i for seed j; NaN if unreached at the cap.
  std::vector<std::vector<double>> ratios;
  std::vector<std::vector<std::uint32_t>> horizons;  // horizon that resolved each sample
  std::vector<double> mean;                  // per scale
  std::vector<double> stderr_;               // per scale
  std::vector<double> spread;                // sample standard deviation per scale
  double estimate = 0.0;                     // mean at the largest scale
  double standard_error = 0.0;
  bool inconclusive = false;                 // some sample unreached at the cap
  Regime regime = Regime::Unchecked;
};

// Seeds are bank_seed(master_seed, j), j < seed_count.
ZetaEstimate estimate_zeta(double p, const Direction& u, const std::vector<std::int64_t>& scales,
                           std::uint64_t master_seed, std::uint64_t seed_count, const ZetaOptions& opts = {});

struct SGood {
  bool member = false;
  Rational a;
  std::vector<Rational> alpha, beta;
};

// u is in the good flat set iff |u|_1 = 1 and its positive mass a >= p; the
// witness is then forced to alpha = u^+, beta = u^-.
SGood in_s_good(const Direction& u, const Rational& p);

// ((2d-1)(1+eps)e/(eps+delta))^(eps+delta) (1-p)^(1-delta), in long double.
long double eta_counting(double p, int d, long double eps, long double delta);

struct MaxEpsilon {
  double eps = 0.0;
  double worst_eta = 0.0;  // largest eta(eps, delta) on the verification sweep
  int iterations = 0;
};

// Largest eps in (0, 1/3) found by bisection with eta(eps, delta) < 1 for all
// |delta| < eps (eta increases in delta, so delta -> eps is the binding
// case) and 1 - 2 delta - eps > 0. The result is re-verified on `sweep`
// delta values.
MaxEpsilon max_epsilon(double p, int d, int sweep = 1000);

enum class Verdict { Flat, NonFlat, Inconclusive };
const char* verdict_name(Verdict v);

struct VerdictOptions {
  double tau_flat = 0.05;
  double tau_sep = 0.02;
};

// Flat if estimate <= |u|_1 (1 + min(tau)), non-flat if estimate >=
// |u|_1 (1 + max(tau)), inconclusive otherwise or when the estimate is.
Verdict direction_verdict(const Direction& u, const ZetaEstimate& est, const VerdictOptions& opts = {});

// What the theory predicts for u at p, if anything: flat for the good flat
// set, non-flat for d = 2 directions (-(1-s), s) with s < p and for
// directions within max_epsilon of some -e_i.
std::optional<Verdict> predicted_verdict(double p, const Direction& u, std::string* reason = nullptr);

struct PropertyCase {
  Direction u, v;
  Rational q;
};

struct PropertyResult {
  double zeta_u = 0, zeta_v = 0, zeta_qu = 0, zeta_sum = 0, zeta_west = 0;
  double se_u = 0, se_v = 0, se_qu = 0, se_sum = 0, se_west = 0;
  bool homogeneity = false;   // |zeta(qu) - q zeta(u)| <= slack
  bool subadditivity = false; // zeta(u+v) <= zeta(u) + zeta(v) + slack
  bool continuity = false;    // |zeta(u+v) - zeta(u)| <= |v|_1 zeta(-e1) + slack
};

// Homogeneity, subadditivity and continuity on a shared seed bank, with
// slack = 3 x combined standard error.
std::vector<PropertyResult> property_suite_zeta(double p, const std::vector<PropertyCase>& cases, std::int64_t scale,
                                                std::uint64_t master_seed, std::uint64_t seed_count,
                                                const ZetaOptions& opts = {});

// K directions u_k with |u_k|_1 = 1 going counterclockwise from e1, spaced
// uniformly in arc length along the l1 circle. d = 2.
std::vector<Direction> diamond_sweep(int count);

}  // namespace ho
