#include "halforthant/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "halforthant/chemdist.hpp"
#include "halforthant/errors.hpp"
#include "halforthant/stats.hpp"

namespace ho {

Regime classify_regime(double p, const RegimeThresholds& t) {
  if (!t.dual_critical && !t.site_critical) return Regime::Unchecked;
  if (t.dual_critical && p < *t.dual_critical) return Regime::Inside;
  if (t.site_critical && 1.0 - p > *t.site_critical) return Regime::Inside;
  return Regime::Outside;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Inside: return "inside";
    case Regime::Outside: return "outside";
    case Regime::Unchecked: return "unchecked";
  }
  return "unchecked";
}

ZetaEstimate estimate_zeta(double p, const Direction& u, const std::vector<std::int64_t>& scales,
                           std::uint64_t master_seed, std::uint64_t seed_count, const ZetaOptions& opts) {
  if (scales.empty()) throw ParameterError("estimate_zeta: empty scale grid");
  for (auto n : scales)
    if (n <= 0) throw ParameterError("estimate_zeta: scales must be positive");
  if (seed_count == 0) throw ParameterError("estimate_zeta: need at least one seed");
  const int d = u.dim();

  ZetaEstimate est;
  est.u = u;
  est.p = p;
  est.scales = scales;
  est.regime = classify_regime(p, opts.thresholds);
  for (std::uint64_t j = 0; j < seed_count; ++j) est.seeds.push_back(bank_seed(master_seed, j));

  struct Sample {
    double ratio = std::numeric_limits<double>::quiet_NaN();
    std::uint32_t horizon = 0;
  };
  const std::size_t ns = scales.size();
  auto samples = map_tasks<Sample>(ns * seed_count, opts.exec, [&](std::size_t task) {
    const std::size_t i = task / seed_count, j = task % seed_count;
    const std::int64_t n = scales[i];
    const Point target = u.floor_scaled(Rational(n));
    const std::int64_t norm = l1_norm(target);
    Sample s;
    if (norm == 0) {
      s.ratio = 0.0;
      return s;
    }
    const Environment env(EnvConfig{d, p, std::numeric_limits<std::int32_t>::max() / 4, est.seeds[j]});
    const std::int64_t cap = std::min<std::int64_t>(opts.cap_factor * norm, kMaxHorizon);
    if (norm > cap) throw ConfigError("estimate_zeta: target beyond the 16-bit horizon");
    for (std::int64_t h = std::min(2 * norm, cap);; h = std::min(2 * h, cap)) {
      const auto t = passage_time(env, Point::origin(d), target, static_cast<std::uint32_t>(h));
      if (t) {
        if (*t < norm) throw std::logic_error("passage time below the l1 distance");
        s.ratio = static_cast<double>(*t) / static_cast<double>(n);
        s.horizon = static_cast<std::uint32_t>(h);
        return s;
      }
      if (h == cap) return s;
    }
  });

  est.ratios.assign(ns, std::vector<double>(seed_count));
  est.horizons.assign(ns, std::vector<std::uint32_t>(seed_count));
  for (std::size_t i = 0; i < ns; ++i) {
    std::vector<double> finite;
    for (std::size_t j = 0; j < seed_count; ++j) {
      const auto& s = samples[i * seed_count + j];
      est.ratios[i][j] = s.ratio;
      est.horizons[i][j] = s.horizon;
      if (std::isnan(s.ratio))
        est.inconclusive = true;
      else
        finite.push_back(s.ratio);
    }
    // A partial mean would be biased low, so any unreached sample voids the scale.
    const bool complete = finite.size() == seed_count;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    est.mean.push_back(complete ? mean(finite) : nan);
    est.stderr_.push_back(complete ? standard_error(finite) : nan);
    est.spread.push_back(complete ? sample_stddev(finite) : nan);
  }
  const auto last = static_cast<std::size_t>(std::max_element(scales.begin(), scales.end()) - scales.begin());
  est.estimate = est.mean[last];
  est.standard_error = est.stderr_[last];
  return est;
}

SGood in_s_good(const Direction& u, const Rational& p) {
  SGood g;
  Rational a(0);
  for (int i = 0; i < u.dim(); ++i) {
    const Rational c = u.coord(i);
    g.alpha.push_back(c > Rational(0) ? c : Rational(0));
    g.beta.push_back(c < Rational(0) ? -c : Rational(0));
    a = a + g.alpha.back();
  }
  g.a = a;
  g.member = u.l1() == Rational(1) && a >= p;
  return g;
}

long double eta_counting(double p, int d, long double eps, long double delta) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("eta: p must lie in [0, 1]");
  if (d < 2) throw ParameterError("eta: d must be at least 2");
  if (!(eps > 0)) throw ParameterError("eta: eps must be positive");
  if (!(std::fabs(delta) < eps)) throw ParameterError("eta: need |delta| < eps");
  const long double x = eps + delta;
  if (!(x > 0)) throw ParameterError("eta: need eps + delta > 0");
  const long double base = (2.0L * d - 1.0L) * (1.0L + eps) * std::exp(1.0L) / x;
  const long double q = 1.0L - static_cast<long double>(p);
  if (q == 0.0L) return 0.0L;
  return std::exp(x * std::log(base) + (1.0L - delta) * std::log(q));
}

MaxEpsilon max_epsilon(double p, int d, int sweep) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("max_epsilon: need 0 < p <= 1");
  auto g = [&](long double e) { return eta_counting(p, d, e, e * (1.0L - 1e-12L)); };
  long double lo = 0.0L, hi = 1.0L / 3.0L;
  MaxEpsilon out;
  if (g(hi) < 1.0L) {
    lo = hi;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-15L; ++it) {
      const long double mid = 0.5L * (lo + hi);
      if (g(mid) < 1.0L)
        lo = mid;
      else
        hi = mid;
      out.iterations = it + 1;
    }
  }
  // Verification sweep over the open interval |delta| < eps; shrink on any
  // failure.
  for (long double e = lo; e > 0; e *= 0.999L) {
    long double worst = 0.0L;
    bool ok = true;
    for (int k = 0; k < sweep; ++k) {
      const long double delta = -e + 2.0L * e * (k + 0.5L) / sweep;
      const long double v = eta_counting(p, d, e, delta);
      worst = std::max(worst, v);
      if (!(v < 1.0L) || !(1.0L - 2.0L * delta - e > 0.0L)) ok = false;
    }
    if (ok) {
      out.eps = static_cast<double>(e);
      out.worst_eta = static_cast<double>(worst);
      return out;
    }
  }
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Flat: return "FLAT";
    case Verdict::NonFlat: return "NON_FLAT";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Verdict direction_verdict(const Direction& u, const ZetaEstimate& est, const VerdictOptions& opts) {
  if (est.inconclusive || std::isnan(est.estimate)) return Verdict::Inconclusive;
  const double norm = u.l1().to_double();
  const double lo = std::min(opts.tau_flat, opts.tau_sep), hi = std::max(opts.tau_flat, opts.tau_sep);
  if (est.estimate <= norm * (1.0 + lo)) return Verdict::Flat;
  if (est.estimate >= norm * (1.0 + hi)) return Verdict::NonFlat;
  return Verdict::Inconclusive;
}

std::optional<Verdict> predicted_verdict(double p, const Direction& u, std::string* reason) {
  auto say = [&](const char* why) {
    if (reason) *reason = why;
  };
  const Direction w = u.scaled(Rational(1) / u.l1());
  SGood g = in_s_good(w, Rational(0));
  if (greater_equal(g.a, p)) {
    say("good flat set: positive mass a >= p");
    return Verdict::Flat;
  }
  if (w.dim() == 2 && w.coord(0) <= Rational(0) && w.coord(1) >= Rational(0) && less_than(w.coord(1), p)) {
    say("north-west direction (-(1-s), s) with s < p");
    return Verdict::NonFlat;
  }
  if (p > 0.0) {
    const double eps = max_epsilon(p, w.dim(), 100).eps;
    for (int i = 0; i < w.dim(); ++i) {
      double dist = 0;
      for (int k = 0; k < w.dim(); ++k) dist += std::fabs(w.coord(k).to_double() + (k == i ? 1.0 : 0.0));
      if (dist < eps) {
        say("within the counting-bound neighbourhood of -e_i");
        return Verdict::NonFlat;
      }
    }
  }
  say("no prediction");
  return std::nullopt;
}

std::vector<PropertyResult> property_suite_zeta(double p, const std::vector<PropertyCase>& cases, std::int64_t scale,
                                                std::uint64_t master_seed, std::uint64_t seed_count,
                                                const ZetaOptions& opts) {
  auto run = [&](const Direction& dir) {
    const auto e = estimate_zeta(p, dir, {scale}, master_seed, seed_count, opts);
    return std::pair{e.estimate, e.standard_error};
  };
  if (cases.empty()) return {};
  const int d = cases.front().u.dim();
  Point west(d);
  west[0] = -1;
  const auto [zw, sw] = run(Direction::from_point(west));
  std::vector<PropertyResult> out;
  for (const auto& c : cases) {
    PropertyResult r;
    r.zeta_west = zw;
    r.se_west = sw;
    std::tie(r.zeta_u, r.se_u) = run(c.u);
    std::tie(r.zeta_v, r.se_v) = run(c.v);
    std::tie(r.zeta_qu, r.se_qu) = run(c.u.scaled(c.q));
    std::tie(r.zeta_sum, r.se_sum) = run(c.u + c.v);
    const double q = c.q.to_double();
    const double slack_h = 3.0 * std::hypot(r.se_qu, q * r.se_u);
    r.homogeneity = std::fabs(r.zeta_qu - q * r.zeta_u) <= slack_h;
    const double slack_s = 3.0 * std::sqrt(r.se_sum * r.se_sum + r.se_u * r.se_u + r.se_v * r.se_v);
    r.subadditivity = r.zeta_sum <= r.zeta_u + r.zeta_v + slack_s;
    const double hn = c.v.l1().to_double();
    const double slack_c = 3.0 * std::sqrt(r.se_sum * r.se_sum + r.se_u * r.se_u + hn * hn * r.se_west * r.se_west);
    r.continuity = std::fabs(r.zeta_sum - r.zeta_u) <= hn * r.zeta_west + slack_c;
    out.push_back(r);
  }
  return out;
}

std::vector<Direction> diamond_sweep(int count) {
  if (count < 1) throw ParameterError("diamond_sweep: need at least one direction");
  std::vector<Direction> out;
  const Rational one(1);
  for (int k = 0; k < count; ++k) {
    const Rational t(4 * k, count);
    const std::int64_t j = floor_div(t.num(), t.den());
    const Rational f = t - Rational(j);
    std::vector<Rational> c;
    switch (j) {
      case 0: c = {one - f, f}; break;
      case 1: c = {-f, one - f}; break;
      case 2: c = {-(one - f), -f}; break;
      default: c = {f, -(one - f)}; break;
    }
    out.emplace_back(c);
  }
  return out;
}

}  // namespace ho
