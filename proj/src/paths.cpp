#include "halforthant/paths.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "halforthant/errors.hpp"

namespace ho {
namespace {

void require_2d(int dim, const char* what) {
  if (dim != 2) throw UnsupportedDimension(std::string(what) + " is defined for d = 2 only");
}

Rational sum(const std::vector<Rational>& xs) {
  Rational s(0);
  for (const auto& x : xs) s = s + x;
  return s;
}

}  // namespace

bool is_good(const Environment& env, const LatticePath& path) {
  require_2d(env.dim(), "is_good");
  Point x = path.start();
  for (Step s : path.steps()) {
    if (s == kWest && env.is_half(x)) return false;
    x += s;
  }
  return true;
}

LatticePath westernise(const Environment& env, const LatticePath& path) {
  require_2d(env.dim(), "westernise");
  if (!is_good(env, path)) throw PreconditionError("westernise: the input path is not good");
  LatticePath out(path.start());
  Point z = path.start();
  for (Step s : path.steps()) {
    const Step t = (s == kEast || s == kSouth) ? s : (env.is_half(z) ? kNorth : kWest);
    out.push(t);
    z += t;
  }
  return out;
}

std::optional<std::size_t> western_violation(const LatticePath& path, const LatticePath& west) {
  if (path.length() != west.length() || path.start() != west.start())
    throw std::invalid_argument("western_violation: paths differ in length or start");
  Point a = path.start(), b = west.start();
  for (std::size_t m = 0;; ++m) {
    const std::int64_t d1 = static_cast<std::int64_t>(a[0]) - b[0];
    const std::int64_t d2 = static_cast<std::int64_t>(a[1]) - b[1];
    if (d1 != d2 || d1 < 0) return m;
    if (m == path.length()) return std::nullopt;
    a += path.steps()[m];
    b += west.steps()[m];
  }
}

void WalkerParams::validate(const Rational& p) const {
  const Rational zero(0), one(1);
  if (alpha.empty()) throw ParameterError("walker: alpha is empty");
  if (sum(alpha) != one) throw ParameterError("walker: alpha does not sum to 1");
  for (const auto& x : alpha)
    if (x < zero) throw ParameterError("walker: negative alpha entry");
  if (beta) {
    if (beta->size() != alpha.size()) throw ParameterError("walker: alpha and beta differ in dimension");
    if (sum(*beta) != one) throw ParameterError("walker: beta does not sum to 1");
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if ((*beta)[i] < zero) throw ParameterError("walker: negative beta entry");
      if (alpha[i] != zero && (*beta)[i] != zero) throw ParameterError("walker: alpha and beta supports overlap");
    }
  } else if (a != one) {
    throw ParameterError("walker: beta may be absent only when a = 1");
  }
  if (!(p < b && b < a && a <= one)) throw ParameterError("walker: need p < b < a <= 1");
  if (eps <= zero) throw ParameterError("walker: eps must be positive");
  if (!(a - eps < b)) throw ParameterError("walker: need a - eps < b");
}

std::vector<Rational> WalkerParams::mu_b() const {
  std::vector<Rational> mu;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    Rational m = b * alpha[i];
    if (beta) m = m - (Rational(1) - b) * (*beta)[i];
    mu.push_back(m);
  }
  return mu;
}

WalkerParams WalkerParams::from_direction(const Direction& v, const Rational& eps) {
  if (v.l1() != Rational(1)) throw ParameterError("walker: direction must have unit l1 norm");
  WalkerParams w;
  std::vector<Rational> pos, neg;
  for (int i = 0; i < v.dim(); ++i) {
    const Rational c = v.coord(i);
    pos.push_back(c > Rational(0) ? c : Rational(0));
    neg.push_back(c < Rational(0) ? -c : Rational(0));
  }
  w.a = sum(pos);
  if (w.a == Rational(0)) throw ParameterError("walker: direction has no positive part");
  for (auto& x : pos) w.alpha.push_back(x / w.a);
  if (w.a != Rational(1)) {
    std::vector<Rational> beta;
    for (auto& x : neg) beta.push_back(x / (Rational(1) - w.a));
    w.beta = std::move(beta);
  }
  w.eps = eps;
  w.b = w.a - eps / Rational(2);
  return w;
}

LatticePath gamma_walk(const Environment& env, std::uint64_t aux_seed, const WalkerParams& params,
                       std::uint64_t length) {
  const int d = env.dim();
  if (params.dim() != d) throw ParameterError("walker: dimension mismatch");
  if (!params.beta) throw ParameterError("walker: beta is empty (a = 1); use the straight path");
  if (!less_than(params.b, 1.0) || !(params.b.to_double() > env.p()))
    throw ParameterError("walker: need p < b < 1");

  const double p = env.p();
  const double b = params.b.to_double();
  // Cumulative tables over the 2d step codes for the two site kinds.
  std::vector<double> half_cdf(2 * d), full_cdf(2 * d);
  double hc = 0, fc = 0;
  for (int c = 0; c < 2 * d; ++c) {
    const Step s(static_cast<std::uint8_t>(c));
    const auto i = static_cast<std::size_t>(s.axis());
    double hw = 0, fw = 0;
    if (s.negative()) {
      fw = (1 - b) * (*params.beta)[i].to_double() / (1 - p);
    } else {
      hw = params.alpha[i].to_double();
      fw = (b - p) * params.alpha[i].to_double() / (1 - p);
    }
    half_cdf[static_cast<std::size_t>(c)] = hc += hw;
    full_cdf[static_cast<std::size_t>(c)] = fc += fw;
  }

  auto pick = [&](const std::vector<double>& cdf, double u) {
    const double total = cdf.back();
    for (int c = 0; c < 2 * d; ++c)
      if (u * total < cdf[static_cast<std::size_t>(c)]) return Step(static_cast<std::uint8_t>(c));
    // Rounding at the top end: take the last step with positive mass.
    for (int c = 2 * d - 1; c >= 0; --c) {
      const double prev = c == 0 ? 0.0 : cdf[static_cast<std::size_t>(c - 1)];
      if (cdf[static_cast<std::size_t>(c)] > prev) return Step(static_cast<std::uint8_t>(c));
    }
    throw ParameterError("walker: no step has positive probability");
  };

  LatticePath path(Point::origin(d));
  Point x = Point::origin(d);
  for (std::uint64_t n = 0; n < length; ++n) {
    const double u = aux_uniform(aux_seed, n);
    const Step s = env.is_half(x) ? pick(half_cdf, u) : pick(full_cdf, u);
    path.push(s);
    x += s;
  }
  return path;
}

FlatCertificate certify_flat_direction(const Environment& env, const Direction& v, const Rational& eps,
                                       std::uint64_t n, std::uint64_t aux_seed) {
  if (v.dim() != env.dim()) throw std::domain_error("certify: dimension mismatch");
  if (v.l1() != Rational(1)) throw std::domain_error("certify: direction must have unit l1 norm");
  WalkerParams w;
  try {
    w = WalkerParams::from_direction(v, eps);
  } catch (const ParameterError& e) {
    throw std::domain_error(std::string("certify: ") + e.what());
  }
  if (!greater_equal(w.a, env.p())) throw std::domain_error("certify: direction is not in the good flat set");
  if (!(w.b.to_double() > env.p())) throw std::domain_error("certify: need eps < 2(a - p)");

  const int d = env.dim();
  const auto mn = static_cast<std::int64_t>(n) * v.m();
  Point target = v.integral();
  for (int i = 0; i < d; ++i) target[i] = static_cast<std::int32_t>(target[i] * static_cast<std::int64_t>(n));

  FlatCertificate cert;
  cert.target = target;
  const Rational allowed = Rational(2 * d) * eps * Rational(mn);
  cert.allowed_correction = floor_div(allowed.num(), allowed.den());

  if (!w.beta) {
    // Positive-orthant direction: the straight +e_i path is the walk.
    LatticePath path(Point::origin(d));
    for (int i = 0; i < d; ++i)
      for (std::int32_t k = 0; k < target[i]; ++k) path.push(Step::plus(i));
    cert.reached = true;
    cert.walk_steps = static_cast<std::int64_t>(path.length());
    cert.path = std::move(path);
    return cert;
  }

  cert.path = gamma_walk(env, aux_seed, w, static_cast<std::uint64_t>(mn));
  cert.walk_steps = mn;
  const Point end = cert.path.endpoint();
  for (int i = 0; i < d; ++i) {
    const std::int64_t deficit = static_cast<std::int64_t>(target[i]) - end[i];
    if (deficit < 0) {
      cert.deficit_negative = true;
      continue;
    }
    cert.correction += deficit;
  }
  if (cert.deficit_negative) return cert;
  for (int i = 0; i < d; ++i)
    for (std::int64_t k = end[i]; k < target[i]; ++k) cert.path.push(Step::plus(i));
  cert.reached = cert.correction <= cert.allowed_correction;
  return cert;
}

std::vector<Step> sample_marks(std::uint64_t seed, double p, std::size_t l) {
  std::vector<Step> marks(l);
  for (std::size_t j = 0; j < l; ++j) marks[j] = aux_uniform(seed, j) < p ? kNorth : kWest;
  return marks;
}

LatticePath build_gamma_bar(const std::vector<Step>& marks, const std::vector<std::uint32_t>& times,
                            const std::vector<Step>& forced, std::size_t l) {
  if (times.size() != forced.size()) throw ParameterError("gamma_bar: times and forced steps differ in count");
  if (times.size() > l) throw ParameterError("gamma_bar: more forced steps than the length");
  if (marks.size() < l) throw ParameterError("gamma_bar: too few marks");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= l) throw ParameterError("gamma_bar: time out of range");
    if (i > 0 && times[i] <= times[i - 1]) throw ParameterError("gamma_bar: times must be strictly increasing");
    if (forced[i] != kEast && forced[i] != kSouth) throw ParameterError("gamma_bar: forced steps must be E or S");
  }
  for (std::size_t j = 0; j < l; ++j)
    if (marks[j] != kWest && marks[j] != kNorth) throw ParameterError("gamma_bar: marks must be W or N");

  LatticePath path(Point::origin(2));
  std::size_t next = 0;
  for (std::size_t j = 0; j < l; ++j) {
    if (next < times.size() && times[next] == j) {
      path.push(forced[next++]);
    } else {
      path.push(marks[j]);
    }
  }
  return path;
}

std::string to_step_string(const LatticePath& path) {
  std::string out;
  for (int i = 0; i < path.dim(); ++i) {
    if (i) out += ':';
    out += std::to_string(path.start()[i]);
  }
  out += '|';
  for (Step s : path.steps()) {
    switch (s.code()) {
      case 0: out += 'E'; break;
      case 1: out += 'W'; break;
      case 2: out += 'N'; break;
      case 3: out += 'S'; break;
      default:
        out += s.negative() ? '-' : '+';
        out += std::to_string(s.axis() + 1);
    }
  }
  return out;
}

LatticePath parse_step_string(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) throw ParameterError("step string: missing '|'");
  std::vector<std::int32_t> coords;
  std::string_view head = text.substr(0, bar);
  while (true) {
    const auto colon = head.find(':');
    const auto tok = head.substr(0, colon);
    std::int32_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
      throw ParameterError("step string: bad start coordinate");
    coords.push_back(v);
    if (colon == std::string_view::npos) break;
    head.remove_prefix(colon + 1);
  }
  if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw ParameterError("step string: bad dimension");
  const int d = static_cast<int>(coords.size());
  Point start(d);
  for (int i = 0; i < d; ++i) start[i] = coords[static_cast<std::size_t>(i)];
  LatticePath path(start);
  const std::string_view body = text.substr(bar + 1);
  for (std::size_t k = 0; k < body.size();) {
    const char c = body[k];
    Step s;
    if (c == 'E' || c == 'W' || c == 'N' || c == 'S') {
      s = c == 'E' ? kEast : c == 'W' ? kWest : c == 'N' ? kNorth : kSouth;
      ++k;
    } else if (c == '+' || c == '-') {
      std::size_t e = k + 1;
      while (e < body.size() && std::isdigit(static_cast<unsigned char>(body[e]))) ++e;
      int axis = 0;
      const auto [ptr, ec] = std::from_chars(body.data() + k + 1, body.data() + e, axis);
      if (ec != std::errc() || e == k + 1) throw ParameterError("step string: bad axis");
      s = c == '+' ? Step::plus(axis - 1) : Step::minus(axis - 1);
      k = e;
    } else {
      throw ParameterError(std::string("step string: unexpected character '") + c + "'");
    }
    if (s.axis() >= d) throw ParameterError("step string: axis exceeds dimension");
    path.push(s);
  }
  return path;
}

}  // namespace ho
