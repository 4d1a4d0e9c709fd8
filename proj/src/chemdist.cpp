#include "halforthant/chemdist.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <ostream>
#include <string>

#include "binio.hpp"
#include "halforthant/errors.hpp"

namespace ho {
namespace {

EnvFingerprint fingerprint_of(const Environment& env) { return {env.seed(), env.p(), env.dim()}; }

void check_horizon(std::uint64_t horizon) {
  if (horizon > kMaxHorizon)
    throw ConfigError("horizon " + std::to_string(horizon) + " exceeds the 16-bit limit " +
                      std::to_string(kMaxHorizon));
}

void check_inside_env(const Environment& env, const Box& box) {
  const Box eb = env.box();
  if (!eb.contains(box.lo()) || !eb.contains(box.hi()))
    throw ConfigError("environment radius " + std::to_string(env.radius()) + " too small for the search box " +
                      box.lo().str() + ".." + box.hi().str());
}

// Level-synchronous BFS on the box of `half`. When `target` is set, a
// neighbour y at level k is admitted only if k + |target - y|_1 <= horizon,
// and the search stops once the target is labelled.
void bfs_kernel(const SiteBitmap& half, const Point& source, std::uint32_t horizon, std::vector<std::uint16_t>& values,
                const std::optional<Point>& target, Execution exec) {
  const Box& box = half.box();
  const int nsteps = 2 * box.dim();
  values.assign(box.size(), kUnreached);
  values[box.index(source)] = 0;
  const std::optional<std::uint64_t> tidx = target ? std::optional(box.index(*target)) : std::nullopt;

  auto admit = [&](const Point& y, std::uint32_t level) {
    if (!box.contains(y)) return false;
    return !target || level + static_cast<std::uint64_t>(l1_norm(*target - y)) <= horizon;
  };

  std::vector<Point> frontier{source}, next;
  std::vector<std::vector<Point>> locals(static_cast<std::size_t>(max_threads()));
  for (std::uint32_t k = 0; k < horizon && !frontier.empty(); ++k) {
    if (tidx && values[*tidx] != kUnreached) break;
    const std::uint32_t level = k + 1;
    const auto code = static_cast<std::uint16_t>(level);
    next.clear();
    if (exec == Execution::Serial) {
      for (const Point& x : frontier) {
        const bool is_half = half.test(box.index(x));
        for (int c = 0; c < nsteps; ++c) {
          const Step s(static_cast<std::uint8_t>(c));
          if (is_half && s.negative()) continue;
          const Point y = x + s;
          if (!admit(y, level)) continue;
          auto& v = values[box.index(y)];
          if (v == kUnreached) {
            v = code;
            next.push_back(y);
          }
        }
      }
    } else {
      const auto nf = static_cast<std::int64_t>(frontier.size());
#pragma omp parallel
      {
        auto& local = locals[static_cast<std::size_t>(omp_get_thread_num())];
        local.clear();
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < nf; ++i) {
          const Point& x = frontier[static_cast<std::size_t>(i)];
          const bool is_half = half.test(box.index(x));
          for (int c = 0; c < nsteps; ++c) {
            const Step s(static_cast<std::uint8_t>(c));
            if (is_half && s.negative()) continue;
            const Point y = x + s;
            if (!admit(y, level)) continue;
            std::atomic_ref<std::uint16_t> v(values[box.index(y)]);
            std::uint16_t expected = kUnreached;
            if (v.load(std::memory_order_relaxed) == kUnreached &&
                v.compare_exchange_strong(expected, code, std::memory_order_relaxed))
              local.push_back(y);
          }
        }
      }
      for (auto& local : locals) next.insert(next.end(), local.begin(), local.end());
    }
    frontier.swap(next);
  }
}

}  // namespace

DistanceField::DistanceField(const Point& source, std::uint32_t horizon, const EnvFingerprint& fp,
                             std::vector<std::uint16_t> values)
    : source_(source),
      horizon_(horizon),
      fp_(fp),
      box_(Box::cube(source, static_cast<std::int32_t>(horizon))),
      values_(std::move(values)) {
  if (values_.size() != box_.size()) throw std::invalid_argument("DistanceField: value count mismatch");
}

std::optional<std::uint32_t> DistanceField::value(const Point& x) const {
  if (!box_.contains(x)) return std::nullopt;
  const auto v = values_[box_.index(x)];
  if (v == kUnreached) return std::nullopt;
  return v;
}

DistanceField bfs_distances(const Environment& env, const Point& source, std::uint32_t horizon, Execution exec) {
  check_horizon(horizon);
  if (source.dim() != env.dim()) throw ConfigError("source dimension does not match the environment");
  if (linf_norm(source) + horizon > env.radius())
    throw ConfigError("horizon exceeds box capacity: |source|_inf + n = " +
                      std::to_string(linf_norm(source) + horizon) + " > R = " + std::to_string(env.radius()));
  const Box box = Box::cube(source, static_cast<std::int32_t>(horizon));
  const SiteBitmap half(box, env.seed(), env.p(), exec);
  std::vector<std::uint16_t> values;
  bfs_kernel(half, source, horizon, values, std::nullopt, exec);
  return DistanceField(source, horizon, fingerprint_of(env), std::move(values));
}

std::vector<Point> level_set(const DistanceField& field, std::uint32_t k) {
  if (k > field.horizon())
    throw std::out_of_range("level " + std::to_string(k) + " exceeds horizon " + std::to_string(field.horizon()));
  std::vector<Point> out;
  const auto vals = field.values();
  Point x = field.box().lo();
  for (std::uint64_t i = 0; i < vals.size(); ++i, field.box().next(x))
    if (vals[i] == k) out.push_back(x);
  return out;
}

std::optional<std::uint32_t> passage_time(const Environment& env, const Point& u, const Point& v, std::uint32_t cap,
                                          Execution exec) {
  check_horizon(cap);
  if (u.dim() != env.dim() || v.dim() != env.dim()) throw ConfigError("point dimension does not match the environment");
  if (u == v) return 0u;
  const std::int64_t dist = l1_norm(v - u);
  if (dist > cap) return std::nullopt;
  const auto slack = static_cast<std::int32_t>((cap - dist) / 2);
  Point lo(u.dim()), hi(u.dim());
  for (int i = 0; i < u.dim(); ++i) {
    lo[i] = std::min(u[i], v[i]) - slack;
    hi[i] = std::max(u[i], v[i]) + slack;
  }
  const Box box(lo, hi);
  check_inside_env(env, box);
  const SiteBitmap half(box, env.seed(), env.p(), exec);
  std::vector<std::uint16_t> values;
  bfs_kernel(half, u, cap, values, v, exec);
  const auto t = values[box.index(v)];
  if (t == kUnreached) return std::nullopt;
  return t;
}

DnResult d_n(const DistanceField& field, const Point& v, std::int64_t denominator) {
  if (v.dim() != field.source().dim()) throw std::domain_error("d_n: dimension mismatch");
  const std::int64_t norm = l1_norm(v);
  if (norm == 0) throw std::domain_error("d_n: v must be nonzero");
  const std::int64_t q = denominator > 0 ? denominator : 8 * norm;
  const std::int64_t n = field.horizon();
  // |[kv]|_1 >= k|v|_1 - d, so j beyond this bound cannot have T <= n.
  const std::int64_t jmax = (q * (n + v.dim())) / norm + 1;
  std::int64_t best = 0;
  for (std::int64_t j = 1; j <= jmax; ++j) {
    Point y = field.source();
    for (int i = 0; i < v.dim(); ++i) y[i] += static_cast<std::int32_t>(floor_div(j * v[i], q));
    if (field.value(y)) best = j;
  }
  return {Rational(best, q), q};
}

ConstrainedField::ConstrainedField(std::uint32_t horizon, std::uint32_t budget, StepSet b_steps,
                                   const EnvFingerprint& fp, std::vector<std::uint16_t> values)
    : horizon_(horizon),
      budget_(budget),
      b_steps_(b_steps),
      fp_(fp),
      box_(Box::cube(Point::origin(fp.dim), static_cast<std::int32_t>(horizon))),
      values_(std::move(values)) {
  if (values_.size() != box_.size()) throw std::invalid_argument("ConstrainedField: value count mismatch");
}

std::optional<std::uint32_t> ConstrainedField::value(const Point& x) const {
  if (!box_.contains(x)) return std::nullopt;
  const auto v = values_[box_.index(x)];
  if (v == kUnreached) return std::nullopt;
  return v;
}

StepSet default_b_steps(int dim) {
  if (dim != 2) throw UnsupportedDimension("default b-steps {+e1,-e2} are defined for d = 2 only");
  return StepSet{kEast, kSouth};
}

namespace {

struct State {
  Point x;
  std::uint32_t b;
};

// BFS over (position, b-steps used). `admit(y, level, b)` may prune states
// that provably cannot contribute; `stop(y)` ends the search early.
template <class Admit, class Stop>
std::vector<std::uint16_t> constrained_bfs(const Environment& env, std::uint32_t horizon, std::uint32_t budget,
                                           StepSet b_steps, Admit&& admit, Stop&& stop, bool* stopped) {
  check_horizon(horizon);
  if (env.radius() < static_cast<std::int64_t>(horizon)) throw ConfigError("horizon exceeds box capacity");
  budget = std::min(budget, horizon);
  const Box box = Box::cube(Point::origin(env.dim()), static_cast<std::int32_t>(horizon));
  const SiteBitmap half(box, env.seed(), env.p());
  const std::uint64_t layer = box.size();
  std::vector<std::uint16_t> values(layer * (budget + 1), kUnreached);
  const int nsteps = 2 * env.dim();
  const Point o = Point::origin(env.dim());
  values[box.index(o)] = 0;
  if (stopped) *stopped = stop(o);
  if (stopped && *stopped) return values;
  std::vector<State> frontier{{o, 0}}, next;
  for (std::uint32_t k = 0; k < horizon && !frontier.empty(); ++k) {
    const auto level = static_cast<std::uint16_t>(k + 1);
    next.clear();
    for (const auto& [x, b] : frontier) {
      const bool is_half = half.test(box.index(x));
      for (int c = 0; c < nsteps; ++c) {
        const Step s(static_cast<std::uint8_t>(c));
        if (is_half && s.negative()) continue;
        const std::uint32_t nb = b + (b_steps.contains(s) ? 1u : 0u);
        if (nb > budget) continue;
        const Point y = x + s;
        if (!box.contains(y) || !admit(y, level, nb)) continue;
        auto& v = values[nb * layer + box.index(y)];
        if (v != kUnreached) continue;
        v = level;
        if (stopped && stop(y)) {
          *stopped = true;
          return values;
        }
        next.push_back({y, nb});
      }
    }
    frontier.swap(next);
  }
  return values;
}

}  // namespace

ConstrainedField constrained_reach(const Environment& env, std::uint32_t horizon, std::uint32_t budget,
                                   StepSet b_steps) {
  auto layered = constrained_bfs(
      env, horizon, budget, b_steps, [](const Point&, std::uint32_t, std::uint32_t) { return true; },
      [](const Point&) { return false; }, nullptr);
  const std::uint64_t layer = Box::cube(Point::origin(env.dim()), static_cast<std::int32_t>(horizon)).size();
  std::vector<std::uint16_t> best(layered.begin(), layered.begin() + static_cast<std::ptrdiff_t>(layer));
  for (std::uint64_t off = layer; off < layered.size(); off += layer)
    for (std::uint64_t i = 0; i < layer; ++i) best[i] = std::min(best[i], layered[off + i]);
  return ConstrainedField(horizon, std::min(budget, horizon), b_steps,
                          {env.seed(), env.p(), env.dim()}, std::move(best));
}

bool jn_indicator(const Environment& env, std::uint32_t n, const Rational& s, const Rational& eps) {
  if (env.dim() != 2) throw UnsupportedDimension("J_n is defined for d = 2 only");
  if (s < Rational(0) || s >= Rational(1)) throw ParameterError("s must lie in [0, 1)");
  if (eps <= Rational(0)) throw ParameterError("eps must be positive");
  const Rational rn(n);
  const Rational quarter = eps / Rational(4);
  const auto horizon = static_cast<std::uint32_t>(floor_div((rn * (Rational(1) + eps)).num(), (rn * (Rational(1) + eps)).den()));
  const auto budget = static_cast<std::uint32_t>(floor_div((rn * eps).num(), (rn * eps).den()));
  const Rational ymax_r = rn * (s + quarter);
  const Rational xmax_r = -(rn * (Rational(1) - s - quarter));
  const std::int64_t ymax = floor_div(ymax_r.num(), ymax_r.den());
  const std::int64_t xmax = floor_div(xmax_r.num(), xmax_r.den());
  const std::int64_t need = n;

  auto in_region = [&](const Point& x) {
    return x[1] >= 0 && x[1] <= ymax && x[0] <= xmax && l1_norm(x) >= need;
  };
  // Admissible lower bounds on the remaining length and b-steps.
  auto admit = [&](const Point& y, std::uint32_t level, std::uint32_t b) {
    const std::int64_t dx = std::max<std::int64_t>(0, y[0] - xmax);
    const std::int64_t down = std::max<std::int64_t>(0, y[1] - ymax);
    const std::int64_t up = std::max<std::int64_t>(0, -y[1]);
    const std::int64_t rest = std::max(dx + down + up, need - l1_norm(y));
    return level + rest <= horizon && b + down <= budget;
  };
  bool hit = false;
  constrained_bfs(env, horizon, budget, default_b_steps(2), admit, in_region, &hit);
  return hit;
}

void write_field_dump(std::ostream& os, const DistanceField& field) {
  const auto& fp = field.fingerprint();
  os.write("HOCD", 4);
  binio::put<std::uint16_t>(os, 1);
  binio::put<std::uint16_t>(os, static_cast<std::uint16_t>(field.source().dim()));
  binio::put<std::uint32_t>(os, field.horizon());
  for (int i = 0; i < field.source().dim(); ++i) binio::put<std::int32_t>(os, field.source()[i]);
  binio::put<double>(os, fp.p);
  binio::put<std::uint64_t>(os, fp.seed);
  for (auto v : field.values()) binio::put<std::uint16_t>(os, v);
}

DistanceField read_field_dump(std::istream& is) {
  binio::expect_magic(is, "HOCD");
  if (binio::get<std::uint16_t>(is) != 1) throw std::runtime_error("unsupported HOCD version");
  const int dim = binio::get<std::uint16_t>(is);
  if (dim < 1 || dim > kMaxDim) throw std::runtime_error("bad HOCD dimension");
  const auto horizon = binio::get<std::uint32_t>(is);
  Point source(dim);
  for (int i = 0; i < dim; ++i) source[i] = binio::get<std::int32_t>(is);
  EnvFingerprint fp;
  fp.dim = dim;
  fp.p = binio::get<double>(is);
  fp.seed = binio::get<std::uint64_t>(is);
  const Box box = Box::cube(source, static_cast<std::int32_t>(horizon));
  std::vector<std::uint16_t> values(box.size());
  for (auto& v : values) v = binio::get<std::uint16_t>(is);
  return DistanceField(source, horizon, fp, std::move(values));
}

void write_level_set_csv(std::ostream& os, int dim, const std::vector<Point>& points, std::uint32_t k,
                         bool header) {
  if (header) {
    for (int i = 0; i < dim; ++i) os << 'x' << (i + 1) << ',';
    os << "k\n";
  }
  for (const auto& x : points) {
    for (int i = 0; i < x.dim(); ++i) os << x[i] << ',';
    os << k << '\n';
  }
}

}  // namespace ho
