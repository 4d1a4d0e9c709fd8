#include "halforthant/perc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "halforthant/errors.hpp"

namespace ho {
namespace {

std::uint64_t find_root(std::vector<std::uint64_t>& parent, std::uint64_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void unite(std::vector<std::uint64_t>& parent, std::uint64_t a, std::uint64_t b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  // The smaller index becomes the root, so roots are canonical.
  if (a < b)
    parent[b] = a;
  else
    parent[a] = b;
}

}  // namespace

PercLabels::PercLabels(const SiteBitmap& occupied, bool invert) : box_(occupied.box()) {
  const std::uint64_t n = box_.size();
  const int d = box_.dim();
  std::vector<std::uint64_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto occ = [&](std::uint64_t i) { return occupied.test(i) != invert; };

  // Forward neighbours only: +e_i in row-major order.
  Point x = box_.lo();
  std::uint64_t i = 0;
  do {
    if (occ(i)) {
      for (int a = 0; a < d; ++a) {
        if (x[a] == box_.hi()[a]) continue;
        const std::uint64_t j = i + box_.stride(a);
        if (occ(j)) unite(parent, i, j);
      }
    }
    ++i;
  } while (box_.next(x));

  labels_.assign(n, kEmpty);
  sizes_.assign(n, 0);
  for (std::uint64_t k = 0; k < n; ++k) {
    if (!occ(k)) continue;
    const std::uint64_t r = find_root(parent, k);
    labels_[k] = static_cast<std::int64_t>(r);
    if (sizes_[r]++ == 0) ++count_;
  }

  std::uint64_t best = 0;
  for (std::uint64_t k = 0; k < n; ++k)
    if (sizes_[k] > best) {
      best = sizes_[k];
      giant_ = static_cast<std::int64_t>(k);
    }

  // Face contacts per label: bit 2a for the low face of axis a, 2a+1 high.
  std::vector<std::uint32_t> faces(n, 0);
  x = box_.lo();
  i = 0;
  do {
    if (labels_[i] != kEmpty) {
      std::uint32_t f = 0;
      for (int a = 0; a < d; ++a) {
        if (x[a] == box_.lo()[a]) f |= 1u << (2 * a);
        if (x[a] == box_.hi()[a]) f |= 1u << (2 * a + 1);
      }
      faces[static_cast<std::uint64_t>(labels_[i])] |= f;
    }
    ++i;
  } while (box_.next(x));
  for (std::uint64_t k = 0; k < n; ++k)
    if (faces[k] != 0) boundary_.push_back(static_cast<std::int64_t>(k));
  if (giant_ != kEmpty) {
    const std::uint32_t f = faces[static_cast<std::uint64_t>(giant_)];
    for (int a = 0; a < d; ++a)
      if (((f >> (2 * a)) & 3u) == 3u) giant_spans_ = true;
  }
}

std::int64_t PercLabels::label(const Point& x) const {
  if (!box_.contains(x)) return kEmpty;
  return labels_[box_.index(x)];
}

std::uint64_t PercLabels::cluster_size(std::int64_t label) const {
  if (label < 0) return 0;
  return sizes_[static_cast<std::uint64_t>(label)];
}

bool PercLabels::in_proxy(const Point& x) const {
  const std::int64_t l = label(x);
  if (l == kEmpty) return false;
  if (giant_spans_) return l == giant_;
  return std::binary_search(boundary_.begin(), boundary_.end(), l);
}

PercLabels site_labels(double q, std::uint64_t seed, int dim, std::int32_t radius) {
  EnvConfig cfg{dim, q, radius, seed};
  cfg.validate();
  return PercLabels(SiteBitmap(Box::cube(Point::origin(dim), radius), seed, q));
}

std::optional<std::int32_t> n_plus(const PercLabels& labels) {
  Point x = Point::origin(labels.box().dim());
  for (std::int32_t n = 0; n <= labels.box().hi()[0]; ++n) {
    x[0] = n;
    if (labels.in_proxy(x)) return n;
  }
  return std::nullopt;
}

std::optional<std::int32_t> n_minus(const PercLabels& labels) {
  Point x = Point::origin(labels.box().dim());
  for (std::int32_t n = 1; -n >= labels.box().lo()[0]; ++n) {
    x[0] = -n;
    if (labels.in_proxy(x)) return n;
  }
  return std::nullopt;
}

Detour detour_path(const Environment& env) {
  const int d = env.dim();
  const Box box = env.box();
  const SiteBitmap half(box, env.seed(), env.p());
  const PercLabels full(half, true);
  Detour out;
  const auto np = n_plus(full);
  const auto nm = n_minus(full);
  if (!np || !nm) return out;
  out.n_plus = *np;
  out.n_minus = *nm;

  Point from = Point::origin(d), to = Point::origin(d);
  from[0] = *np;
  to[0] = -*nm;
  if (full.label(from) != full.label(to)) {
    out.status = DetourStatus::Disconnected;
    return out;
  }
  // Undirected BFS inside the Full sites, recording the arriving step.
  std::vector<std::uint8_t> via(box.size(), 0xFF);
  const std::uint64_t src = box.index(from), dst = box.index(to);
  via[src] = 0xFE;
  std::deque<Point> queue{from};
  while (!queue.empty() && via[dst] == 0xFF) {
    const Point x = queue.front();
    queue.pop_front();
    for (int c = 0; c < 2 * d; ++c) {
      const Step s(static_cast<std::uint8_t>(c));
      const Point y = x + s;
      if (!box.contains(y)) continue;
      const std::uint64_t j = box.index(y);
      if (via[j] != 0xFF || half.test(j)) continue;
      via[j] = static_cast<std::uint8_t>(c);
      queue.push_back(y);
    }
  }
  std::vector<Step> middle;
  for (Point y = to; y != from;) {
    const Step s(via[box.index(y)]);
    middle.push_back(s);
    y += s.reversed();
  }
  std::reverse(middle.begin(), middle.end());

  LatticePath path(Point::origin(d));
  for (std::int32_t k = 0; k < *np; ++k) path.push(Step::plus(0));
  for (Step s : middle) path.push(s);
  for (std::int32_t k = 1; k < *nm; ++k) path.push(Step::plus(0));
  out.m = static_cast<std::int64_t>(middle.size());
  out.path = std::move(path);
  out.status = DetourStatus::Ok;
  return out;
}

void validate_orientation(const std::vector<Step>& orientation, int dim) {
  if (static_cast<int>(orientation.size()) != dim) throw ParameterError("orientation must have d steps");
  std::uint32_t axes = 0;
  for (Step s : orientation) {
    if (s.axis() >= dim) throw ParameterError("orientation step outside the dimension");
    if (axes & (1u << s.axis())) throw ParameterError("orientation is not a basis (repeated axis)");
    axes |= 1u << s.axis();
  }
}

std::vector<Step> parse_orientation(const std::string& text, int dim) {
  // Tokens like "+1,+2" or "-1 +2".
  std::vector<Step> out;
  std::string norm = text;
  std::replace(norm.begin(), norm.end(), ',', ' ');
  std::istringstream is(norm);
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-')) throw ParameterError("bad orientation token " + tok);
    const int axis = std::stoi(tok.substr(1)) - 1;
    if (axis < 0) throw ParameterError("bad orientation axis " + tok);
    out.push_back(tok[0] == '+' ? Step::plus(axis) : Step::minus(axis));
  }
  validate_orientation(out, dim);
  return out;
}

std::vector<std::int64_t> orientation_coords(const std::vector<Step>& orientation, const Point& x) {
  std::vector<std::int64_t> k;
  for (Step s : orientation) k.push_back(static_cast<std::int64_t>(s.sign()) * x[s.axis()]);
  return k;
}

namespace {

// Runs the generations and calls visit(t, generation) for t = 0..T; stops
// early if visit returns false or the cluster dies.
template <class Visit>
void run_generations(double q, const std::vector<Step>& orientation, std::uint32_t generations, std::uint64_t seed,
                     Visit&& visit) {
  const int d = static_cast<int>(orientation.size());
  const Point o = Point::origin(d);
  std::vector<Point> cur;
  if (site_uniform(seed, o) < q) cur.push_back(o);
  if (!visit(0u, cur)) return;
  std::vector<Point> next;
  for (std::uint32_t t = 1; t <= generations; ++t) {
    next.clear();
    for (const Point& y : cur)
      for (Step s : orientation) next.push_back(y + s);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::erase_if(next, [&](const Point& z) { return !(site_uniform(seed, z) < q); });
    cur.swap(next);
    if (!visit(t, cur)) return;
  }
}

std::vector<double> projected(const std::vector<Step>& orientation, const Point& x, std::uint32_t t) {
  const auto k = orientation_coords(orientation, x);
  std::vector<double> y;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) y.push_back(static_cast<double>(k[i]) / t);
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct SeedSupport {
  bool alive = false;
  std::vector<double> h;
  std::vector<std::vector<double>> argmax;
};

SeedSupport support_of(const std::vector<Step>& orientation, const std::vector<Point>& cloud, std::uint32_t t,
                       const std::vector<std::vector<double>>& dirs) {
  SeedSupport s;
  if (cloud.empty() || t == 0) return s;
  s.alive = true;
  s.h.assign(dirs.size(), -std::numeric_limits<double>::infinity());
  s.argmax.resize(dirs.size());
  for (const Point& x : cloud) {
    const auto y = projected(orientation, x, t);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double v = dot(dirs[k], y);
      if (v > s.h[k]) {
        s.h[k] = v;
        s.argmax[k] = y;
      }
    }
  }
  return s;
}

ConeHat aggregate(const std::vector<Step>& orientation, double q, std::uint32_t t,
                  std::vector<std::vector<double>> dirs, const std::vector<SeedSupport>& per_seed) {
  ConeHat c;
  c.orientation = orientation;
  c.q = q;
  c.t = t;
  c.seeds = per_seed.size();
  c.directions = std::move(dirs);
  const std::size_t m = c.directions.size();
  const std::size_t dm1 = orientation.size() - 1;
  c.support.assign(m, 0.0);
  c.support_points.assign(m, std::vector<double>(dm1, 0.0));
  for (const auto& s : per_seed) {
    c.per_seed_support.push_back(s.alive ? s.h : std::vector<double>{});
    if (!s.alive) continue;
    ++c.survivors;
    for (std::size_t k = 0; k < m; ++k) {
      c.support[k] += s.h[k];
      for (std::size_t i = 0; i < dm1; ++i) c.support_points[k][i] += s.argmax[k][i];
    }
  }
  if (c.survivors > 0) {
    const auto n = static_cast<double>(c.survivors);
    for (std::size_t k = 0; k < m; ++k) {
      c.support[k] /= n;
      for (auto& v : c.support_points[k]) v /= n;
    }
  }
  return c;
}

}  // namespace

OrientedReach oriented_reach(double q, const std::vector<Step>& orientation, std::uint32_t generations,
                             std::uint64_t seed, std::size_t window) {
  const int d = static_cast<int>(orientation.size());
  validate_orientation(orientation, d);
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("q must lie in [0, 1]");
  OrientedReach r;
  r.orientation = orientation;
  r.q = q;
  r.seed = seed;
  r.generations = generations;
  std::deque<std::vector<Point>> kept;
  run_generations(q, orientation, generations, seed, [&](std::uint32_t, const std::vector<Point>& g) {
    r.sizes.push_back(g.size());
    if (window > 0) {
      kept.push_back(g);
      if (kept.size() > window) kept.pop_front();
    }
    return true;
  });
  r.window.assign(kept.begin(), kept.end());
  return r;
}

std::vector<std::vector<double>> cone_directions(int dim) {
  std::vector<std::vector<double>> dirs;
  if (dim == 2) {
    dirs = {{1.0}, {-1.0}};
  } else if (dim == 3) {
    for (int k = 0; k < 64; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 64.0;
      dirs.push_back({std::cos(a), std::sin(a)});
    }
  } else {
    const int m = dim - 1;
    int total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<double> v;
      int c = code;
      bool zero = true;
      for (int i = 0; i < m; ++i) {
        v.push_back(static_cast<double>(c % 3 - 1));
        if (c % 3 != 1) zero = false;
        c /= 3;
      }
      if (!zero) dirs.push_back(std::move(v));
    }
  }
  return dirs;
}

bool ConeHat::contains(const std::vector<double>& z, double slack) const {
  if (no_survivors()) return false;
  for (std::size_t k = 0; k < directions.size(); ++k)
    if (dot(directions[k], z) > support[k] + slack) return false;
  return true;
}

std::vector<std::vector<double>> ConeHat::vertices() const {
  std::vector<std::vector<double>> out;
  const int d = static_cast<int>(orientation.size());
  for (const auto& y : support_points) {
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    double last = 1.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      x[static_cast<std::size_t>(orientation[i].axis())] += orientation[i].sign() * y[i];
      last -= y[i];
    }
    x[static_cast<std::size_t>(orientation.back().axis())] += orientation.back().sign() * last;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& w) {
      for (std::size_t i = 0; i < w.size(); ++i)
        if (std::abs(w[i] - x[i]) > 1e-12) return false;
      return true;
    });
    if (!dup) out.push_back(std::move(x));
  }
  return out;
}

ConeHat cone_hat(double q, const std::vector<Step>& orientation, std::uint32_t t, std::uint64_t master_seed,
                 std::uint64_t seeds, Execution exec) {
  const int d = static_cast<int>(orientation.size());
  validate_orientation(orientation, d);
  if (t == 0) throw ParameterError("cone_hat needs t >= 1");
  auto dirs = cone_directions(d);
  auto per_seed = map_tasks<SeedSupport>(seeds, exec, [&](std::size_t i) {
    std::vector<Point> last;
    std::uint32_t reached = 0;
    run_generations(q, orientation, t, bank_seed(master_seed, i), [&](std::uint32_t g, const std::vector<Point>& c) {
      reached = g;
      if (c.empty()) return false;
      if (g == t) last = c;
      return true;
    });
    if (reached != t) last.clear();
    return support_of(orientation, last, t, dirs);
  });
  return aggregate(orientation, q, t, std::move(dirs), per_seed);
}

EtaTable eta_hat(double q, const std::vector<Step>& orientation, const Point& v, std::uint32_t n_max,
                 std::uint64_t master_seed, std::uint64_t seeds, Execution exec) {
  const int d = static_cast<int>(orientation.size());
  validate_orientation(orientation, d);
  const auto k = orientation_coords(orientation, v);
  std::int64_t g = 0;
  for (auto c : k) {
    if (c < 0) throw ParameterError("eta_hat: v is not a nonnegative combination of the orientation");
    g += c;
  }
  if (g == 0) throw ParameterError("eta_hat: v must be nonzero");
  const auto total = static_cast<std::uint32_t>(g * n_max);
  auto dirs = cone_directions(d);

  struct Run {
    std::vector<std::uint8_t> hit;
    SeedSupport support;
  };
  auto runs = map_tasks<Run>(seeds, exec, [&](std::size_t i) {
    Run r;
    r.hit.assign(n_max + 1, 0);
    std::vector<Point> last;
    run_generations(q, orientation, total, bank_seed(master_seed, i), [&](std::uint32_t t, const std::vector<Point>& c) {
      if (c.empty()) return false;
      if (t > 0 && t % g == 0) {
        const auto n = t / static_cast<std::uint32_t>(g);
        Point target(d);
        for (int a = 0; a < d; ++a) target[a] = static_cast<std::int32_t>(v[a] * static_cast<std::int64_t>(n));
        r.hit[n] = std::binary_search(c.begin(), c.end(), target) ? 1 : 0;
      }
      if (t == total) last = c;
      return true;
    });
    r.support = support_of(orientation, last, total, dirs);
    return r;
  });

  EtaTable out;
  out.min_freq = 1.0;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    double hits = 0;
    for (const auto& r : runs) hits += r.hit[n];
    const double f = seeds ? hits / static_cast<double>(seeds) : 0.0;
    out.n.push_back(n);
    out.freq.push_back(f);
    out.stderr_.push_back(seeds > 1 ? std::sqrt(f * (1 - f) / static_cast<double>(seeds)) : 0.0);
    out.min_freq = std::min(out.min_freq, f);
  }
  std::vector<SeedSupport> supports;
  for (auto& r : runs) supports.push_back(std::move(r.support));
  const ConeHat cone = aggregate(orientation, q, total, std::move(dirs), supports);
  std::vector<double> z;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) z.push_back(static_cast<double>(k[i]) / static_cast<double>(g));
  out.outside_cone = !cone.contains(z);
  return out;
}

Calibration calibrate_oriented_threshold(int dim, const std::vector<double>& q_grid, std::uint32_t t,
                                         std::uint64_t master_seed, std::uint64_t seeds, Execution exec) {
  std::vector<Step> orientation;
  for (int i = 0; i < dim; ++i) orientation.push_back(Step::plus(i));
  Calibration c;
  c.name = "oriented_site_threshold_d" + std::to_string(dim);
  c.method = "smallest grid q with survival(2t)/survival(t) >= 0.95, t = " + std::to_string(t) + ", " +
             std::to_string(seeds) + " seeds";
  c.grid = q_grid;
  c.estimate = std::numeric_limits<double>::quiet_NaN();
  for (double q : q_grid) {
    const auto alive = map_tasks<int>(seeds, exec, [&](std::size_t i) {
      const auto r = oriented_reach(q, orientation, 2 * t, bank_seed(master_seed, i), 0);
      const bool at_t = r.sizes.size() > t && r.sizes[t] > 0;
      const bool at_2t = r.sizes.size() > 2 * t && r.sizes[2 * t] > 0;
      return (at_t ? 1 : 0) + (at_2t ? 2 : 0);
    });
    double st = 0, s2t = 0;
    for (int a : alive) {
      st += (a & 1) ? 1 : 0;
      s2t += (a & 2) ? 1 : 0;
    }
    const double ratio = st > 0 ? s2t / st : 0.0;
    c.statistic.push_back(ratio);
    if (std::isnan(c.estimate) && ratio >= 0.95) c.estimate = q;
  }
  return c;
}

Calibration calibrate_site_threshold(int dim, const std::vector<double>& q_grid, std::int32_t radius,
                                     std::uint64_t master_seed, std::uint64_t seeds, Execution exec) {
  Calibration c;
  c.name = "site_threshold_d" + std::to_string(dim);
  c.method = "smallest grid q with e1-crossing frequency >= 0.5, radius " + std::to_string(radius) + ", " +
             std::to_string(seeds) + " seeds";
  c.grid = q_grid;
  c.estimate = std::numeric_limits<double>::quiet_NaN();
  for (double q : q_grid) {
    const auto cross = map_tasks<int>(seeds, exec, [&](std::size_t i) {
      const PercLabels labels = site_labels(q, bank_seed(master_seed, i), dim, radius);
      const Box& box = labels.box();
      // Labels on the low e1 face, then look for one on the high face.
      std::vector<std::int64_t> low;
      Point x = box.lo();
      do {
        if (x[0] == box.lo()[0] && labels.label(x) != PercLabels::kEmpty) low.push_back(labels.label(x));
      } while (box.next(x));
      std::sort(low.begin(), low.end());
      x = box.lo();
      do {
        if (x[0] == box.hi()[0] && std::binary_search(low.begin(), low.end(), labels.label(x))) return 1;
      } while (box.next(x));
      return 0;
    });
    const double f = static_cast<double>(std::accumulate(cross.begin(), cross.end(), 0)) /
                     static_cast<double>(std::max<std::uint64_t>(seeds, 1));
    c.statistic.push_back(f);
    if (std::isnan(c.estimate) && f >= 0.5) c.estimate = q;
  }
  return c;
}

}  // namespace ho
