#include "halforthant/dual2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "halforthant/chemdist.hpp"
#include "halforthant/errors.hpp"
#include "halforthant/stats.hpp"

namespace ho {
namespace {

void require_2d(const Environment& env) {
  if (env.dim() != 2) throw UnsupportedDimension("the dual cluster is defined for d = 2 only");
}

const Point kMinusE1{-1, 0};
const Point kPlusE2{0, 1};
const Point kDiag{-1, 1};

// Half predicate of the base environment with some sites switched to Full.
struct Overlay {
  const Environment& env;
  std::set<Point> flipped;
  bool half(const Point& x) const { return env.is_half(x) && !flipped.contains(x); }
};

bool awesome_in(const Overlay& w, const Point& x) {
  return w.half(x) && !w.half(x + kMinusE1) && !w.half(x + kPlusE2) && !w.half(x + kDiag);
}

}  // namespace

std::set<Point> TriCluster::members() const {
  std::set<Point> out;
  for (const auto& level : levels) out.insert(level.begin(), level.end());
  return out;
}

TriCluster build_tricluster(const Environment& env, std::uint64_t cap) {
  require_2d(env);
  TriCluster c;
  const Point o = Point::origin(2);
  c.levels.push_back({o});
  c.size = 1;
  c.origin_half = env.is_half(o);
  if (!c.origin_half) return c;
  c.top = 0;
  for (int n = 1;; ++n) {
    std::vector<Point> cand;
    for (const Point& y : c.levels[static_cast<std::size_t>(n - 1)]) {
      cand.push_back(y + kMinusE1);
      cand.push_back(y + kPlusE2);
    }
    if (n >= 2)
      for (const Point& y : c.levels[static_cast<std::size_t>(n - 2)]) cand.push_back(y + kDiag);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<Point> level;
    for (const Point& x : cand) {
      if (!env.is_half(x)) continue;
      if (c.size >= cap) {
        c.truncated = true;
        return c;
      }
      level.push_back(x);
      ++c.size;
    }
    // Two consecutive empty levels end the growth.
    if (level.empty() && c.levels.back().empty()) {
      c.levels.pop_back();
      return c;
    }
    if (!level.empty()) c.top = n;
    c.levels.push_back(std::move(level));
  }
}

std::set<Point> awesome_points(const TriCluster& cluster, const Environment& env) {
  require_2d(env);
  if (cluster.truncated) throw TruncatedCluster("awesome points of a truncated cluster");
  std::set<Point> out;
  const Overlay w{env, {}};
  for (const auto& level : cluster.levels)
    for (const Point& x : level)
      if (awesome_in(w, x)) out.insert(x);
  return out;
}

WestPath construct_path_to_west(const Environment& env, std::uint64_t cap) {
  require_2d(env);
  const TriCluster cluster = build_tricluster(env, cap);
  if (cluster.truncated) throw TruncatedCluster("dual cluster exceeds the cap of " + std::to_string(cap));

  WestPath out;
  out.cluster_size = cluster.size;
  Overlay w{env, {}};
  std::set<Point> members = cluster.members();
  std::set<Point> awesome = awesome_points(cluster, env);
  while (members.size() > 1) {
    if (awesome.empty()) throw std::logic_error("dual cluster without awesome points");
    const Point x = *awesome.begin();
    awesome.erase(awesome.begin());
    members.erase(x);
    w.flipped.insert(x);
    out.flips.push_back(x);
    // Only the cluster predecessors of x can have lost their last Half
    // successor.
    for (const Point& y : {x - kMinusE1, x - kPlusE2, x - kDiag})
      if (members.contains(y) && awesome_in(w, y)) awesome.insert(y);
  }

  const Point o = Point::origin(2);
  LatticePath path(o);
  if (w.half(o)) {
    path.push(kNorth);
    path.push(kWest);
    path.push(kSouth);
  } else {
    path.push(kWest);
  }

  for (auto it = out.flips.rbegin(); it != out.flips.rend(); ++it) {
    const Point& x = *it;
    path = loop_erase(path);
    LatticePath patched(o);
    int delta = 0;
    Point z = o;
    for (Step s : path.steps()) {
      if (z == x && s == kWest) {
        for (Step t : {kNorth, kWest, kSouth}) patched.push(t);
        delta = 2;
      } else if (z == x && s == kSouth) {
        for (Step t : {kNorth, kWest, kSouth, kSouth, kEast}) patched.push(t);
        delta = 4;
      } else {
        patched.push(s);
      }
      z += s;
    }
    out.patch_deltas.push_back(delta);
    path = std::move(patched);
  }
  out.path = std::move(path);
  if (out.path.length() > 4 * out.cluster_size)
    throw std::logic_error("constructed path exceeds 4|C|");
  return out;
}

DualSample dual_sample(std::uint64_t seed, double p, std::uint64_t cap) {
  const Environment env(EnvConfig{2, p, static_cast<std::int32_t>(kMaxHorizon) + 2, seed});
  DualSample s;
  s.seed = seed;
  const TriCluster c = build_tricluster(env, cap);
  s.cluster_size = c.size;
  s.truncated = c.truncated;
  if (c.truncated) return s;
  s.top = c.top ? *c.top : -1;
  s.awesome = awesome_points(c, env).size();
  const WestPath wp = construct_path_to_west(env, cap);
  s.path_length = wp.path.length();
  s.consistent = is_consistent(env, wp.path);
  s.ends_west = wp.path.endpoint() == Point{-1, 0};
  const auto cap_t = static_cast<std::uint32_t>(std::min<std::uint64_t>(s.path_length, kMaxHorizon));
  const auto t = passage_time(env, Point::origin(2), Point{-1, 0}, cap_t);
  if (!t) throw std::logic_error("BFS did not reach -e1 within the constructed path length");
  s.t_bfs = *t;
  return s;
}

ClusterTail cluster_tail(double p, std::uint64_t master_seed, std::uint64_t seeds, std::uint64_t cap,
                         Execution exec) {
  ClusterTail out;
  out.sizes = map_tasks<std::uint64_t>(seeds, exec, [&](std::size_t i) {
    const Environment env(EnvConfig{2, p, 1, bank_seed(master_seed, i)});
    const TriCluster c = build_tricluster(env, cap);
    return c.truncated ? cap + 1 : c.size;
  });
  std::uint64_t top = 0;
  for (auto s : out.sizes) {
    top = std::max(top, s);
    if (s > cap) ++out.truncated;
  }
  std::vector<double> samples(out.sizes.begin(), out.sizes.end());
  std::vector<double> grid;
  for (std::uint64_t n = 1; n <= top; ++n) grid.push_back(static_cast<double>(n));
  out.fit = tail_fit(samples, grid);
  return out;
}

Calibration calibrate_dual_threshold(const std::vector<double>& p_grid, int level, std::uint64_t master_seed,
                                     std::uint64_t seeds, std::uint64_t cap, Execution exec) {
  Calibration c;
  c.name = "dual_threshold_d2";
  c.method = "smallest grid p with P(K >= " + std::to_string(2 * level) + ")/P(K >= " + std::to_string(level) +
             ") >= 0.95, " + std::to_string(seeds) + " seeds";
  c.grid = p_grid;
  c.estimate = std::numeric_limits<double>::quiet_NaN();
  for (double p : p_grid) {
    const auto reach = map_tasks<int>(seeds, exec, [&](std::size_t i) {
      const Environment env(EnvConfig{2, p, 1, bank_seed(master_seed, i)});
      const TriCluster t = build_tricluster(env, cap);
      if (t.truncated) return 3;
      const int k = t.top ? *t.top : -1;
      return (k >= level ? 1 : 0) + (k >= 2 * level ? 2 : 0);
    });
    double s1 = 0, s2 = 0;
    for (int r : reach) {
      s1 += (r & 1) ? 1 : 0;
      s2 += (r & 2) ? 1 : 0;
    }
    const double ratio = s1 > 0 ? s2 / s1 : 0.0;
    c.statistic.push_back(ratio);
    if (std::isnan(c.estimate) && ratio >= 0.95) c.estimate = p;
  }
  return c;
}

}  // namespace ho
