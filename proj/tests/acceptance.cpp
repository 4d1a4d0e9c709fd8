// Acceptance suite: one line per criterion, exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "halforthant/chemdist.hpp"
#include "halforthant/dual2d.hpp"
#include "halforthant/paths.hpp"
#include "halforthant/perc.hpp"
#include "halforthant/shape.hpp"
#include "halforthant/stats.hpp"
#include "oracles.hpp"

using namespace ho;

namespace {

constexpr std::uint64_t kMaster = 1;

// Criterion 7 threshold, frozen from a pilot on the independent seed bank
// 7777 (20 seeds, n = 2000): mean 1.3700, standard error 0.0047. The
// threshold sits ten standard errors below the pilot mean.
constexpr double kNonFlatThreshold = 1.32;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

// Shared by criteria 6, 7 and 9.
struct ZetaRuns {
  bool done = false;
  ZetaEstimate flat, nonflat;
};
ZetaRuns& zeta_runs() {
  static ZetaRuns r;
  if (!r.done) {
    r.flat = estimate_zeta(0.5, Direction::parse("-3/10,7/10"), {2000}, kMaster, 20);
    r.nonflat = estimate_zeta(0.5, Direction::parse("-4/5,1/5"), {2000}, kMaster, 20);
    r.done = true;
  }
  return r;
}

Outcome c1_degenerate() {
  std::uint64_t bad = 0;
  double worst = 0;
  for (double p : {0.0, 1.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Environment env(EnvConfig{2, p, 100, kMaster});
    const auto f = bfs_distances(env, Point{0, 0}, 100);
    const Box box = Box::cube(Point{0, 0}, 50);
    Point x = box.lo();
    std::uint64_t sites = 0;
    do {
      ++sites;
      const auto v = f.value(x);
      const auto n = static_cast<std::uint32_t>(l1_norm(x));
      const bool orthant = x[0] >= 0 && x[1] >= 0;
      const bool ok = (p == 0.0 || orthant) ? v == n : !v.has_value();
      bad += !ok;
    } while (box.next(x));
    bad += sites != 10201;
    worst = std::max(worst, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return {bad == 0 && worst < 1.0, "mismatches " + std::to_string(bad) + ", slowest " + fmt(worst) + " s"};
}

Outcome c2_oracle() {
  // A path of length <= 24 from o stays within radius 24, so Dijkstra on the
  // radius-30 box is exact for every distance up to the BFS horizon.
  std::uint64_t bad = 0, compared = 0;
  for (int k = 2; k <= 9; ++k)
    for (std::uint64_t s = 0; s < 200; ++s) {
      const Environment env(EnvConfig{2, k / 10.0, 30, bank_seed(kMaster, s)});
      const auto f = bfs_distances(env, Point{0, 0}, 24);
      const auto ref = oracle::dijkstra(env, Point{0, 0}, 30);
      const Box box = Box::cube(Point{0, 0}, 6);
      Point x = box.lo();
      do {
        const auto d = ref.at(x);
        const auto v = f.value(x);
        bad += d <= 24 ? v != d : v.has_value();
        ++compared;
      } while (box.next(x));
    }
  return {bad == 0, std::to_string(compared) + " sites compared, " + std::to_string(bad) + " mismatches"};
}

Outcome c3_monotone() {
  std::uint64_t bad = 0, compared = 0;
  const Box box = Box::cube(Point{0, 0}, 100);
  for (std::uint64_t s = 0; s < 50; ++s) {
    std::vector<DistanceField> fields;
    for (int k = 1; k <= 9; ++k)
      fields.push_back(bfs_distances(Environment(EnvConfig{2, k / 10.0, 200, bank_seed(kMaster, s)}), Point{0, 0},
                                     200, Execution::Parallel));
    Point x = box.lo();
    do {
      for (std::size_t k = 1; k < fields.size(); ++k) {
        const auto hi = fields[k].value(x);
        if (!hi) continue;
        const auto lo = fields[k - 1].value(x);
        ++compared;
        bad += !lo || *lo > *hi;
      }
    } while (box.next(x));
  }
  return {bad == 0, std::to_string(compared) + " reached pairs, " + std::to_string(bad) + " violations"};
}

Outcome c4_dual() {
  const auto rows = map_tasks<DualSample>(10000, Execution::Parallel,
                                          [](std::size_t i) { return dual_sample(bank_seed(kMaster, i), 0.40); });
  std::uint64_t bad = 0, truncated = 0;
  for (const auto& r : rows) {
    if (r.truncated) {
      ++truncated;
      continue;
    }
    bad += !(r.consistent && r.ends_west && r.path_length <= 4 * r.cluster_size && r.path_length >= r.t_bfs);
  }
  const auto tail = cluster_tail(0.45, bank_seed(kMaster, 4545), 10000);
  const bool fit_ok = tail.fit.status == FitStatus::Ok && tail.fit.slope < -0.01;
  return {bad == 0 && truncated == 0 && fit_ok,
          std::to_string(bad) + " violations in 10000 samples (" + std::to_string(truncated) +
              " truncated); tail slope at p = 0.45 " + fmt(tail.fit.slope)};
}

Outcome c5_western() {
  std::uint64_t bad = 0, paths = 0;
  for (double p : {0.3, 0.5, 0.7}) {
    const auto v = map_tasks<int>(10000, Execution::Parallel, [p](std::size_t i) {
      const std::uint64_t seed = bank_seed(kMaster + 5, i);
      const Environment env(EnvConfig{2, p, 1, seed});
      LatticePath path(Point{0, 0});
      Point x{0, 0};
      for (std::uint64_t j = 0; j < 200; ++j) {
        Step s(static_cast<std::uint8_t>(std::min(3.0, std::floor(aux_uniform(mix64(seed), j) * 4))));
        if (s == kWest && env.is_half(x)) s = kNorth;
        path.push(s);
        x += s;
      }
      const auto west = westernise(env, path);
      const auto a = path.positions(), b = west.positions();
      for (std::size_t m = 0; m < a.size(); ++m) {
        const std::int64_t d1 = a[m][0] - b[m][0], d2 = a[m][1] - b[m][1];
        if (d1 != d2 || d1 < 0) return 1;
      }
      return 0;
    });
    for (int x : v) bad += static_cast<std::uint64_t>(x);
    paths += v.size();
  }
  return {bad == 0, std::to_string(paths) + " paths, " + std::to_string(bad) + " violations"};
}

Outcome c6_flat() {
  const auto& z = zeta_runs().flat;
  const double m = z.mean[0];
  return {!z.inconclusive && m >= 1.0 && m <= 1.05, "mean T/n = " + fmt(m, 6) + " (se " + fmt(z.stderr_[0]) + ")"};
}

Outcome c7_nonflat() {
  const auto& r = zeta_runs();
  const double m = r.nonflat.mean[0], flat = r.flat.mean[0];
  return {!r.nonflat.inconclusive && m >= 1.02 && m > flat && m >= kNonFlatThreshold,
          "mean T/n = " + fmt(m, 6) + " (se " + fmt(r.nonflat.stderr_[0]) + "), flat value " + fmt(flat, 6) +
              ", frozen threshold " + fmt(kNonFlatThreshold)};
}

Outcome c8_oriented() {
  std::vector<double> grid;
  for (int k = 60; k <= 80; ++k) grid.push_back(k / 100.0);
  const auto cal = calibrate_oriented_threshold(2, grid, 100, bank_seed(kMaster, 8080), 400);
  const bool regime = !std::isnan(cal.estimate) && 0.75 > cal.estimate;
  const auto z = estimate_zeta(0.25, Direction::parse("-1,-1"), {1000}, kMaster, 20);
  const bool close = !z.inconclusive && std::fabs(z.estimate - 2.0) <= 0.05 * 2.0;
  return {regime && close, "oriented threshold estimate " + fmt(cal.estimate) + "; zeta(-1,-1) = " +
                               fmt(z.estimate, 6) + " (se " + fmt(z.standard_error) + ")"};
}

Outcome c9_inverse() {
  const auto& r = zeta_runs();
  bool pass = true;
  std::string detail;
  for (const auto* z : {&r.flat, &r.nonflat}) {
    const Point v = z->u.integral();
    double sum = 0;
    for (auto seed : z->seeds) {
      const Environment env(EnvConfig{2, 0.5, 2000, seed});
      const auto f = bfs_distances(env, Point{0, 0}, 2000, Execution::Parallel);
      sum += d_n(f, v).k.to_double();
    }
    const double dn = sum / static_cast<double>(z->seeds.size()) / 2000.0;
    const double inv = 1.0 / (static_cast<double>(z->u.m()) * z->estimate);
    const double rel = std::fabs(dn - inv) / inv;
    pass = pass && rel <= 0.10;
    detail += "v = " + v.str() + ": D_n/n " + fmt(dn, 6) + " vs 1/zeta " + fmt(inv, 6) + " (rel " + fmt(rel, 2) + "); ";
  }
  return {pass, detail};
}

Outcome c10_counting() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const double p = 0.75;
  const auto m = max_epsilon(p, 2);
  bool ok = m.eps > 0.0 && m.worst_eta < 1.0;
  const Big e(m.eps);
  Big worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const Big delta = -e + 2 * e * (k + Big(0.5)) / 1000;
    const Big x = e + delta;
    const Big eta = boost::multiprecision::pow(3 * (1 + e) * boost::multiprecision::exp(Big(1)) / x, x) *
                    boost::multiprecision::pow(Big(1) - Big(p), 1 - delta);
    worst = std::max(worst, eta);
  }
  ok = ok && worst < 1;
  // eps + delta = 1e-8 with both small.
  const long double eps = 6e-9L, delta = 4e-9L;
  const long double near = eta_counting(p, 2, eps, delta);
  const double gap = std::fabs(static_cast<double>(near) - (1.0 - p));
  ok = ok && gap < 1e-6;
  return {ok, "eps = " + fmt(m.eps, 8) + ", worst eta over 1000 deltas " + fmt(static_cast<double>(worst), 8) +
                  ", |eta - (1-p)| at eps+delta = 1e-8: " + fmt(gap, 3)};
}

Outcome c11_jn() {
  std::vector<double> freq;
  for (std::uint32_t n : {100u, 200u, 400u}) {
    const auto hits = map_tasks<int>(200, Execution::Parallel, [n](std::size_t i) {
      const Environment env(EnvConfig{2, 0.5, static_cast<std::int32_t>(2 * n), bank_seed(kMaster + 11, i)});
      return jn_indicator(env, n, Rational(1, 5), Rational(1, 50)) ? 1 : 0;
    });
    double h = 0;
    for (int x : hits) h += x;
    freq.push_back(h / 200.0);
  }
  const bool decreasing = freq[0] > freq[1] && freq[1] > freq[2];
  return {decreasing && freq[2] == 0.0, "P(J_n) at n = 100, 200, 400: " + fmt(freq[0]) + ", " + fmt(freq[1]) + ", " +
                                            fmt(freq[2]) + (decreasing ? "" : " (not strictly decreasing)")};
}

Outcome c12_perc() {
  const std::int32_t radius = 200;
  const auto np = map_tasks<double>(10000, Execution::Parallel, [&](std::size_t i) {
    const auto labels = site_labels(0.75, bank_seed(kMaster + 12, i), 2, radius);
    const auto n = n_plus(labels);
    return n ? static_cast<double>(*n) : radius + 1.0;
  });
  std::vector<double> grid;
  for (int n = 0; n <= radius; ++n) grid.push_back(n);
  const auto fit = tail_fit(np, grid);
  const bool tail_ok = fit.status == FitStatus::Ok && fit.slope < -0.05;

  struct Pair {
    bool ok = false, found = false;
  };
  const auto pairs = map_tasks<Pair>(1000, Execution::Parallel, [&](std::size_t i) {
    const Environment env(EnvConfig{2, 0.25, radius, bank_seed(kMaster + 13, i)});
    const auto d = detour_path(env);
    Pair r;
    if (d.status != DetourStatus::Ok) return r;
    r.found = true;
    const auto t = passage_time(env, Point{0, 0}, Point{-1, 0}, static_cast<std::uint32_t>(d.path.length()));
    r.ok = is_consistent(env, d.path) && t && d.path.length() >= *t;
    return r;
  });
  std::uint64_t found = 0, ok = 0;
  for (const auto& r : pairs) {
    found += r.found;
    ok += r.ok;
  }
  return {tail_ok && found == 1000 && ok == 1000,
          "N+ tail slope " + fmt(fit.slope) + "; detour >= T in " + std::to_string(ok) + " of " +
              std::to_string(found) + " found (1000 sampled)"};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HALFORTHANT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome c13_determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "halforthant_acceptance_replay";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"levelset", "--seed 3 --threads 2 --out-dir {} levelset --p 0.35 --n 400 --heatmap --dump"},
      {"zeta", "--seed 4 --threads 3 --out-dir {} zeta --p 0.5 --direction=-1/2,1/2 --direction=-4/5,1/5 "
               "--scales 100,200 --seeds 6 --dn"},
      {"dual", "--seed 5 --out-dir {} lemmas dual --p 0.4 --seeds 2000"},
      {"optail", "--seed 6 --out-dir {} lemmas optail --q 0.75 --seeds 60 --n-max 40 --t 80"},
      {"sitetail", "--seed 7 --out-dir {} lemmas sitetail --q 0.75 --seeds 200 --radius 60"}};
  std::uint64_t replays = 0, identical = 0;
  std::string failed;
  for (const auto& [name, tmpl] : runs) {
    std::string args = tmpl;
    args.replace(args.find("{}"), 2, (root / name).string());
    if (run_cli(args) != 0) {
      failed += name + " (run) ";
      continue;
    }
    for (int threads : {1, 4, 8}) {
      ++replays;
      const auto out = root / (name + "_t" + std::to_string(threads));
      const int code = run_cli("replay --from " + (root / name / "manifest.json").string() + " --threads " +
                               std::to_string(threads) + " --out-dir " + out.string());
      if (code == 0)
        ++identical;
      else
        failed += name + "/" + std::to_string(threads) + " ";
    }
  }
  return {identical == replays && replays == 15 && failed.empty(),
          std::to_string(identical) + " of " + std::to_string(replays) + " replays byte-identical" +
              (failed.empty() ? "" : "; failed: " + failed)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "degenerate exactness", c1_degenerate},
      {2, "BFS equals Dijkstra", c2_oracle},
      {3, "coupling monotonicity", c3_monotone},
      {4, "dual path lemma and cluster tail", c4_dual},
      {5, "westernisation invariant", c5_western},
      {6, "flat direction (-3/10, 7/10)", c6_flat},
      {7, "non-flat direction (-4/5, 1/5)", c7_nonflat},
      {8, "oriented flat direction (-1, -1)", c8_oriented},
      {9, "D_n against 1/zeta", c9_inverse},
      {10, "counting bound", c10_counting},
      {11, "J_n decay", c11_jn},
      {12, "percolation tails and detours", c12_perc},
      {13, "replay determinism across thread counts", c13_determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
