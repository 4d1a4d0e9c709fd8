#include <doctest.h>

#include <map>

#include "halforthant/chemdist.hpp"
#include "halforthant/errors.hpp"
#include "halforthant/perc.hpp"
#include "oracles.hpp"

using namespace ho;

namespace {

std::set<Point> occupied_sites(const Box& box, std::uint64_t seed, double q) {
  std::set<Point> out;
  Point x = box.lo();
  do {
    if (site_uniform(seed, x) < q) out.insert(x);
  } while (box.next(x));
  return out;
}

}  // namespace

TEST_CASE("union-find labels match a flood fill") {
  for (int dim : {2, 3})
    for (double q : {0.3, 0.6, 0.8})
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::int32_t r = dim == 2 ? 12 : 4;
        const auto labels = site_labels(q, seed, dim, r);
        const Box& box = labels.box();
        const auto comps = oracle::components(occupied_sites(box, seed, q));
        CHECK(labels.cluster_count() == comps.size());
        std::uint64_t biggest = 0;
        for (const auto& comp : comps) {
          std::uint64_t smallest = box.size();
          for (const auto& x : comp) smallest = std::min(smallest, box.index(x));
          for (const auto& x : comp) CHECK(labels.label(x) == static_cast<std::int64_t>(smallest));
          CHECK(labels.cluster_size(static_cast<std::int64_t>(smallest)) == comp.size());
          biggest = std::max<std::uint64_t>(biggest, comp.size());
        }
        if (!comps.empty()) CHECK(labels.cluster_size(labels.giant()) == biggest);
      }
}

TEST_CASE("inverted labels cover the complement") {
  const Box box = Box::cube(Point{0, 0}, 10);
  const SiteBitmap half(box, 5, 0.3);
  const PercLabels full(half, true);
  Point x = box.lo();
  do {
    CHECK(full.occupied(x) == !half.test(x));
  } while (box.next(x));
}

TEST_CASE("the proxy is the spanning giant when there is one") {
  const auto dense = site_labels(0.9, 1, 2, 30);
  CHECK(dense.giant_spans());
  Point x = dense.box().lo();
  do {
    CHECK(dense.in_proxy(x) == (dense.label(x) == dense.giant() && dense.giant() != PercLabels::kEmpty));
  } while (dense.box().next(x));

  const auto sparse = site_labels(0.2, 1, 2, 30);
  CHECK_FALSE(sparse.giant_spans());
  for (auto l : sparse.boundary_touching()) CHECK(l != PercLabels::kEmpty);
  CHECK(std::is_sorted(sparse.boundary_touching().begin(), sparse.boundary_touching().end()));

  const auto empty = site_labels(0.0, 1, 2, 5);
  CHECK(empty.proxy_empty());
  CHECK(empty.giant() == PercLabels::kEmpty);
  CHECK_FALSE(n_plus(empty).has_value());
}

TEST_CASE("N+ and N- scan the e1 axis") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto l = site_labels(0.7, seed, 2, 25);
    std::optional<std::int32_t> np, nm;
    for (std::int32_t n = 0; n <= 25 && !np; ++n)
      if (l.in_proxy(Point{n, 0})) np = n;
    for (std::int32_t n = 1; n <= 25 && !nm; ++n)
      if (l.in_proxy(Point{-n, 0})) nm = n;
    CHECK(n_plus(l) == np);
    CHECK(n_minus(l) == nm);
  }
}

TEST_CASE("detours are consistent paths to -e1 of the stated length") {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Environment env(EnvConfig{2, 0.3, 40, seed});
    const auto d = detour_path(env);
    if (d.status != DetourStatus::Ok) continue;
    ++ok;
    CHECK(is_consistent(env, d.path));
    CHECK(d.path.endpoint() == Point{-1, 0});
    CHECK(static_cast<std::int64_t>(d.path.length()) == d.n_plus + d.m + d.n_minus - 1);
    const auto t = passage_time(env, Point{0, 0}, Point{-1, 0}, static_cast<std::uint32_t>(d.path.length()));
    REQUIRE(t.has_value());
    CHECK(*t <= d.path.length());
  }
  CHECK(ok >= 190);
}

TEST_CASE("orientation parsing") {
  CHECK(parse_orientation("+1,-2", 2) == std::vector<Step>{kEast, kSouth});
  CHECK(parse_orientation("-3 +1 +2", 3) == std::vector<Step>{Step::minus(2), kEast, kNorth});
  CHECK_THROWS_AS(parse_orientation("+1,+1", 2), ParameterError);
  CHECK_THROWS_AS(parse_orientation("+1", 2), ParameterError);
  CHECK_THROWS_AS(parse_orientation("1,2", 2), ParameterError);
  CHECK(orientation_coords({kWest, kNorth}, Point{-3, 2}) == std::vector<std::int64_t>{3, 2});
}

TEST_CASE("oriented generations match a set recursion") {
  for (const std::string o : {"+1,+2", "-1,+2", "+1,-2,+3"})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const int d = static_cast<int>(std::count(o.begin(), o.end(), ',')) + 1;
      const auto orient = parse_orientation(o, d);
      const std::uint32_t T = 25;
      const auto r = oriented_reach(0.65, orient, T, seed, 3);
      std::set<Point> gen;
      const Point origin = Point::origin(d);
      if (site_uniform(seed, origin) < 0.65) gen.insert(origin);
      std::vector<std::set<Point>> all{gen};
      for (std::uint32_t t = 1; t <= T; ++t) {
        std::set<Point> next;
        for (const auto& y : gen)
          for (Step s : orient)
            if (site_uniform(seed, y + s) < 0.65) next.insert(y + s);
        gen = std::move(next);
        all.push_back(gen);
      }
      REQUIRE(r.sizes.size() == T + 1);
      for (std::uint32_t t = 0; t <= T; ++t) CHECK(r.sizes[t] == all[t].size());
      REQUIRE(r.window.size() == 3);
      for (std::size_t w = 0; w < 3; ++w)
        CHECK(std::set<Point>(r.window[w].begin(), r.window[w].end()) == all[T - 2 + w]);
      CHECK(r.survived() == !all[T].empty());
    }
}

TEST_CASE("fully occupied oriented percolation fills the simplex") {
  const auto orient = parse_orientation("+1,+2", 2);
  const auto r = oriented_reach(1.0, orient, 10, 3);
  for (std::uint32_t t = 0; t <= 10; ++t) CHECK(r.sizes[t] == t + 1);
  const auto cone = cone_hat(1.0, orient, 20, 1, 4);
  CHECK(cone.survivors == 4);
  REQUIRE(cone.support.size() == 2);
  CHECK(cone.support[0] == doctest::Approx(1.0));
  CHECK(cone.support[1] == doctest::Approx(0.0));
  CHECK(cone.contains({0.5}));
  CHECK_FALSE(cone.contains({1.2}));
  const auto v = cone.vertices();
  CHECK(v.size() == 2);
  const auto eta = eta_hat(1.0, orient, Point{1, 1}, 10, 1, 5);
  CHECK(eta.min_freq == 1.0);
  CHECK_FALSE(eta.outside_cone);
}

TEST_CASE("cone directions by dimension") {
  CHECK(cone_directions(2).size() == 2);
  CHECK(cone_directions(3).size() == 64);
  CHECK(cone_directions(4).size() == 26);
}

TEST_CASE("a dead oriented cluster never hits") {
  const auto orient = parse_orientation("+1,+2", 2);
  const auto eta = eta_hat(0.0, orient, Point{1, 0}, 5, 1, 10);
  CHECK(eta.min_freq == 0.0);
  CHECK(cone_hat(0.0, orient, 5, 1, 10).no_survivors());
  CHECK_THROWS_AS(eta_hat(0.5, orient, Point{-1, 0}, 5, 1, 10), ParameterError);
}

TEST_CASE("threshold calibrations land near the known values") {
  std::vector<double> grid;
  for (int k = 50; k <= 80; k += 2) grid.push_back(k / 100.0);
  const auto site = calibrate_site_threshold(2, grid, 30, 17, 120);
  CHECK(site.estimate > 0.54);
  CHECK(site.estimate < 0.66);
  CHECK(site.statistic.size() == grid.size());
  const auto oriented = calibrate_oriented_threshold(2, grid, 60, 17, 300);
  CHECK(oriented.estimate > 0.64);
  CHECK(oriented.estimate < 0.80);
}
