#include <doctest.h>

#include "halforthant/chemdist.hpp"
#include "halforthant/dual2d.hpp"
#include "halforthant/errors.hpp"
#include "oracles.hpp"

using namespace ho;

TEST_CASE("cluster growth matches a flood fill") {
  for (double p : {0.3, 0.45, 0.55})
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Environment env(EnvConfig{2, p, 100, seed});
      const auto c = build_tricluster(env, 5000);
      if (c.truncated) continue;
      auto ref = oracle::tri_cluster(env, 5000);
      if (!env.is_half(Point{0, 0})) {
        CHECK_FALSE(c.origin_half);
        CHECK_FALSE(c.top.has_value());
        ref.insert(Point{0, 0});
      }
      CHECK(c.members() == ref);
      CHECK(c.size == ref.size());
      int k = 0;
      for (const auto& x : ref) k = std::max<int>(k, static_cast<int>(l1_norm(x)));
      if (c.top) CHECK(*c.top == k);
      for (std::size_t n = 0; n < c.levels.size(); ++n)
        for (const auto& x : c.levels[n]) CHECK(l1_norm(x) == static_cast<std::int64_t>(n));
    }
}

TEST_CASE("awesome points match their definition") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Environment env(EnvConfig{2, 0.5, 100, seed});
    const auto c = build_tricluster(env, 5000);
    if (c.truncated || !c.origin_half) continue;
    std::set<Point> expect;
    for (const auto& x : oracle::tri_cluster(env, 5000))
      if (!env.is_half(Point{x[0] - 1, x[1]}) && !env.is_half(Point{x[0], x[1] + 1}) &&
          !env.is_half(Point{x[0] - 1, x[1] + 1}))
        expect.insert(x);
    CHECK(awesome_points(c, env) == expect);
    CHECK_FALSE(expect.empty());
  }
}

TEST_CASE("the constructed path reaches -e1 within 4|C|") {
  for (double p : {0.2, 0.4, 0.5})
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      const Environment env(EnvConfig{2, p, 1000, seed});
      const auto wp = construct_path_to_west(env);
      CHECK(is_consistent(env, wp.path));
      CHECK(wp.path.endpoint() == Point{-1, 0});
      CHECK(wp.path.length() <= 4 * wp.cluster_size);
      CHECK(wp.flips.size() + 1 == wp.cluster_size);
      const auto t = passage_time(env, Point{0, 0}, Point{-1, 0}, static_cast<std::uint32_t>(wp.path.length()));
      REQUIRE(t.has_value());
      CHECK(*t <= wp.path.length());
    }
}

TEST_CASE("base cases of the construction") {
  const Environment full(EnvConfig{2, 0.0, 5, 1});
  const auto a = construct_path_to_west(full);
  CHECK(a.path.steps() == std::vector<Step>{kWest});
  CHECK(a.cluster_size == 1);
  // p = 1 makes the cluster infinite.
  const Environment half(EnvConfig{2, 1.0, 5, 1});
  CHECK_THROWS_AS(construct_path_to_west(half, 200), TruncatedCluster);
  CHECK(build_tricluster(half, 200).truncated);
}

TEST_CASE("dual samples are self-consistent") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = dual_sample(seed, 0.4);
    CHECK(s.consistent);
    CHECK(s.ends_west);
    CHECK(s.path_length <= 4 * s.cluster_size);
    CHECK(s.t_bfs <= s.path_length);
    CHECK(s.t_bfs >= 1);
  }
}

TEST_CASE("cluster tail at p = 0 is empty beyond size 1") {
  const auto t = cluster_tail(0.0, 3, 50, 1000, Execution::Serial);
  for (auto s : t.sizes) CHECK(s == 1);
  CHECK(t.truncated == 0);
}

TEST_CASE("cluster tail decays in the subcritical phase") {
  const auto t = cluster_tail(0.45, 9, 3000, 100000);
  REQUIRE(t.fit.status == FitStatus::Ok);
  CHECK(t.fit.slope < 0.0);
  for (std::size_t i = 1; i < t.fit.points.size(); ++i)
    CHECK(t.fit.points[i].fraction <= t.fit.points[i - 1].fraction);
}
