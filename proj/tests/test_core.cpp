#include <doctest.h>

#include <set>
#include <sstream>

#include "halforthant/env.hpp"
#include "halforthant/errors.hpp"
#include "halforthant/lattice.hpp"
#include "halforthant/rational.hpp"

using namespace ho;

TEST_CASE("step codes and unit vectors") {
  CHECK(kEast.axis() == 0);
  CHECK(kWest.negative());
  CHECK(kNorth.reversed() == kSouth);
  CHECK(Point::unit(3, Step::minus(2)) == Point{0, 0, -1});
  CHECK(StepSet::positive(3).size() == 3);
  CHECK(StepSet::all(4).size() == 8);
  CHECK_FALSE(StepSet::positive(2).contains(kWest));
}

TEST_CASE("box indexing round-trips in row-major order") {
  const Box b(Point{-2, 1, 0}, Point{1, 3, 2});
  CHECK(b.size() == 4 * 3 * 3);
  Point x = b.lo();
  std::uint64_t k = 0;
  do {
    CHECK(b.index(x) == k);
    CHECK(b.point(k) == x);
    ++k;
  } while (b.next(x));
  CHECK(k == b.size());
  CHECK_FALSE(b.contains(Point{2, 1, 0}));
}

TEST_CASE("loop erasure removes loops in visit order") {
  LatticePath p(Point{0, 0}, {kEast, kNorth, kWest, kSouth, kEast, kEast});
  const auto e = loop_erase(p);
  CHECK(e.endpoint() == p.endpoint());
  CHECK(is_simple(e));
  CHECK(e.length() == 2);
  CHECK_FALSE(is_simple(p));
}

TEST_CASE("rationals are exact and reduced") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("0.35") == Rational(7, 20));
  CHECK(Rational::parse("-3/10") + Rational(1, 2) == Rational(1, 5));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(floor_div(-7, 2) == -4);
  CHECK(less_than(Rational(1, 3), 0.3333333333333334));
  CHECK_FALSE(less_than(Rational(1, 3), 1.0 / 3.0 - 1e-17));
  CHECK(greater_equal(Rational(1, 2), 0.5));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("directions carry their lattice denominator") {
  const auto u = Direction::parse("-3/10, 7/10");
  CHECK(u.m() == 10);
  CHECK(u.integral() == Point{-3, 7});
  CHECK(u.l1() == Rational(1));
  CHECK(u.floor_scaled(Rational(25)) == Point{-8, 17});
  CHECK(Direction::parse("-4/5,1/5").integral() == Point{-4, 1});
  CHECK_THROWS(Direction::parse("0,0"));
}

TEST_CASE("site kinds are a monotone coupling in p") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Environment lo(EnvConfig{2, 0.3, 10, seed}), hi(EnvConfig{2, 0.6, 10, seed});
    Point x = lo.box().lo();
    do {
      if (lo.is_half(x)) CHECK(hi.is_half(x));
    } while (lo.box().next(x));
  }
}

TEST_CASE("degenerate environments") {
  const Environment full(EnvConfig{3, 0.0, 5, 9}), half(EnvConfig{3, 1.0, 5, 9});
  Point x = full.box().lo();
  do {
    CHECK(full.out_steps(x) == StepSet::all(3));
    CHECK(half.out_steps(x) == StepSet::positive(3));
  } while (full.box().next(x));
}

TEST_CASE("Half frequency matches p") {
  const Environment env(EnvConfig{2, 0.37, 150, 4});
  std::uint64_t half = 0, n = 0;
  Point x = env.box().lo();
  do {
    half += env.is_half(x);
    ++n;
  } while (env.box().next(x));
  const double f = static_cast<double>(half) / static_cast<double>(n);
  CHECK(f == doctest::Approx(0.37).epsilon(0.02));
}

TEST_CASE("uniform streams are distinct and deterministic") {
  CHECK(site_uniform(1, Point{0, 0}) == site_uniform(1, Point{0, 0}));
  CHECK(site_uniform(1, Point{0, 0}) != site_uniform(2, Point{0, 0}));
  CHECK(site_uniform(1, Point{0, 1}) != site_uniform(1, Point{1, 0}));
  CHECK(site_uniform(1, Point{0, 0}) != site_uniform(1, Point{0, 0, 0}));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(bank_seed(5, i));
  CHECK(seeds.size() == 1000);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const double u = aux_uniform(3, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("consistency follows the arrows") {
  const Environment env(EnvConfig{2, 1.0, 3, 0});
  CHECK(is_consistent(env, LatticePath(Point{0, 0}, {kEast, kNorth})));
  CHECK_FALSE(is_consistent(env, LatticePath(Point{0, 0}, {kEast, kWest})));
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(Environment(EnvConfig{1, 0.5, 3, 0}), ConfigError);
  CHECK_THROWS_AS(Environment(EnvConfig{2, 1.5, 3, 0}), ConfigError);
  CHECK_THROWS_AS(Environment(EnvConfig{2, 0.5, 0, 0}), ConfigError);
}

TEST_CASE("environment dump round-trips") {
  const Environment env(EnvConfig{2, 0.45, 7, 11});
  std::stringstream ss;
  write_env_dump(ss, env);
  const auto dump = read_env_dump(ss);
  CHECK(dump.config.seed == 11);
  CHECK(dump.config.radius == 7);
  const Box b = env.box();
  Point x = b.lo();
  do {
    CHECK(dump.half(b.index(x)) == env.is_half(x));
  } while (b.next(x));
}

TEST_CASE("site bitmap agrees with the site test") {
  const Box b = Box::cube(Point{0, 0, 0}, 6);
  const SiteBitmap bits(b, 21, 0.4);
  Point x = b.lo();
  do {
    CHECK(bits.test(x) == (site_uniform(21, x) < 0.4));
  } while (b.next(x));
}
