#include <doctest.h>

#include <cmath>
#include <set>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "halforthant/errors.hpp"
#include "halforthant/shape.hpp"
#include "halforthant/stats.hpp"

using namespace ho;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big eta_big(double p, int d, Big eps, Big delta) {
  const Big x = eps + delta;
  const Big base = (2 * d - 1) * (1 + eps) * boost::multiprecision::exp(Big(1)) / x;
  return boost::multiprecision::pow(base, x) * boost::multiprecision::pow(Big(1) - Big(p), 1 - delta);
}

}  // namespace

TEST_CASE("sample statistics") {
  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(mean(xs) == 2.5);
  CHECK(sample_stddev(xs) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(standard_error(xs) == doctest::Approx(std::sqrt(5.0 / 3.0) / 2));
  CHECK(hoeffding_bound(100, 10) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("tail fit recovers an exact geometric tail") {
  // P(X > n) = 2^-(n+1) for n = 0..9 with 1024 samples.
  std::vector<double> samples;
  for (int k = 0; k < 10; ++k)
    for (int c = 0; c < (512 >> k); ++c) samples.push_back(k);
  samples.push_back(10);
  std::vector<double> grid;
  for (int n = 0; n <= 12; ++n) grid.push_back(n);
  const auto table = tail_table(samples, grid);
  CHECK(table[0].fraction == 0.5);
  CHECK(table[9].fraction == 1.0 / 1024);
  CHECK(table[12].fraction == 0.0);
  const auto fit = tail_fit(samples, grid);
  REQUIRE(fit.status == FitStatus::Ok);
  CHECK(fit.fitted >= 3);
  CHECK(fit.slope == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(tail_fit(std::vector<double>{0, 0}, grid).status == FitStatus::Insufficient);
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(0.3, {}) == Regime::Unchecked);
  CHECK(classify_regime(0.3, {0.55, std::nullopt}) == Regime::Inside);
  CHECK(classify_regime(0.6, {0.55, std::nullopt}) == Regime::Outside);
  CHECK(classify_regime(0.3, {std::nullopt, 0.59}) == Regime::Inside);
  CHECK(classify_regime(0.45, {std::nullopt, 0.59}) == Regime::Outside);
}

TEST_CASE("zeta in degenerate environments") {
  const std::vector<std::int64_t> scales{50, 100};
  const auto e1 = estimate_zeta(0.6, Direction::parse("1,0"), scales, 1, 5);
  CHECK(e1.estimate == 1.0);
  CHECK(e1.standard_error == 0.0);
  const auto full = estimate_zeta(0.0, Direction::parse("-1/3,-2/3"), {30}, 1, 3);
  // [30 u] = (-10, -20).
  CHECK(full.estimate == 1.0);
  const auto nw = estimate_zeta(0.0, Direction::parse("-3/10,7/10"), {25}, 1, 2);
  // [25 u] = (-8, 17): 25 steps.
  CHECK(nw.estimate == 1.0);
  const auto blocked = estimate_zeta(1.0, Direction::parse("-1,0"), {20}, 1, 2);
  CHECK(blocked.inconclusive);
  CHECK(std::isnan(blocked.estimate));
  CHECK(direction_verdict(Direction::parse("-1,0"), blocked) == Verdict::Inconclusive);
}

TEST_CASE("zeta is at least the l1 norm and independent of the execution mode") {
  const auto u = Direction::parse("-1/2,1/2");
  ZetaOptions serial;
  serial.exec = Execution::Serial;
  const auto a = estimate_zeta(0.5, u, {40, 80}, 3, 6, serial);
  const auto b = estimate_zeta(0.5, u, {40, 80}, 3, 6);
  CHECK(a.ratios == b.ratios);
  for (const auto& row : a.ratios)
    for (double r : row) CHECK(r >= 1.0);
  CHECK(a.mean.size() == 2);
  CHECK(a.estimate == a.mean.back());
}

TEST_CASE("verdict thresholds") {
  ZetaEstimate e;
  const auto u = Direction::parse("1/2,1/2");
  e.estimate = 1.01;
  CHECK(direction_verdict(u, e) == Verdict::Flat);
  e.estimate = 1.03;
  CHECK(direction_verdict(u, e) == Verdict::Inconclusive);
  e.estimate = 1.2;
  CHECK(direction_verdict(u, e) == Verdict::NonFlat);
}

TEST_CASE("good flat set membership") {
  // Grid search over rational directions of the l1 circle: membership is
  // exactly "positive mass >= p".
  for (int k = 0; k < 40; ++k)
    for (const Rational p : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      const Direction u = diamond_sweep(40)[static_cast<std::size_t>(k)];
      Rational pos(0);
      for (int i = 0; i < 2; ++i)
        if (u.coord(i) > Rational(0)) pos = pos + u.coord(i);
      const auto g = in_s_good(u, p);
      CHECK(g.member == (pos >= p));
      CHECK(g.a == pos);
    }
  CHECK_FALSE(in_s_good(Direction::parse("1,1"), Rational(0)).member);
}

TEST_CASE("counting bound in long double agrees with 50-digit arithmetic") {
  for (double p : {0.25, 0.5, 0.75})
    for (long double eps : {1e-3L, 0.01L, 0.1L, 0.3L})
      for (long double f : {-0.9L, 0.0L, 0.5L, 0.99L}) {
        const long double delta = f * eps;
        const long double v = eta_counting(p, 2, eps, delta);
        const Big ref = eta_big(p, 2, Big(eps), Big(delta));
        CHECK(static_cast<double>(v) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-15));
      }
  CHECK_THROWS_AS(eta_counting(0.5, 2, 0.1L, 0.1L), ParameterError);
}

TEST_CASE("max_epsilon is verified and maximal up to the shrink step") {
  const auto m = max_epsilon(0.75, 2);
  REQUIRE(m.eps > 0.0);
  CHECK(m.worst_eta < 1.0);
  const Big e(m.eps);
  for (int k = 0; k < 1000; ++k) {
    const Big delta = -e + 2 * e * (k + Big(0.5)) / 1000;
    CHECK(eta_big(0.75, 2, e, delta) < 1);
  }
  // Slightly larger eps fails at delta close to eps.
  const Big bigger = e * Big(1.01);
  CHECK(eta_big(0.75, 2, bigger, bigger * Big(0.999999)) >= 1);
  CHECK(max_epsilon(0.95, 3).eps > 0.0);
}

TEST_CASE("predicted verdicts") {
  std::string why;
  CHECK(predicted_verdict(0.5, Direction::parse("-3/10,7/10"), &why) == Verdict::Flat);
  CHECK(predicted_verdict(0.5, Direction::parse("-4/5,1/5"), &why) == Verdict::NonFlat);
  CHECK(predicted_verdict(0.75, Direction::parse("-1,0"), &why) == Verdict::NonFlat);
  CHECK_FALSE(predicted_verdict(0.25, Direction::parse("-1,-1"), &why).has_value());
  CHECK(why == "no prediction");
}

TEST_CASE("diamond sweep") {
  const auto dirs = diamond_sweep(72);
  CHECK(dirs.size() == 72);
  std::set<std::string> names;
  for (const auto& u : dirs) {
    CHECK(u.l1() == Rational(1));
    names.insert(u.str());
  }
  CHECK(names.size() == 72);
  CHECK(dirs[0] == Direction::parse("1,0"));
  CHECK(dirs[18] == Direction::parse("0,1"));
  CHECK(dirs[36] == Direction::parse("-1,0"));
}

TEST_CASE("shape properties hold exactly when every site is Full") {
  const std::vector<PropertyCase> cases{{Direction::parse("-1/2,1/2"), Direction::parse("1/4,1/4"), Rational(2)}};
  const auto r = property_suite_zeta(0.0, cases, 40, 1, 3);
  REQUIRE(r.size() == 1);
  CHECK(r[0].homogeneity);
  CHECK(r[0].subadditivity);
  CHECK(r[0].continuity);
  CHECK(r[0].zeta_u == 1.0);
}
