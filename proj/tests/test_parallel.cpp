#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "halforthant/chemdist.hpp"
#include "halforthant/dual2d.hpp"
#include "halforthant/parallel.hpp"
#include "halforthant/perc.hpp"

using namespace ho;

namespace {

struct ThreadScope {
  int saved = max_threads();
  explicit ThreadScope(int n) { set_threads(n); }
  ~ThreadScope() { set_threads(saved); }
};

}  // namespace

TEST_CASE("parallel BFS equals the serial reference for any thread count") {
  for (int dim : {2, 3})
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const std::uint32_t h = dim == 2 ? 120 : 25;
      const Environment env(EnvConfig{dim, 0.45, static_cast<std::int32_t>(h), seed});
      const auto ref = bfs_distances(env, Point::origin(dim), h, Execution::Serial);
      for (int threads : {1, 2, 4, 8}) {
        ThreadScope scope(threads);
        const auto par = bfs_distances(env, Point::origin(dim), h, Execution::Parallel);
        CHECK(std::equal(ref.values().begin(), ref.values().end(), par.values().begin(), par.values().end()));
      }
    }
}

TEST_CASE("parallel bitmap fill equals the serial one") {
  const Box box = Box::cube(Point{0, 0, 0}, 20);
  const SiteBitmap a(box, 4, 0.37, Execution::Serial);
  for (int threads : {1, 3, 8}) {
    ThreadScope scope(threads);
    CHECK(SiteBitmap(box, 4, 0.37, Execution::Parallel) == a);
  }
}

TEST_CASE("seed fan-out is deterministic and ordered") {
  auto body = [](std::size_t i) { return bank_seed(9, i) ^ i; };
  const auto ref = map_tasks<std::uint64_t>(500, Execution::Serial, body);
  for (int threads : {2, 8}) {
    ThreadScope scope(threads);
    CHECK(map_tasks<std::uint64_t>(500, Execution::Parallel, body) == ref);
  }
}

TEST_CASE("task errors propagate after the loop") {
  std::atomic<int> ran{0};
  CHECK_THROWS_AS(for_each_task(50, Execution::Parallel,
                                [&](std::size_t i) {
                                  ++ran;
                                  if (i == 7) throw std::runtime_error("boom");
                                }),
                  std::runtime_error);
  CHECK(ran == 50);
}

TEST_CASE("Monte Carlo aggregates do not depend on the execution mode") {
  const auto a = cluster_tail(0.45, 2, 300, 10000, Execution::Serial);
  const auto o = parse_orientation("+1,+2", 2);
  const auto ca = cone_hat(0.75, o, 40, 5, 30, Execution::Serial);
  ThreadScope scope(4);
  const auto b = cluster_tail(0.45, 2, 300, 10000, Execution::Parallel);
  CHECK(a.sizes == b.sizes);
  CHECK(a.fit.slope == b.fit.slope);
  const auto cb = cone_hat(0.75, o, 40, 5, 30, Execution::Parallel);
  CHECK(ca.support == cb.support);
  CHECK(ca.per_seed_support == cb.per_seed_support);
}
