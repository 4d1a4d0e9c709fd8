#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "halforthant/env.hpp"
#include "halforthant/lattice.hpp"
#include "halforthant/parallel.hpp"
#include "halforthant/stats.hpp"

namespace ho {

inline constexpr std::uint64_t kDefaultClusterCap = 1'000'000;

// Oriented cluster of Half sites in the quadrant {x1 <= 0, x2 >= 0}, grown
// from the origin with steps -e1, +e2 and -e1+e2. Level n holds points of
// l1 norm n.
struct TriCluster {
  std::vector<std::vector<Point>> levels;  // levels[0] = {o}; each level sorted
  std::optional<int> top;                  // K; empty when o is Full
  std::uint64_t size = 0;
  bool truncated = false;
  bool origin_half = false;

  std::set<Point> members() const;
};

TriCluster build_tricluster(const Environment& env, std::uint64_t cap = kDefaultClusterCap);

// Members that are Half with x-e1, x+e2, x-e1+e2 all Full. Throws
// TruncatedCluster on a truncated cluster.
std::set<Point> awesome_points(const TriCluster& cluster, const Environment& env);

struct WestPath {
  LatticePath path;
  std::uint64_t cluster_size = 0;
  std::vector<Point> flips;              // in flip order
  std::vector<int> patch_deltas;         // per unwind step: 0, 2 or 4
};

// Consistent path from o to -e1 of length at most 4|cluster|, built by
// flipping awesome points to Full one at a time and patching the base path
// back in reverse order. Throws TruncatedCluster past the cap.
WestPath construct_path_to_west(const Environment& env, std::uint64_t cap = kDefaultClusterCap);

struct DualSample {
  std::uint64_t seed = 0;
  std::uint64_t cluster_size = 0;
  int top = -1;                          // -1 when o is Full
  std::uint64_t awesome = 0;
  std::uint64_t path_length = 0;
  std::uint32_t t_bfs = 0;
  bool truncated = false;
  bool consistent = false;
  bool ends_west = false;                // endpoint is -e1
};

// One row of the dual CSV (seed, |C|, K, |A|, path_length, T_bfs). T_bfs is
// found by BFS capped at the path length.
DualSample dual_sample(std::uint64_t seed, double p, std::uint64_t cap = kDefaultClusterCap);

struct ClusterTail {
  std::vector<std::uint64_t> sizes;      // by seed index; cap + 1 when truncated
  std::uint64_t truncated = 0;
  TailFit fit;                           // fraction with |C| > n
};

ClusterTail cluster_tail(double p, std::uint64_t master_seed, std::uint64_t seeds,
                         std::uint64_t cap = kDefaultClusterCap, Execution exec = Execution::Parallel);

// Oriented triangular-lattice threshold: smallest p on the grid with
// P(K >= 2L) / P(K >= L) >= 0.95. A cluster truncated at the cap counts as
// reaching every level.
Calibration calibrate_dual_threshold(const std::vector<double>& p_grid, int level, std::uint64_t master_seed,
                                     std::uint64_t seeds, std::uint64_t cap = kDefaultClusterCap,
                                     Execution exec = Execution::Parallel);

}  // namespace ho
