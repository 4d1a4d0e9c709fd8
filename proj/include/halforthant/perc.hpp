#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halforthant/env.hpp"
#include "halforthant/lattice.hpp"
#include "halforthant/parallel.hpp"
#include "halforthant/stats.hpp"

namespace ho {

// Connected components of occupied sites in a box (nearest-neighbour
// adjacency), with a finite-box stand-in for the infinite cluster.
class PercLabels {
 public:
  static constexpr std::int64_t kEmpty = -1;

  // Labels the set bits of `occupied` (or the clear bits when invert).
  PercLabels(const SiteBitmap& occupied, bool invert = false);

  const Box& box() const { return box_; }
  // Canonical label (smallest site index in the cluster) or kEmpty.
  std::int64_t label(const Point& x) const;
  std::int64_t label_at(std::uint64_t index) const { return labels_[index]; }
  bool occupied(const Point& x) const { return label(x) != kEmpty; }
  std::uint64_t cluster_size(std::int64_t label) const;
  std::uint64_t cluster_count() const { return count_; }

  std::int64_t giant() const { return giant_; }              // kEmpty if no site is occupied
  bool giant_spans() const { return giant_spans_; }          // touches two opposite faces
  const std::vector<std::int64_t>& boundary_touching() const { return boundary_; }  // sorted

  // Largest cluster if it spans; otherwise the boundary-touching clusters.
  bool in_proxy(const Point& x) const;
  bool proxy_empty() const { return !giant_spans_ && boundary_.empty(); }

 private:
  Box box_;
  std::vector<std::int64_t> labels_;
  std::vector<std::uint64_t> sizes_;  // by site index of the root; 0 elsewhere
  std::uint64_t count_ = 0;
  std::int64_t giant_ = kEmpty;
  bool giant_spans_ = false;
  std::vector<std::int64_t> boundary_;
};

// Site percolation on [-R,R]^d: x occupied iff U(x) < q.
PercLabels site_labels(double q, std::uint64_t seed, int dim, std::int32_t radius);

// Least n >= 0 (n_plus) / n > 0 (n_minus) with +n e1 / -n e1 in the proxy.
std::optional<std::int32_t> n_plus(const PercLabels& labels);
std::optional<std::int32_t> n_minus(const PercLabels& labels);

enum class DetourStatus { Ok, NotFound, Disconnected };

struct Detour {
  DetourStatus status = DetourStatus::NotFound;
  std::int32_t n_plus = 0;
  std::int32_t n_minus = 0;
  std::int64_t m = 0;  // shortest path length inside the Full sites
  LatticePath path;    // o -> -e1, length n_plus + m + n_minus - 1
};

// Detour through the Full-site cluster proxy in the box of env.radius().
Detour detour_path(const Environment& env);

// Signed basis: d steps on distinct axes.
std::vector<Step> parse_orientation(const std::string& text, int dim);
void validate_orientation(const std::vector<Step>& orientation, int dim);

struct OrientedReach {
  std::vector<Step> orientation;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t generations = 0;
  std::vector<std::uint64_t> sizes;         // size of generation t, t = 0..generations
  std::vector<std::vector<Point>> window;   // last retained generations, oldest first
  bool survived() const { return !sizes.empty() && sizes.back() > 0; }
};

// Generation t+1 = {y + s : y in generation t, s in O, y + s occupied};
// generation 0 = {o} if o is occupied. x occupied iff U(x) < q.
OrientedReach oriented_reach(double q, const std::vector<Step>& orientation, std::uint32_t generations,
                             std::uint64_t seed, std::size_t window = 1);

// Coordinates of x in the signed basis (all >= 0 inside the orthant of O).
std::vector<std::int64_t> orientation_coords(const std::vector<Step>& orientation, const Point& x);

// Convex hull of the generation-t cloud divided by t, in the first d-1
// basis coordinates, represented by its support function on a fixed set of
// directions and averaged over surviving seeds.
struct ConeHat {
  std::vector<Step> orientation;
  double q = 0.0;
  std::uint32_t t = 0;
  std::uint64_t seeds = 0;
  std::uint64_t survivors = 0;
  std::vector<std::vector<double>> directions;        // unit-free, in d-1 coords
  std::vector<double> support;                        // averaged support values
  std::vector<std::vector<double>> support_points;    // averaged maximisers
  std::vector<std::vector<double>> per_seed_support;  // by seed index; empty if dead

  bool no_survivors() const { return survivors == 0; }
  // Inside the averaged hull up to `slack` in every direction.
  bool contains(const std::vector<double>& z, double slack = 0.0) const;
  // Vertices in lattice coordinates divided by t.
  std::vector<std::vector<double>> vertices() const;
};

std::vector<std::vector<double>> cone_directions(int dim);
ConeHat cone_hat(double q, const std::vector<Step>& orientation, std::uint32_t t, std::uint64_t master_seed,
                 std::uint64_t seeds, Execution exec = Execution::Parallel);

struct EtaTable {
  std::vector<std::uint32_t> n;
  std::vector<double> freq;  // P(o -> n v)
  std::vector<double> stderr_;
  double min_freq = 0.0;
  bool outside_cone = false;
};

// Hitting frequencies of n v for n = 1..n_max. v must be a nonnegative
// combination of the orientation; outside_cone is set when v / |v| lies
// outside the empirical cone at the final generation.
EtaTable eta_hat(double q, const std::vector<Step>& orientation, const Point& v, std::uint32_t n_max,
                 std::uint64_t master_seed, std::uint64_t seeds, Execution exec = Execution::Parallel);

// Oriented site percolation with O = {+e_i}: smallest q on the grid whose
// survival ratio S(2t)/S(t) is at least 0.95.
Calibration calibrate_oriented_threshold(int dim, const std::vector<double>& q_grid, std::uint32_t t,
                                         std::uint64_t master_seed, std::uint64_t seeds,
                                         Execution exec = Execution::Parallel);

// Site percolation: smallest q on the grid at which a cluster joins the two
// faces orthogonal to e1 in at least half of the boxes.
Calibration calibrate_site_threshold(int dim, const std::vector<double>& q_grid, std::int32_t radius,
                                     std::uint64_t master_seed, std::uint64_t seeds,
                                     Execution exec = Execution::Parallel);

}  // namespace ho
