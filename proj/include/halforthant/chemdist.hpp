#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "halforthant/env.hpp"
#include "halforthant/lattice.hpp"
#include "halforthant/parallel.hpp"
#include "halforthant/rational.hpp"

namespace ho {

inline constexpr std::uint16_t kUnreached = 0xFFFF;
inline constexpr std::uint32_t kMaxHorizon = 65534;

struct EnvFingerprint {
  std::uint64_t seed = 0;
  double p = 0.0;
  int dim = 0;
};

// Exact chemical distances from a source, up to a horizon, stored on the
// l-infinity box of radius horizon around the source.
class DistanceField {
 public:
  DistanceField(const Point& source, std::uint32_t horizon, const EnvFingerprint& fp,
                std::vector<std::uint16_t> values);

  const Point& source() const { return source_; }
  std::uint32_t horizon() const { return horizon_; }
  const Box& box() const { return box_; }
  const EnvFingerprint& fingerprint() const { return fp_; }

  // T_{source,x} if it is at most the horizon, otherwise nullopt.
  std::optional<std::uint32_t> value(const Point& x) const;
  std::uint16_t raw(std::uint64_t index) const { return values_[index]; }
  std::span<const std::uint16_t> values() const { return values_; }

 private:
  Point source_;
  std::uint32_t horizon_;
  EnvFingerprint fp_;
  Box box_;
  std::vector<std::uint16_t> values_;
};

// Frontier BFS over the implicit directed lattice graph.
DistanceField bfs_distances(const Environment& env, const Point& source, std::uint32_t horizon,
                            Execution exec = Execution::Serial);

// A_k relative to the field's source, in row-major order.
std::vector<Point> level_set(const DistanceField& field, std::uint32_t k);

// T_{u,v} if at most cap. The search is confined to points w with
// |w-u|_1 + |v-w|_1 <= cap, which every path of length <= cap satisfies.
std::optional<std::uint32_t> passage_time(const Environment& env, const Point& u, const Point& v,
                                          std::uint32_t cap, Execution exec = Execution::Serial);

struct DnResult {
  Rational k;                 // largest grid value j/q with T_{[kv]} <= n
  std::int64_t denominator;   // grid denominator q
};

// sup{k : T_{[kv]} <= n} approximated from below on the grid {j/q}; q = 0
// selects the default 8*|v|_1.
DnResult d_n(const DistanceField& field, const Point& v, std::int64_t denominator = 0);

// Minimal lengths from the origin over consistent paths using at most
// `budget` steps from `b_steps`, minimised over the budget used.
class ConstrainedField {
 public:
  ConstrainedField(std::uint32_t horizon, std::uint32_t budget, StepSet b_steps, const EnvFingerprint& fp,
                   std::vector<std::uint16_t> values);

  std::uint32_t horizon() const { return horizon_; }
  std::uint32_t budget() const { return budget_; }
  StepSet b_steps() const { return b_steps_; }
  const Box& box() const { return box_; }
  std::optional<std::uint32_t> value(const Point& x) const;
  std::span<const std::uint16_t> values() const { return values_; }

 private:
  std::uint32_t horizon_, budget_;
  StepSet b_steps_;
  EnvFingerprint fp_;
  Box box_;
  std::vector<std::uint16_t> values_;
};

// {+e_1, -e_2} in d = 2.
StepSet default_b_steps(int dim);

ConstrainedField constrained_reach(const Environment& env, std::uint32_t horizon, std::uint32_t budget,
                                   StepSet b_steps);

// The event that a consistent path with length <= n(1+eps) and at most
// eps*n steps in {+e_1,-e_2} ends at a point x with 0 <= x2 <= n(s+eps/4),
// x1 <= -n(1-s-eps/4) and |x|_1 >= n. d = 2 only.
bool jn_indicator(const Environment& env, std::uint32_t n, const Rational& s, const Rational& eps);

// HOCD dump: "HOCD", version u16, d u16, horizon u32, source i32 x d,
// p f64, seed u64, then the u16 values row-major. Little-endian.
void write_field_dump(std::ostream& os, const DistanceField& field);
DistanceField read_field_dump(std::istream& is);

// Columns x1..xd,k.
void write_level_set_csv(std::ostream& os, int dim, const std::vector<Point>& points, std::uint32_t k,
                         bool header = true);

}  // namespace ho
