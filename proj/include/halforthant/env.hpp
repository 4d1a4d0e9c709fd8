#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "halforthant/lattice.hpp"
#include "halforthant/parallel.hpp"

namespace ho {

// Only Half ships; further kinds (e.g. orthant sites) would add enumerators
// and a row in out_steps().
enum class SiteKind : std::uint8_t { Full, Half };

StepSet out_steps(SiteKind kind, int dim);

struct EnvConfig {
  int dim = 2;
  double p = 0.5;
  std::int32_t radius = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

std::uint64_t mix64(std::uint64_t z);

// U(x) in [0,1) with 53 bits, a pure function of (seed, x).
double site_uniform(std::uint64_t seed, const Point& x);
// Auxiliary uniform stream keyed by (aux_seed, index); disjoint from the
// site stream.
double aux_uniform(std::uint64_t aux_seed, std::uint64_t index);
// Derives the i-th seed of a seed bank from a master seed.
std::uint64_t bank_seed(std::uint64_t master, std::uint64_t index);

// Half-orthant environment: x is Half iff U(x) < p. Kinds are computed on
// demand for any x; the radius bounds box-based operations only.
class Environment {
 public:
  explicit Environment(const EnvConfig& config);

  const EnvConfig& config() const { return cfg_; }
  int dim() const { return cfg_.dim; }
  double p() const { return cfg_.p; }
  std::uint64_t seed() const { return cfg_.seed; }
  std::int32_t radius() const { return cfg_.radius; }
  Box box() const { return Box::cube(Point::origin(cfg_.dim), cfg_.radius); }

  bool is_half(const Point& x) const { return site_uniform(cfg_.seed, x) < cfg_.p; }
  SiteKind site_kind(const Point& x) const { return is_half(x) ? SiteKind::Half : SiteKind::Full; }
  StepSet out_steps(const Point& x) const { return ho::out_steps(site_kind(x), cfg_.dim); }
  bool allows(const Point& x, Step s) const { return !s.negative() || !is_half(x); }

 private:
  EnvConfig cfg_;
};

bool is_consistent(const Environment& env, const LatticePath& path);

// One bit per site over a box: bit set iff U(x) < threshold. Used to cache
// Half sites (threshold p) or occupied sites (threshold q).
class SiteBitmap {
 public:
  SiteBitmap() = default;
  SiteBitmap(const Box& box, std::uint64_t seed, double threshold, Execution exec = Execution::Serial);

  const Box& box() const { return box_; }
  bool test(std::uint64_t index) const { return (words_[index >> 6] >> (index & 63)) & 1u; }
  bool test(const Point& x) const { return test(box_.index(x)); }
  void set(std::uint64_t index, bool value);
  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const SiteBitmap& a, const SiteBitmap& b) { return a.words_ == b.words_; }

 private:
  Box box_;
  std::vector<std::uint64_t> words_;
};

// HOEN dump: 32-byte little-endian header (magic, version u16, d u16, R u32,
// p f64, seed u64, 4 reserved zero bytes) followed by one bit per site of
// [-R,R]^d, row-major, least significant bit first, bit = 1 for Half.
void write_env_dump(std::ostream& os, const Environment& env, Execution exec = Execution::Serial);

struct EnvDump {
  EnvConfig config;
  std::vector<std::uint8_t> bits;
  bool half(std::uint64_t index) const { return (bits[index >> 3] >> (index & 7)) & 1u; }
};
EnvDump read_env_dump(std::istream& is);

}  // namespace ho
