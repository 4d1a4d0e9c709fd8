#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halforthant/env.hpp"
#include "halforthant/lattice.hpp"
#include "halforthant/rational.hpp"

namespace ho {

// d = 2: every west step leaves a Full site. Other steps are unchecked.
bool is_good(const Environment& env, const LatticePath& path);

// Keeps the times and types of the east/south steps; at every other time
// steps west if the current site allows it, north otherwise.
LatticePath westernise(const Environment& env, const LatticePath& path);

// First time m at which gamma_m - west_m fails to have equal, nonnegative
// coordinates; nullopt if the relation holds throughout.
std::optional<std::size_t> western_violation(const LatticePath& path, const LatticePath& west);

// Biased walk parameters: alpha and beta are the normalised positive and
// negative parts of a direction with positive mass a. beta is absent when
// a = 1.
struct WalkerParams {
  Rational a;
  std::vector<Rational> alpha;
  std::optional<std::vector<Rational>> beta;
  Rational b;
  Rational eps;

  int dim() const { return static_cast<int>(alpha.size()); }
  // Throws ParameterError unless the sums, supports and p < b < a <= 1,
  // a - eps < b hold exactly.
  void validate(const Rational& p) const;
  std::vector<Rational> mu_b() const;

  // a = sum of positive parts, b = a - eps/2. v must have |v|_1 = 1.
  static WalkerParams from_direction(const Direction& v, const Rational& eps);
};

// L steps from the origin. Half sites: +e_i with probability alpha_i. Full
// sites: +e_i with probability (b-p)alpha_i/(1-p), -e_i with probability
// (1-b)beta_i/(1-p). Uniforms come from aux_uniform(aux_seed, step).
LatticePath gamma_walk(const Environment& env, std::uint64_t aux_seed, const WalkerParams& params,
                       std::uint64_t length);

struct FlatCertificate {
  bool reached = false;
  std::int64_t walk_steps = 0;
  std::int64_t correction = 0;          // +e_i steps appended after the walk
  std::int64_t allowed_correction = 0;  // floor(2 d eps m n)
  bool deficit_negative = false;        // some coordinate overshot the target
  Point target;
  LatticePath path;                     // consistent when reached
};

// Walks m_v n steps of gamma_walk towards n m_v v and closes the gap with
// +e_i steps. Throws std::domain_error unless v lies in the good flat set
// and p < a - eps/2.
FlatCertificate certify_flat_direction(const Environment& env, const Direction& v, const Rational& eps,
                                       std::uint64_t n, std::uint64_t aux_seed);

// l i.i.d. marks, west with probability 1 - p and north otherwise.
std::vector<Step> sample_marks(std::uint64_t seed, double p, std::size_t l);

// At time times[i] the path takes forced[i] (east or south); at any other
// time j it takes marks[j].
LatticePath build_gamma_bar(const std::vector<Step>& marks, const std::vector<std::uint32_t>& times,
                            const std::vector<Step>& forced, std::size_t l);

// "x1:x2:...|steps", steps as E W N S for axes 1, 2 and +k / -k beyond.
std::string to_step_string(const LatticePath& path);
LatticePath parse_step_string(std::string_view text);

}  // namespace ho
