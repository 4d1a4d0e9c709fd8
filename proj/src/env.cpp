#include "halforthant/env.hpp"

#include <omp.h>

#include <cmath>
#include <string>

#include "binio.hpp"
#include "halforthant/errors.hpp"

namespace ho {
namespace {

constexpr std::uint64_t kSiteDomain = 0x5a17e0f5d1c3b2a9ull;
constexpr std::uint64_t kAuxDomain = 0xa0c1d2e3f4051627ull;
constexpr std::uint64_t kBankDomain = 0x3c6ef372fe94f82bull;

inline double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace

int max_threads() { return omp_get_max_threads(); }
void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

StepSet out_steps(SiteKind kind, int dim) {
  switch (kind) {
    case SiteKind::Half:
      return StepSet::positive(dim);
    case SiteKind::Full:
      return StepSet::all(dim);
  }
  return {};
}

void EnvConfig::validate() const {
  if (dim < 2 || dim > kMaxDim) throw ConfigError("dimension must be in [2, " + std::to_string(kMaxDim) + "]");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  if (radius < 1) throw ConfigError("box radius must be >= 1");
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double site_uniform(std::uint64_t seed, const Point& x) {
  std::uint64_t h = mix64(seed ^ kSiteDomain);
  for (int i = 0; i < x.dim(); ++i)
    h = mix64(h ^ ((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(x[i])));
  return to_unit(h);
}

double aux_uniform(std::uint64_t aux_seed, std::uint64_t index) {
  return to_unit(mix64(mix64(aux_seed ^ kAuxDomain) ^ index));
}

std::uint64_t bank_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master ^ kBankDomain) + index);
}

Environment::Environment(const EnvConfig& config) : cfg_(config) { cfg_.validate(); }

bool is_consistent(const Environment& env, const LatticePath& path) {
  Point x = path.start();
  for (Step s : path.steps()) {
    if (!env.allows(x, s)) return false;
    x += s;
  }
  return true;
}

SiteBitmap::SiteBitmap(const Box& box, std::uint64_t seed, double threshold, Execution exec)
    : box_(box), words_((box.size() + 63) / 64, 0) {
  const auto nwords = static_cast<std::int64_t>(words_.size());
  const std::uint64_t total = box.size();
  auto fill_word = [&](std::int64_t w) {
    const std::uint64_t first = static_cast<std::uint64_t>(w) * 64;
    const std::uint64_t last = std::min<std::uint64_t>(first + 64, total);
    Point x = box_.point(first);
    std::uint64_t bits = 0;
    for (std::uint64_t i = first; i < last; ++i) {
      if (site_uniform(seed, x) < threshold) bits |= std::uint64_t{1} << (i - first);
      box_.next(x);
    }
    words_[static_cast<std::size_t>(w)] = bits;
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t w = 0; w < nwords; ++w) fill_word(w);
  } else {
    for (std::int64_t w = 0; w < nwords; ++w) fill_word(w);
  }
}

void SiteBitmap::set(std::uint64_t index, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (index & 63);
  if (value)
    words_[index >> 6] |= mask;
  else
    words_[index >> 6] &= ~mask;
}

void write_env_dump(std::ostream& os, const Environment& env, Execution exec) {
  const auto& c = env.config();
  os.write("HOEN", 4);
  binio::put<std::uint16_t>(os, 1);
  binio::put<std::uint16_t>(os, static_cast<std::uint16_t>(c.dim));
  binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(c.radius));
  binio::put<double>(os, c.p);
  binio::put<std::uint64_t>(os, c.seed);
  binio::put<std::uint32_t>(os, 0);
  const SiteBitmap bits(env.box(), c.seed, c.p, exec);
  const std::uint64_t nbytes = (bits.box().size() + 7) / 8;
  for (std::uint64_t b = 0; b < nbytes; ++b) {
    const auto byte = static_cast<std::uint8_t>(bits.words()[b >> 3] >> ((b & 7) * 8));
    os.put(static_cast<char>(byte));
  }
}

EnvDump read_env_dump(std::istream& is) {
  binio::expect_magic(is, "HOEN");
  if (binio::get<std::uint16_t>(is) != 1) throw std::runtime_error("unsupported HOEN version");
  EnvDump dump;
  dump.config.dim = binio::get<std::uint16_t>(is);
  dump.config.radius = static_cast<std::int32_t>(binio::get<std::uint32_t>(is));
  dump.config.p = binio::get<double>(is);
  dump.config.seed = binio::get<std::uint64_t>(is);
  binio::get<std::uint32_t>(is);
  dump.config.validate();
  const Box box = Box::cube(Point::origin(dump.config.dim), dump.config.radius);
  dump.bits.resize((box.size() + 7) / 8);
  if (!is.read(reinterpret_cast<char*>(dump.bits.data()), static_cast<std::streamsize>(dump.bits.size())))
    throw std::runtime_error("truncated dump");
  return dump;
}

}  // namespace ho
