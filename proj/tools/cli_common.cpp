#include "cli_common.hpp"

#include <charconv>
#include <cmath>

#include "halforthant/errors.hpp"

namespace cli {

Run::Run(std::filesystem::path out_dir, std::uint64_t seed) : out_dir_(std::move(out_dir)), seed_(seed) {
  std::filesystem::create_directories(out_dir_);
}

std::ofstream Run::open(const std::string& name) {
  std::ofstream os(out_dir_ / name, std::ios::binary | std::ios::trunc);
  if (!os) throw ho::ConfigError("cannot open " + (out_dir_ / name).string() + " for writing");
  outputs_.push_back(name);
  return os;
}

void Run::add_calibration(const ho::Calibration& c) {
  json grid = json::array(), stat = json::array();
  for (double g : c.grid) grid.push_back(g);
  for (double s : c.statistic) stat.push_back(s);
  calibrations_.push_back({{"name", c.name},
                           {"method", c.method},
                           {"estimate", std::isnan(c.estimate) ? json(nullptr) : json(c.estimate)},
                           {"grid", grid},
                           {"statistic", stat}});
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ho::ConfigError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = digits[x & 15];
  return s;
}

void regime_guard(bool ok, const std::string& why) {
  if (!ok) throw RegimeRefusal(why);
}

void hard_assert(bool ok, const std::string& what) {
  if (!ok) throw AssertionFailure(what);
}

std::uint64_t field_bytes(std::uint64_t cells) { return 2 * cells + cells / 8 + 8; }

void memory_guard(std::uint64_t bytes, std::uint64_t limit, const std::string& what) {
  if (bytes > limit)
    throw ho::ConfigError(what + " needs about " + std::to_string(bytes >> 20) + " MiB, above the limit of " +
                          std::to_string(limit >> 20) + " MiB (raise --max-mem)");
}

}  // namespace cli
