#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "halforthant/stats.hpp"

namespace cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRegime = 3;
inline constexpr int kExitAssertion = 4;

struct RegimeRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared state of one CLI run: where files go and what the manifest records.
class Run {
 public:
  Run(std::filesystem::path out_dir, std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }

  // Opens out_dir/name for binary writing and registers it as an output.
  std::ofstream open(const std::string& name);
  void add_calibration(const ho::Calibration& c);
  void set_config(json config) { config_ = std::move(config); }
  void set_seeds(json seeds) { seeds_ = std::move(seeds); }

  const std::vector<std::string>& outputs() const { return outputs_; }
  const json& calibrations() const { return calibrations_; }
  const json& config() const { return config_; }
  const json& seeds() const { return seeds_; }

 private:
  std::filesystem::path out_dir_;
  std::uint64_t seed_;
  std::vector<std::string> outputs_;
  json calibrations_ = json::array();
  json config_ = json::object();
  json seeds_ = json::object();
};

// Shortest round-trip text for a double; "nan" for NaN.
std::string num(double x);

std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t x);

// Exit-code-aware guards.
void regime_guard(bool ok, const std::string& why);
void hard_assert(bool ok, const std::string& what);

// Bytes needed for a 16-bit field plus a one-bit environment over `cells`.
std::uint64_t field_bytes(std::uint64_t cells);
void memory_guard(std::uint64_t bytes, std::uint64_t limit, const std::string& what);

}  // namespace cli
