#include <chrono>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "halforthant/errors.hpp"
#include "halforthant/parallel.hpp"

#ifndef HALFORTHANT_VERSION
#define HALFORTHANT_VERSION "unknown"
#endif

namespace cli {
namespace {

constexpr int kSchemaVersion = 1;

// Arguments that do not influence outputs.
std::vector<std::string> replayable_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    bool dropped = false;
    for (const char* flag : {"--threads", "--out-dir", "--manifest"}) {
      const std::string f(flag);
      if (a == f) {
        ++i;
        dropped = true;
      } else if (a.rfind(f + "=", 0) == 0) {
        dropped = true;
      }
    }
    if (!dropped) out.push_back(a);
  }
  return out;
}

json manifest_outputs(const Run& run) {
  json outs = json::array();
  for (const auto& name : run.outputs()) {
    const auto path = run.out_dir() / name;
    outs.push_back({{"file", name},
                    {"bytes", static_cast<std::uint64_t>(std::filesystem::file_size(path))},
                    {"fnv1a64", hex64(fnv1a_file(path))}});
  }
  return outs;
}

struct Globals {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = "out";
  std::string manifest;
};

int replay(const std::string& manifest_path, const std::string& out_dir, int threads);

int run_cli(const std::vector<std::string>& args) {
  CLI::App app("Chemical distance and shape experiments for half-orthant random environments", "halforthant");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)");
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--manifest", g.manifest, "Manifest path (default <out-dir>/manifest.json)");

  std::vector<Command> commands;
  add_levelset(app, commands);
  add_zeta(app, commands);
  add_lemmas(app, commands);

  std::string replay_from;
  auto* rep = app.add_subcommand("replay", "Re-run a manifest and compare output hashes");
  rep->add_option("--from", replay_from, "Manifest to replay")->required();

  try {
    // CLI11 parses in reverse order.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (g.threads > 0) ho::set_threads(g.threads);
    if (rep->parsed()) return replay(replay_from, g.out_dir, g.threads);

    const Command* cmd = nullptr;
    for (const auto& c : commands)
      if (c.app->parsed()) cmd = &c;
    if (!cmd) throw ho::ConfigError("no command given");

    const auto start = std::chrono::steady_clock::now();
    Run run(g.out_dir, g.seed);
    int code = kExitOk;
    std::string failure;
    try {
      cmd->action(run);
    } catch (const AssertionFailure& e) {
      code = kExitAssertion;
      failure = e.what();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json argv = json::array();
    for (const auto& a : replayable_args(args)) argv.push_back(a);
    json manifest = {{"schema_version", kSchemaVersion},
                     {"command", cmd->app->get_name()},
                     {"args", argv},
                     {"config", run.config()},
                     {"seeds", run.seeds()},
                     {"calibrations", run.calibrations()},
                     {"outputs", manifest_outputs(run)},
                     {"wall_time_seconds", wall},
                     {"threads", ho::max_threads()},
                     {"code_version", HALFORTHANT_VERSION}};
    if (code != kExitOk) manifest["assertion_failure"] = failure;
    const std::filesystem::path mpath =
        g.manifest.empty() ? std::filesystem::path(g.out_dir) / "manifest.json" : std::filesystem::path(g.manifest);
    std::ofstream os(mpath);
    if (!os) throw ho::ConfigError("cannot write " + mpath.string());
    os << manifest.dump(2) << '\n';
    if (code != kExitOk) std::cerr << "assertion failure: " << failure << '\n';
    return code;
  } catch (const RegimeRefusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitRegime;
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion failure: " << e.what() << '\n';
    return kExitAssertion;
  } catch (const ho::TruncatedCluster& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAssertion;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::logic_error& e) {
    std::cerr << "assertion failure: " << e.what() << '\n';
    return kExitAssertion;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int replay(const std::string& manifest_path, const std::string& out_dir, int threads) {
  std::ifstream is(manifest_path);
  if (!is) throw ho::ConfigError("cannot read " + manifest_path);
  const json m = json::parse(is);
  if (m.value("schema_version", 0) != kSchemaVersion) throw ho::ConfigError("unsupported manifest schema");
  const auto original_dir = std::filesystem::path(manifest_path).parent_path();
  const std::filesystem::path dir = out_dir == "out" ? original_dir / "replay" : std::filesystem::path(out_dir);

  std::vector<std::string> args;
  if (threads > 0) args.insert(args.end(), {"--threads", std::to_string(threads)});
  args.insert(args.end(), {"--out-dir", dir.string(), "--manifest", (dir / "manifest.json").string()});
  for (const auto& a : m.at("args")) args.push_back(a.get<std::string>());
  const int code = run_cli(args);
  if (code != kExitOk && code != kExitAssertion) return code;

  bool identical = true;
  for (const auto& out : m.at("outputs")) {
    const auto name = out.at("file").get<std::string>();
    const auto path = dir / name;
    const std::string got = std::filesystem::exists(path) ? hex64(fnv1a_file(path)) : "missing";
    const auto want = out.at("fnv1a64").get<std::string>();
    const bool same = got == want;
    identical = identical && same;
    std::cout << (same ? "same " : "DIFF ") << name << ' ' << want << ' ' << got << '\n';
  }
  std::cout << (identical ? "replay identical\n" : "replay differs\n");
  return identical ? kExitOk : kExitAssertion;
}

}  // namespace
}  // namespace cli

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli::run_cli(args);
}
