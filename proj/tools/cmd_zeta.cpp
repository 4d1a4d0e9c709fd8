#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <string>

#include "commands.hpp"
#include "halforthant/chemdist.hpp"
#include "halforthant/dual2d.hpp"
#include "halforthant/errors.hpp"
#include "halforthant/perc.hpp"
#include "halforthant/shape.hpp"

namespace cli {
namespace {

struct ZetaCliOptions {
  double p = 0.5;
  std::vector<std::string> directions;
  std::string directions_file;
  int sweep = 0;
  std::vector<std::int64_t> scales{250, 500, 1000, 2000};
  std::uint64_t seeds = 20;
  double tau_flat = 0.05;
  double tau_sep = 0.02;
  std::int64_t cap_factor = 8;
  double dual_threshold = std::nan("");
  double site_threshold = std::nan("");
  bool calibrate = false;
  bool dn = false;
};

json rationals(const std::vector<ho::Rational>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(x.str());
  return a;
}

json nullable(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

}  // namespace

void add_zeta(CLI::App& root, std::vector<Command>& commands) {
  auto opt = std::make_shared<ZetaCliOptions>();
  auto* app = root.add_subcommand("zeta", "Estimate the shape function along rational directions");
  app->add_option("--p", opt->p, "Half-site probability")->check(CLI::Range(0.0, 1.0));
  app->add_option("--direction", opt->directions, "Direction such as \"-3/10,7/10\" (repeatable)");
  app->add_option("--directions-file", opt->directions_file, "File with one direction per line");
  app->add_option("--sweep", opt->sweep, "Polar sweep of K directions on the l1 circle (d = 2)");
  app->add_option("--scales", opt->scales, "Scale grid n; targets are [n u]")->delimiter(',');
  app->add_option("--seeds", opt->seeds, "Number of environments per scale");
  app->add_option("--tau-flat", opt->tau_flat, "Relative tolerance for a flat verdict");
  app->add_option("--tau-sep", opt->tau_sep, "Relative separation for a non-flat verdict");
  app->add_option("--cap-factor", opt->cap_factor, "Horizon cap as a multiple of |target|_1");
  app->add_option("--dual-threshold", opt->dual_threshold, "Known oriented triangular threshold");
  app->add_option("--site-threshold", opt->site_threshold, "Known site percolation threshold");
  app->add_flag("--calibrate", opt->calibrate, "Estimate both thresholds first and record them");
  app->add_flag("--dn", opt->dn, "Also compute D_n for lattice directions at the largest scale");

  commands.push_back({app, [opt](Run& run) {
    std::vector<ho::Direction> dirs;
    for (const auto& s : opt->directions) dirs.push_back(ho::Direction::parse(s));
    if (!opt->directions_file.empty()) {
      std::ifstream is(opt->directions_file);
      if (!is) throw ho::ConfigError("cannot read " + opt->directions_file);
      std::string line;
      while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        dirs.push_back(ho::Direction::parse(line));
      }
    }
    if (opt->sweep > 0)
      for (auto& d : ho::diamond_sweep(opt->sweep)) dirs.push_back(d);
    if (dirs.empty()) throw ho::ConfigError("zeta: no directions given");
    const int dim = dirs.front().dim();
    for (const auto& d : dirs)
      if (d.dim() != dim) throw ho::ConfigError("zeta: directions differ in dimension");

    ho::ZetaOptions zopt;
    zopt.cap_factor = opt->cap_factor;
    if (!std::isnan(opt->dual_threshold)) zopt.thresholds.dual_critical = opt->dual_threshold;
    if (!std::isnan(opt->site_threshold)) zopt.thresholds.site_critical = opt->site_threshold;
    if (opt->calibrate) {
      std::vector<double> grid;
      for (int k = 50; k <= 70; ++k) grid.push_back(k / 100.0);
      const auto dual = ho::calibrate_dual_threshold(grid, 50, ho::bank_seed(run.seed(), 1'000'001), 400, 20'000);
      const auto site = ho::calibrate_site_threshold(dim, grid, 50, ho::bank_seed(run.seed(), 1'000'002), 200);
      run.add_calibration(dual);
      run.add_calibration(site);
      if (!zopt.thresholds.dual_critical && !std::isnan(dual.estimate)) zopt.thresholds.dual_critical = dual.estimate;
      if (!zopt.thresholds.site_critical && !std::isnan(site.estimate)) zopt.thresholds.site_critical = site.estimate;
    }
    const ho::VerdictOptions vopt{opt->tau_flat, opt->tau_sep};

    json scales = json::array();
    for (auto n : opt->scales) scales.push_back(n);
    run.set_config({{"p", opt->p},
                    {"dim", dim},
                    {"scales", scales},
                    {"seeds", opt->seeds},
                    {"tau_flat", opt->tau_flat},
                    {"tau_sep", opt->tau_sep},
                    {"cap_factor", opt->cap_factor},
                    {"directions", static_cast<std::uint64_t>(dirs.size())}});
    run.set_seeds({{"master", run.seed()}, {"count", opt->seeds}, {"derivation", "bank_seed(master, j)"}});

    json report = json::array();
    auto csv = run.open("zeta.csv");
    csv << "index";
    for (int i = 0; i < dim; ++i) csv << ",u" << i + 1;
    csv << ",l1,estimate,stderr,ratio_to_l1,verdict,prediction,regime\n";
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const auto& u = dirs[k];
      const auto est = ho::estimate_zeta(opt->p, u, opt->scales, run.seed(), opt->seeds, zopt);
      const auto verdict = ho::direction_verdict(u, est, vopt);
      std::string reason;
      const auto predicted = ho::predicted_verdict(opt->p, u, &reason);
      const double l1 = u.l1().to_double();

      json ratios = json::array();
      for (const auto& row : est.ratios) {
        json r = json::array();
        for (double x : row) r.push_back(nullable(x));
        ratios.push_back(r);
      }
      json means = json::array(), ses = json::array(), spreads = json::array();
      for (std::size_t i = 0; i < est.scales.size(); ++i) {
        means.push_back(nullable(est.mean[i]));
        ses.push_back(nullable(est.stderr_[i]));
        spreads.push_back(nullable(est.spread[i]));
      }
      json seeds = json::array();
      for (auto s : est.seeds) seeds.push_back(s);
      json entry = {{"u", rationals(u.coords())},
                    {"m_u", u.m()},
                    {"p", opt->p},
                    {"grid", scales},
                    {"seeds", seeds},
                    {"ratios", ratios},
                    {"mean", means},
                    {"stderr_by_scale", ses},
                    {"spread", spreads},
                    {"estimate", est.estimate},
                    {"stderr", est.standard_error},
                    {"verdict", ho::verdict_name(verdict)},
                    {"predictions",
                     {{"verdict", predicted ? json(ho::verdict_name(*predicted)) : json(nullptr)}, {"reason", reason}}},
                    {"regime", ho::regime_name(est.regime)},
                    {"inconclusive", est.inconclusive}};

      if (opt->dn) {
        // D_n for the lattice point m_u u from a field of horizon = largest scale.
        const auto n = static_cast<std::uint32_t>(*std::max_element(opt->scales.begin(), opt->scales.end()));
        json dn = json::array();
        for (std::size_t j = 0; j < est.seeds.size(); ++j) {
          const ho::Environment env(ho::EnvConfig{dim, opt->p, static_cast<std::int32_t>(n), est.seeds[j]});
          const auto field = ho::bfs_distances(env, ho::Point::origin(dim), n, ho::Execution::Parallel);
          const auto r = ho::d_n(field, u.integral());
          dn.push_back({{"k", r.k.str()}, {"denominator", r.denominator}});
        }
        entry["d_n"] = {{"n", n}, {"v", u.integral().str()}, {"values", dn}};
      }
      report.push_back(entry);

      csv << k;
      for (int i = 0; i < dim; ++i) csv << ',' << num(u.coord(i).to_double());
      csv << ',' << num(l1) << ',' << num(est.estimate) << ',' << num(est.standard_error) << ','
          << num(est.estimate / l1) << ',' << ho::verdict_name(verdict) << ','
          << (predicted ? ho::verdict_name(*predicted) : "NONE") << ',' << ho::regime_name(est.regime) << '\n';
    }
    auto js = run.open("zeta_report.json");
    js << report.dump(2) << '\n';
  }});
}

}  // namespace cli
