#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "commands.hpp"
#include "halforthant/chemdist.hpp"
#include "halforthant/dual2d.hpp"
#include "halforthant/errors.hpp"
#include "halforthant/paths.hpp"
#include "halforthant/perc.hpp"
#include "halforthant/shape.hpp"

namespace cli {
namespace {

struct LemmaOptions {
  std::string which;
  double p = 0.4;
  std::uint64_t seeds = 1000;
  std::uint32_t length = 200;
  std::int32_t radius = 100;
  double q = 0.75;
  std::string orientation = "+1,+2";
  std::string v = "1,1";
  std::uint32_t n_max = 100;
  std::uint32_t t = 200;
  std::string direction = "-3/10,7/10";
  std::string eps = "1/20";
  std::uint32_t n = 200;
  std::vector<std::uint32_t> ns{100, 200, 400};
  std::string s = "1/5";
  std::uint64_t cap = ho::kDefaultClusterCap;
  double site_threshold = std::nan("");
};

// Tally of one named check.
struct Tally {
  std::uint64_t passed = 0, failed = 0;
  void add(bool ok) { ok ? ++passed : ++failed; }
};

json tallies(const std::vector<std::pair<std::string, Tally>>& ts) {
  json out = json::object();
  for (const auto& [name, t] : ts) out[name] = {{"passed", t.passed}, {"failed", t.failed}};
  return out;
}

bool all_passed(const std::vector<std::pair<std::string, Tally>>& ts) {
  return std::all_of(ts.begin(), ts.end(), [](const auto& x) { return x.second.failed == 0; });
}

json fit_json(const ho::TailFit& fit) {
  return {{"status", fit.status == ho::FitStatus::Ok ? "ok" : "insufficient"},
          {"slope", fit.slope},
          {"intercept", fit.intercept},
          {"window", {fit.window_lo, fit.window_hi}},
          {"fitted_points", fit.fitted}};
}

void write_tail(std::ostream& os, const ho::TailFit& fit, std::uint64_t samples) {
  os << "n,fraction,stderr\n";
  for (const auto& pt : fit.points) {
    const double se = samples > 1 ? std::sqrt(pt.fraction * (1 - pt.fraction) / static_cast<double>(samples)) : 0.0;
    os << num(pt.n) << ',' << num(pt.fraction) << ',' << num(se) << '\n';
  }
}

// A random good path: uniform over E, W, N, S, with W replaced by N at Half
// sites.
ho::LatticePath random_good_path(const ho::Environment& env, std::uint64_t seed, std::uint32_t length) {
  ho::LatticePath path(ho::Point::origin(2));
  ho::Point x = ho::Point::origin(2);
  for (std::uint32_t j = 0; j < length; ++j) {
    const auto k = static_cast<std::uint8_t>(ho::aux_uniform(seed, j) * 4.0);
    ho::Step s(std::min<std::uint8_t>(k, 3));
    if (s == ho::kWest && env.is_half(x)) s = ho::kNorth;
    path.push(s);
    x += s;
  }
  return path;
}

double site_threshold(Run& run, const LemmaOptions& opt) {
  if (!std::isnan(opt.site_threshold)) return opt.site_threshold;
  std::vector<double> grid;
  for (int k = 50; k <= 70; ++k) grid.push_back(k / 100.0);
  const auto c = ho::calibrate_site_threshold(2, grid, 50, ho::bank_seed(run.seed(), 1'000'002), 200);
  run.add_calibration(c);
  if (std::isnan(c.estimate)) throw RegimeRefusal("site threshold calibration found no crossing on its grid");
  return c.estimate;
}

void lemma_dual(Run& run, const LemmaOptions& opt, json& report) {
  regime_guard(opt.p < 0.55, "dual lemma needs p < 0.55 (subcritical dual cluster)");
  const auto rows = ho::map_tasks<ho::DualSample>(opt.seeds, ho::Execution::Parallel, [&](std::size_t i) {
    return ho::dual_sample(ho::bank_seed(run.seed(), i), opt.p, opt.cap);
  });
  Tally consistent, endpoint, bound, above_bfs, truncated;
  double sum_t = 0, sum_c = 0;
  auto csv = run.open("lemma_dual.csv");
  csv << "seed,cluster_size,K,awesome,path_length,T_bfs\n";
  for (const auto& r : rows) {
    truncated.add(!r.truncated);
    csv << r.seed << ',' << r.cluster_size << ',' << r.top << ',' << r.awesome << ',' << r.path_length << ','
        << r.t_bfs << '\n';
    if (r.truncated) continue;
    consistent.add(r.consistent);
    endpoint.add(r.ends_west);
    bound.add(r.path_length <= 4 * r.cluster_size);
    above_bfs.add(r.path_length >= r.t_bfs);
    sum_t += r.t_bfs;
    sum_c += static_cast<double>(r.cluster_size);
  }
  const std::vector<std::pair<std::string, Tally>> checks{{"consistent", consistent},
                                                          {"ends_at_minus_e1", endpoint},
                                                          {"length_at_most_4C", bound},
                                                          {"length_at_least_T", above_bfs},
                                                          {"not_truncated", truncated}};
  const auto tail = ho::cluster_tail(opt.p, run.seed(), opt.seeds, opt.cap);
  {
    auto os = run.open("lemma_dual_tail.csv");
    write_tail(os, tail.fit, opt.seeds);
  }
  const double n = std::max<double>(1.0, static_cast<double>(consistent.passed + consistent.failed));
  report["checks"] = tallies(checks);
  report["mean_T"] = sum_t / n;
  report["mean_cluster_size"] = sum_c / n;
  report["mean_T_at_most_4_mean_C"] = sum_t / n <= 4 * sum_c / n;
  report["cluster_tail_fit"] = fit_json(tail.fit);
  report["cluster_tail_truncated"] = tail.truncated;
  report["pass"] = all_passed(checks);
}

void lemma_western(Run& run, const LemmaOptions& opt, json& report) {
  struct Row {
    bool good_in = false, good_out = false, same_fixed = false;
    std::int64_t violation = -1;
    std::int64_t l1_in = 0, l1_out = 0;
  };
  const auto rows = ho::map_tasks<Row>(opt.seeds, ho::Execution::Parallel, [&](std::size_t i) {
    const std::uint64_t seed = ho::bank_seed(run.seed(), i);
    const ho::Environment env(ho::EnvConfig{2, opt.p, 1, seed});
    const auto path = random_good_path(env, ho::mix64(seed ^ 0x77e5u), opt.length);
    Row r;
    r.good_in = ho::is_good(env, path);
    const auto west = ho::westernise(env, path);
    r.good_out = ho::is_good(env, west);
    r.same_fixed = true;
    for (std::size_t m = 0; m < path.length(); ++m) {
      const ho::Step a = path.steps()[m], b = west.steps()[m];
      const bool fixed_a = a == ho::kEast || a == ho::kSouth;
      const bool fixed_b = b == ho::kEast || b == ho::kSouth;
      if (fixed_a != fixed_b || (fixed_a && a != b)) r.same_fixed = false;
    }
    const auto v = ho::western_violation(path, west);
    r.violation = v ? static_cast<std::int64_t>(*v) : -1;
    r.l1_in = ho::l1_norm(path.endpoint());
    r.l1_out = ho::l1_norm(west.endpoint());
    return r;
  });
  Tally invariant, good, fixed;
  auto csv = run.open("lemma_western.csv");
  csv << "index,violation_time,good_out,same_fixed_steps,l1_in,l1_out\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    invariant.add(r.violation < 0);
    good.add(r.good_in && r.good_out);
    fixed.add(r.same_fixed);
    csv << i << ',' << r.violation << ',' << r.good_out << ',' << r.same_fixed << ',' << r.l1_in << ',' << r.l1_out
        << '\n';
  }
  const std::vector<std::pair<std::string, Tally>> checks{
      {"coordinate_difference_invariant", invariant}, {"good_paths", good}, {"fixed_steps_preserved", fixed}};
  report["checks"] = tallies(checks);
  report["pass"] = all_passed(checks);
}

void lemma_detour(Run& run, const LemmaOptions& opt, json& report) {
  const double threshold = site_threshold(run, opt);
  report["site_threshold"] = threshold;
  regime_guard(1.0 - opt.p > threshold, "detour needs 1 - p above the site percolation threshold " + num(threshold));
  struct Row {
    ho::Detour d;
    std::uint32_t t = 0;
    bool consistent = false, endpoint = false;
  };
  const auto rows = ho::map_tasks<Row>(opt.seeds, ho::Execution::Parallel, [&](std::size_t i) {
    const ho::Environment env(ho::EnvConfig{2, opt.p, opt.radius, ho::bank_seed(run.seed(), i)});
    Row r;
    r.d = ho::detour_path(env);
    if (r.d.status != ho::DetourStatus::Ok) return r;
    r.consistent = ho::is_consistent(env, r.d.path);
    r.endpoint = r.d.path.endpoint() == ho::Point{-1, 0};
    const auto cap = static_cast<std::uint32_t>(std::min<std::size_t>(r.d.path.length(), ho::kMaxHorizon));
    const auto t = ho::passage_time(env, ho::Point::origin(2), ho::Point{-1, 0}, cap);
    r.t = t ? *t : ho::kUnreached;
    return r;
  });
  Tally consistent, endpoint, above, found;
  double sum_len = 0;
  auto csv = run.open("lemma_detour.csv");
  csv << "index,status,n_plus,n_minus,m,length,T_bfs\n";
  static const char* names[] = {"ok", "not_found", "disconnected"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    found.add(r.d.status == ho::DetourStatus::Ok);
    csv << i << ',' << names[static_cast<int>(r.d.status)] << ',' << r.d.n_plus << ',' << r.d.n_minus << ','
        << r.d.m << ',' << r.d.path.length() << ',' << r.t << '\n';
    if (r.d.status != ho::DetourStatus::Ok) continue;
    consistent.add(r.consistent);
    endpoint.add(r.endpoint);
    above.add(r.t != ho::kUnreached && r.d.path.length() >= r.t);
    sum_len += static_cast<double>(r.d.path.length());
  }
  const std::vector<std::pair<std::string, Tally>> checks{
      {"consistent", consistent}, {"ends_at_minus_e1", endpoint}, {"length_at_least_T", above}};
  report["checks"] = tallies(checks);
  report["found"] = {{"ok", found.passed}, {"not_found_or_disconnected", found.failed}};
  report["mean_length"] = found.passed ? sum_len / static_cast<double>(found.passed) : 0.0;
  report["pass"] = all_passed(checks);
}

void lemma_walker(Run& run, const LemmaOptions& opt, json& report) {
  const auto v = ho::Direction::parse(opt.direction);
  const auto eps = ho::Rational::parse(opt.eps);
  const auto good = ho::in_s_good(v, ho::Rational(0));
  regime_guard(v.l1() == ho::Rational(1), "walker needs |v|_1 = 1");
  regime_guard(ho::greater_equal(good.a, opt.p), "walker needs the direction in the good flat set (a >= p)");
  regime_guard((good.a - eps / ho::Rational(2)).to_double() > opt.p, "walker needs eps < 2 (a - p)");
  const auto rows = ho::map_tasks<ho::FlatCertificate>(opt.seeds, ho::Execution::Parallel, [&](std::size_t i) {
    const std::uint64_t seed = ho::bank_seed(run.seed(), i);
    const ho::Environment env(ho::EnvConfig{v.dim(), opt.p, 1, seed});
    auto c = ho::certify_flat_direction(env, v, eps, opt.n, ho::mix64(seed ^ 0xa11ceu));
    return c;
  });
  Tally reached, consistent;
  auto csv = run.open("lemma_walker.csv");
  csv << "index,reached,walk_steps,correction,allowed_correction,deficit_negative\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = rows[i];
    reached.add(c.reached);
    if (c.reached) {
      const ho::Environment env(ho::EnvConfig{v.dim(), opt.p, 1, ho::bank_seed(run.seed(), i)});
      consistent.add(ho::is_consistent(env, c.path) && c.path.endpoint() == c.target);
    }
    csv << i << ',' << c.reached << ',' << c.walk_steps << ',' << c.correction << ',' << c.allowed_correction << ','
        << c.deficit_negative << '\n';
  }
  report["checks"] = tallies({{"certificate_path_consistent", consistent}});
  report["reached_fraction"] =
      opt.seeds ? static_cast<double>(reached.passed) / static_cast<double>(opt.seeds) : 0.0;
  report["pass"] = consistent.failed == 0;
}

void lemma_jn(Run& run, const LemmaOptions& opt, json& report) {
  const auto s = ho::Rational::parse(opt.s);
  const auto eps = ho::Rational::parse(opt.eps);
  regime_guard(s >= ho::Rational(0) && s < ho::Rational(1), "J_n needs s in [0, 1)");
  regime_guard(eps > ho::Rational(0), "J_n needs eps > 0");
  json freq = json::array();
  auto csv = run.open("lemma_jn.csv");
  csv << "n,hits,seeds,frequency\n";
  for (auto n : opt.ns) {
    const auto hits = ho::map_tasks<int>(opt.seeds, ho::Execution::Parallel, [&](std::size_t i) {
      const ho::Environment env(ho::EnvConfig{2, opt.p, static_cast<std::int32_t>(2 * n + 2),
                                              ho::bank_seed(run.seed(), i)});
      return ho::jn_indicator(env, n, s, eps) ? 1 : 0;
    });
    std::uint64_t h = 0;
    for (int x : hits) h += static_cast<std::uint64_t>(x);
    const double f = opt.seeds ? static_cast<double>(h) / static_cast<double>(opt.seeds) : 0.0;
    freq.push_back({{"n", n}, {"hits", h}, {"frequency", f}});
    csv << n << ',' << h << ',' << opt.seeds << ',' << num(f) << '\n';
  }
  report["frequencies"] = freq;
  bool decreasing = true;
  for (std::size_t i = 1; i < freq.size(); ++i)
    if (!(freq[i]["frequency"].get<double>() < freq[i - 1]["frequency"].get<double>())) decreasing = false;
  report["strictly_decreasing"] = decreasing;
  report["pass"] = true;
}

void lemma_optail(Run& run, const LemmaOptions& opt, json& report) {
  regime_guard(opt.q > 0.0 && opt.q <= 1.0, "optail needs q in (0, 1]");
  const auto v = ho::Direction::parse(opt.v);
  const auto orient = ho::parse_orientation(opt.orientation, v.dim());
  const auto eta = ho::eta_hat(opt.q, orient, v.integral(), opt.n_max, run.seed(), opt.seeds);
  {
    auto csv = run.open("lemma_optail.csv");
    csv << "n,frequency,stderr\n";
    for (std::size_t i = 0; i < eta.n.size(); ++i)
      csv << eta.n[i] << ',' << num(eta.freq[i]) << ',' << num(eta.stderr_[i]) << '\n';
  }
  const auto cone = ho::cone_hat(opt.q, orient, opt.t, ho::bank_seed(run.seed(), 2'000'001), opt.seeds);
  {
    auto csv = run.open("lemma_optail_hull.csv");
    for (int i = 0; i < v.dim(); ++i) csv << (i ? "," : "") << 'x' << i + 1;
    csv << '\n';
    for (const auto& vert : cone.vertices()) {
      for (std::size_t i = 0; i < vert.size(); ++i) csv << (i ? "," : "") << num(vert[i]);
      csv << '\n';
    }
  }
  report["eta_min"] = eta.min_freq;
  report["outside_cone"] = eta.outside_cone;
  report["cone_survivors"] = cone.survivors;
  report["pass"] = true;
}

void lemma_sitetail(Run& run, const LemmaOptions& opt, json& report) {
  const auto values = ho::map_tasks<double>(opt.seeds, ho::Execution::Parallel, [&](std::size_t i) {
    const auto labels = ho::site_labels(opt.q, ho::bank_seed(run.seed(), i), 2, opt.radius);
    const auto n = ho::n_plus(labels);
    // Not found within the box counts as beyond the box.
    return n ? static_cast<double>(*n) : static_cast<double>(opt.radius) + 1.0;
  });
  std::vector<double> grid;
  for (std::int32_t n = 0; n <= opt.radius; ++n) grid.push_back(n);
  const auto fit = ho::tail_fit(values, grid);
  std::uint64_t missing = 0;
  for (double x : values)
    if (x > opt.radius) ++missing;
  auto csv = run.open("lemma_sitetail.csv");
  write_tail(csv, fit, opt.seeds);
  report["fit"] = fit_json(fit);
  report["not_found"] = missing;
  report["pass"] = true;
}

}  // namespace

void add_lemmas(CLI::App& root, std::vector<Command>& commands) {
  auto opt = std::make_shared<LemmaOptions>();
  auto* app = root.add_subcommand("lemmas", "Run a structural lemma suite and write a pass/fail report");
  app->add_option("which", opt->which, "dual | western | detour | walker | jn | optail | sitetail")
      ->required()
      ->check(CLI::IsMember({"dual", "western", "detour", "walker", "jn", "optail", "sitetail"}));
  app->add_option("--p", opt->p, "Half-site probability")->check(CLI::Range(0.0, 1.0));
  app->add_option("--seeds", opt->seeds, "Number of samples");
  app->add_option("--length", opt->length, "Path length (western)");
  app->add_option("--radius", opt->radius, "Box radius (detour, sitetail)");
  app->add_option("--q", opt->q, "Occupation probability (optail, sitetail)")->check(CLI::Range(0.0, 1.0));
  app->add_option("--orientation", opt->orientation, "Signed basis such as \"+1,+2\" (optail)");
  app->add_option("--v", opt->v, "Target direction (optail)");
  app->add_option("--n-max", opt->n_max, "Largest multiple of v (optail)");
  app->add_option("--t", opt->t, "Generation for the cone estimate (optail)");
  app->add_option("--direction", opt->direction, "Unit l1 direction (walker)");
  app->add_option("--eps", opt->eps, "Rational eps (walker, jn)");
  app->add_option("--n", opt->n, "Scale n (walker)");
  app->add_option("--ns", opt->ns, "Scales n (jn)")->delimiter(',');
  app->add_option("--s", opt->s, "Rational s (jn)");
  app->add_option("--cap", opt->cap, "Dual cluster size cap");
  app->add_option("--site-threshold", opt->site_threshold, "Known site percolation threshold (detour)");

  commands.push_back({app, [opt](Run& run) {
    json ns = json::array();
    for (auto n : opt->ns) ns.push_back(n);
    run.set_config({{"lemma", opt->which}, {"p", opt->p},          {"seeds", opt->seeds},
                    {"length", opt->length}, {"radius", opt->radius}, {"q", opt->q},
                    {"orientation", opt->orientation}, {"v", opt->v}, {"n_max", opt->n_max},
                    {"t", opt->t},           {"direction", opt->direction}, {"eps", opt->eps},
                    {"n", opt->n},           {"ns", ns},               {"s", opt->s},
                    {"cap", opt->cap}});
    run.set_seeds({{"master", run.seed()}, {"count", opt->seeds}, {"derivation", "bank_seed(master, i)"}});
    json report = {{"lemma", opt->which}, {"p", opt->p}, {"seeds", opt->seeds}};
    const auto& w = opt->which;
    if (w == "optail" || w == "sitetail") report["q"] = opt->q;
    if (w == "dual") lemma_dual(run, *opt, report);
    else if (w == "western") lemma_western(run, *opt, report);
    else if (w == "detour") lemma_detour(run, *opt, report);
    else if (w == "walker") lemma_walker(run, *opt, report);
    else if (w == "jn") lemma_jn(run, *opt, report);
    else if (w == "optail") lemma_optail(run, *opt, report);
    else lemma_sitetail(run, *opt, report);
    {
      auto os = run.open("lemma_" + w + ".json");
      os << report.dump(2) << '\n';
    }
    hard_assert(report.value("pass", false), "lemma " + w + " reported hard-assertion failures");
  }});
}

}  // namespace cli
