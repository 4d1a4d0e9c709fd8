#include <memory>
#include <ostream>
#include <string>

#include "commands.hpp"
#include "halforthant/chemdist.hpp"
#include "halforthant/errors.hpp"

namespace cli {
namespace {

struct LevelsetOptions {
  double p = 0.5;
  int dim = 2;
  std::uint32_t n = 1000;
  bool heatmap = false;
  bool dump = false;
  double max_mem_gib = 3.0;
};

// Pixel (row, col) shows x = (col - n, n - row): north is up.
ho::Point pixel_point(std::uint32_t n, std::uint32_t row, std::uint32_t col) {
  return ho::Point{static_cast<std::int32_t>(col) - static_cast<std::int32_t>(n),
                   static_cast<std::int32_t>(n) - static_cast<std::int32_t>(row)};
}

enum Shade : std::uint8_t { kWhite = 0, kGray = 1, kRed = 2 };

Shade shade(const ho::DistanceField& f, const ho::Point& x) {
  const auto v = f.value(x);
  if (!v) return kWhite;
  return *v == f.horizon() ? kRed : kGray;
}

void write_levelset_image(std::ostream& img, std::ostream& side, const ho::DistanceField& f) {
  const std::uint32_t n = f.horizon();
  const std::uint32_t w = 2 * n + 1;
  img << "P6\n" << w << ' ' << w << "\n255\n";
  side << "row,col_begin,col_end,class\n";
  static const char* names[] = {"unreached", "inside", "level"};
  static const unsigned char rgb[3][3] = {{255, 255, 255}, {200, 200, 200}, {220, 30, 30}};
  std::string line(3 * static_cast<std::size_t>(w), '\0');
  for (std::uint32_t r = 0; r < w; ++r) {
    std::uint32_t run_start = 0;
    Shade run = shade(f, pixel_point(n, r, 0));
    for (std::uint32_t c = 0; c <= w; ++c) {
      const Shade s = c < w ? shade(f, pixel_point(n, r, c)) : kWhite;
      if (c < w)
        for (int k = 0; k < 3; ++k) line[3 * c + static_cast<std::size_t>(k)] = static_cast<char>(rgb[s][k]);
      if (c == w || s != run) {
        if (run != kWhite) side << r << ',' << run_start << ',' << c - 1 << ',' << names[run] << '\n';
        run = s;
        run_start = c;
      }
    }
    img.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

// Gray level 254 T / n for reached sites, 255 for unreached ones.
void write_heatmap(std::ostream& img, std::ostream& side, const ho::DistanceField& f) {
  const std::uint32_t n = f.horizon();
  const std::uint32_t w = 2 * n + 1;
  img << "P5\n" << w << ' ' << w << "\n255\n";
  side << "# one line per image row, north first; entry = chemical distance, empty if unreached\n";
  std::string line(w, '\0');
  for (std::uint32_t r = 0; r < w; ++r) {
    for (std::uint32_t c = 0; c < w; ++c) {
      const auto v = f.value(pixel_point(n, r, c));
      if (c) side << ',';
      if (v) {
        side << *v;
        line[c] = static_cast<char>(n ? (254u * *v) / n : 0u);
      } else {
        line[c] = static_cast<char>(255);
      }
    }
    side << '\n';
    img.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

}  // namespace

void add_levelset(CLI::App& root, std::vector<Command>& commands) {
  auto opt = std::make_shared<LevelsetOptions>();
  auto* app = root.add_subcommand("levelset", "Chemical distances from the origin, the level set at distance n and images");
  app->add_option("--p", opt->p, "Half-site probability")->check(CLI::Range(0.0, 1.0));
  app->add_option("--dim", opt->dim, "Dimension")->check(CLI::Range(2, ho::kMaxDim));
  app->add_option("--n", opt->n, "Level / BFS horizon")->check(CLI::Range(0u, ho::kMaxHorizon));
  app->add_flag("--heatmap", opt->heatmap, "Also write a PGM distance heat map (d = 2)");
  app->add_flag("--dump", opt->dump, "Also write the binary distance field");
  app->add_option("--max-mem", opt->max_mem_gib, "Memory limit in GiB for the field");

  commands.push_back({app, [opt](Run& run) {
    const auto n = opt->n;
    std::uint64_t cells = 1;
    for (int i = 0; i < opt->dim; ++i) {
      cells *= 2ull * n + 1;
      if (cells > (1ull << 40)) break;
    }
    memory_guard(field_bytes(cells), static_cast<std::uint64_t>(opt->max_mem_gib * (1ull << 30)), "levelset");

    run.set_config({{"p", opt->p}, {"dim", opt->dim}, {"n", n}, {"heatmap", opt->heatmap}, {"dump", opt->dump}});
    run.set_seeds({{"environment", run.seed()}});
    const ho::Environment env(ho::EnvConfig{opt->dim, opt->p, static_cast<std::int32_t>(std::max<std::uint32_t>(n, 1)),
                                            run.seed()});
    const auto field = ho::bfs_distances(env, ho::Point::origin(opt->dim), n, ho::Execution::Parallel);
    const std::string stem = "levelset_n" + std::to_string(n);
    {
      auto os = run.open(stem + ".csv");
      ho::write_level_set_csv(os, opt->dim, ho::level_set(field, n), n);
    }
    if (opt->dim == 2) {
      auto img = run.open(stem + ".ppm");
      auto side = run.open(stem + ".ppm.csv");
      write_levelset_image(img, side, field);
      if (opt->heatmap) {
        auto himg = run.open("heat_n" + std::to_string(n) + ".pgm");
        auto hside = run.open("heat_n" + std::to_string(n) + ".pgm.csv");
        write_heatmap(himg, hside, field);
      }
    }
    if (opt->dump) {
      auto os = run.open("field_n" + std::to_string(n) + ".hocd");
      ho::write_field_dump(os, field);
    }
  }});
}

}  // namespace cli
