#include "halforthant/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ho {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

std::vector<TailPoint> tail_table(std::span<const double> samples, std::span<const double> n_grid) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<TailPoint> out;
  out.reserve(n_grid.size());
  const auto total = static_cast<double>(sorted.size());
  for (double n : n_grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), n);
    out.push_back({n, total > 0 ? static_cast<double>(above) / total : 0.0});
  }
  return out;
}

TailFit tail_fit_points(std::vector<TailPoint> points) {
  TailFit fit;
  fit.points = std::move(points);
  std::vector<TailPoint> positive;
  for (const auto& pt : fit.points)
    if (pt.fraction > 0.0) positive.push_back(pt);
  std::sort(positive.begin(), positive.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  if (positive.size() < 3) return fit;

  const std::size_t m = positive.size();
  std::size_t lo = m / 4, hi = (3 * m) / 4;
  if (hi <= lo || hi - lo + 1 < 3 || hi >= m) {
    lo = 0;
    hi = m - 1;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto k = static_cast<double>(hi - lo + 1);
  for (std::size_t i = lo; i <= hi; ++i) {
    const double x = positive[i].n, y = std::log(positive[i].fraction);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) return fit;
  fit.slope = (k * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / k;
  fit.window_lo = positive[lo].n;
  fit.window_hi = positive[hi].n;
  fit.fitted = hi - lo + 1;
  fit.status = FitStatus::Ok;
  return fit;
}

TailFit tail_fit(std::span<const double> samples, std::span<const double> n_grid) {
  return tail_fit_points(tail_table(samples, n_grid));
}

double hoeffding_bound(std::uint64_t trials, double deviation) {
  if (trials < 1) throw std::invalid_argument("hoeffding_bound: trials must be >= 1");
  if (deviation < 0) throw std::invalid_argument("hoeffding_bound: deviation must be >= 0");
  return std::exp(-2.0 * deviation * deviation / static_cast<double>(trials));
}

}  // namespace ho
