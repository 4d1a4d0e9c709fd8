#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ho {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);
double standard_error(std::span<const double> xs);

struct TailPoint {
  double n;
  double fraction;
};

enum class FitStatus { Ok, Insufficient };

// Least-squares line through (n, log fraction) over a window of the
// strictly positive tail points.
struct TailFit {
  FitStatus status = FitStatus::Insufficient;
  std::vector<TailPoint> points;  // full tail table
  double slope = 0.0;
  double intercept = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t fitted = 0;
};

// Empirical tail P(X > n) for each n in the grid.
std::vector<TailPoint> tail_table(std::span<const double> samples, std::span<const double> n_grid);

// Default window: the middle two quartiles of the n values with positive
// mass, widened to all positive points if fewer than three remain.
TailFit tail_fit_points(std::vector<TailPoint> points);
TailFit tail_fit(std::span<const double> samples, std::span<const double> n_grid);

// exp(-2 t^2 / l) for sums of l independent [0,1] variables.
double hoeffding_bound(std::uint64_t trials, double deviation);

// Threshold estimates from finite-size scans. Results go to run manifests;
// nothing downstream treats them as exact.
struct Calibration {
  std::string name;
  std::string method;
  double estimate = 0.0;  // NaN when no grid value qualifies
  std::vector<double> grid;
  std::vector<double> statistic;
};

}  // namespace ho
