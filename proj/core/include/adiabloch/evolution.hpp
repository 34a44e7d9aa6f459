#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "adiabloch/matcore.hpp"

namespace adiabloch {

// t = 0 followed by count log-spaced points on [t_min, t_max].
std::vector<double> log_time_grid(double t_min = 1e-2, double t_max = 1e6, int count = 400);

inline constexpr int kNonperturbative = -1;

struct DistanceCurve {
  std::vector<double> times;
  std::vector<double> distances;
  int order = kNonperturbative;  // truncation order, or kNonperturbative
  NormKind norm = NormKind::spectral;
  std::vector<std::pair<double, double>> envelope;
};

// ||expm(t exact) - expm(t approx)|| on the grid, with envelope.
DistanceCurve distance_curve(const CMatrix& exact, const CMatrix& approx, const std::vector<double>& times,
                             int order = kNonperturbative, NormKind norm = NormKind::spectral,
                             double window_decades = 1.0);

// Running maximum restarted at every window boundary; windows are
// [t0 * 10^(k w), t0 * 10^((k+1) w)) anchored at the first positive time.
std::vector<std::pair<double, double>> envelope(const std::vector<double>& times,
                                                const std::vector<double>& values, double window_decades = 1.0);

// sup_t ||expm(t a)|| over the grid.
double semigroup_sup(const CMatrix& a, const std::vector<double>& times, NormKind norm = NormKind::spectral);

// Least-squares slope of log(value) against log(t) for t in [t_lo, t_hi].
double loglog_slope(const std::vector<std::pair<double, double>>& points, double t_lo, double t_hi);

// First grid time where the curve exceeds threshold.
std::optional<double> breakaway_time(const DistanceCurve& curve, double threshold);

// Least-squares slope of log y against log x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace adiabloch
