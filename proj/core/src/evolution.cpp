#include "adiabloch/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adiabloch/parallel.hpp"

namespace adiabloch {

std::vector<double> log_time_grid(double t_min, double t_max, int count) {
  if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) {
    throw std::invalid_argument("log_time_grid: need 0 < t_min < t_max and count >= 2");
  }
  std::vector<double> t{0.0};
  const double a = std::log10(t_min);
  const double b = std::log10(t_max);
  for (int i = 0; i < count; ++i) t.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
  return t;
}

std::vector<std::pair<double, double>> envelope(const std::vector<double>& times,
                                                const std::vector<double>& values, double window_decades) {
  if (times.size() != values.size()) throw std::invalid_argument("envelope: size mismatch");
  std::vector<std::pair<double, double>> out;
  const auto first = std::find_if(times.begin(), times.end(), [](double t) { return t > 0.0; });
  if (first == times.end()) return out;
  const double anchor = std::log10(*first);
  long window = -1;
  double running = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) continue;
    const long w = static_cast<long>(std::floor((std::log10(times[i]) - anchor) / window_decades + 1e-12));
    if (w != window) {
      window = w;
      running = values[i];
    }
    running = std::max(running, values[i]);
    out.emplace_back(times[i], running);
  }
  return out;
}

DistanceCurve distance_curve(const CMatrix& exact, const CMatrix& approx, const std::vector<double>& times,
                             int order, NormKind norm, double window_decades) {
  DistanceCurve c;
  c.times = times;
  c.order = order;
  c.norm = norm;
  c.distances.assign(times.size(), 0.0);
  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    c.distances[i] = t == 0.0 ? 0.0 : op_norm(expm(t * exact) - expm(t * approx), norm);
  });
  c.envelope = envelope(c.times, c.distances, window_decades);
  return c;
}

double semigroup_sup(const CMatrix& a, const std::vector<double>& times, NormKind norm) {
  std::vector<double> vals(times.size(), 0.0);
  parallel_for(times.size(), [&](std::size_t i) { vals[i] = op_norm(expm(times[i] * a), norm); });
  return *std::max_element(vals.begin(), vals.end());
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double loglog_slope(const std::vector<std::pair<double, double>>& points, double t_lo, double t_hi) {
  std::vector<double> x, y;
  for (const auto& [t, v] : points) {
    if (t >= t_lo && t <= t_hi && v > 0.0) {
      x.push_back(t);
      y.push_back(v);
    }
  }
  return fit_slope(x, y);
}

std::optional<double> breakaway_time(const DistanceCurve& curve, double threshold) {
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (curve.distances[i] > threshold) return curve.times[i];
  }
  return std::nullopt;
}

}  // namespace adiabloch
