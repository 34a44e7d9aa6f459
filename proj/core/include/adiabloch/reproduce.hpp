#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adiabloch/evolution.hpp"
#include "adiabloch/liouville.hpp"

namespace adiabloch {

// Where an expected value comes from: a published closed form or number, a
// value derived by an independent computation, or an exact identity.
enum class Provenance { published, derived, identity };

std::string_view to_string(Provenance p);

enum class Comparison { within, at_most, at_least };

struct ReportItem {
  std::string name;
  double expected = 0.0;
  double computed = 0.0;
  Provenance provenance = Provenance::derived;
  double tol = 0.0;
  Comparison comparison = Comparison::within;
  bool relative = false;
  double deviation = 0.0;
  bool pass = false;
};

struct ReproductionReport {
  std::string case_id;
  std::vector<ReportItem> items;
  double seconds = 0.0;

  // |computed - expected| <= tol (relative: divided by |expected|).
  void check(std::string name, double expected, double computed, double tol, Provenance prov,
             bool relative = false);
  // computed <= bound (+ tol) or computed >= bound (- tol).
  void check_at_most(std::string name, double bound, double computed, Provenance prov, double tol = 0.0);
  void check_at_least(std::string name, double bound, double computed, Provenance prov, double tol = 0.0);
  void check_true(std::string name, bool value, Provenance prov);

  bool pass() const;
  std::vector<const ReportItem*> failures() const;
};

const std::vector<std::string>& reproduction_cases();

// Throws std::invalid_argument for an unknown case id.
ReproductionReport reproduce(std::string_view case_id);

// Parameters of the long-time comparison: delta = g1 = g2 = 1,
// kappa = 0.001, kappa0 = 1, omega = 1.
LindbladModel long_time_model();

struct ScalingOptions {
  std::vector<double> gammas{10.0, 20.0, 40.0};
  std::vector<int> orders{0, 1, 2, 3};
  double threshold_factor = 3.0;
  double t_min = 1e-2;
  double t_max = 1e6;
  int points = 400;
  double window_decades = 1.0;
  double tail_lo = 1e4;  // window of the no-upward-trend test
};

struct OrderScaling {
  int order = 0;
  std::vector<std::optional<double>> breakaway;  // per gamma
  std::optional<double> slope;                   // from the reached points, if two or more
  bool lower_bound_only = false;                 // some gamma never broke away
};

struct ScalingReport {
  std::vector<double> gammas;
  std::vector<double> plateaus;    // sup over the grid of the nonperturbative distance, per gamma
  std::vector<double> tail_slopes;  // log-log slope of its envelope over [tail_lo, t_max], per gamma
  std::vector<bool> infinite_breakaway;  // nonperturbative curve crossed the threshold, per gamma
  double reference_plateau = 0.0;  // plateau at the smallest gamma
  double threshold = 0.0;          // threshold_factor * reference_plateau
  std::vector<OrderScaling> orders;
};

ScalingReport scaling_check(const LindbladModel& model, const ScalingOptions& opts = {});

}  // namespace adiabloch
