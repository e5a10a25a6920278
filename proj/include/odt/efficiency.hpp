#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace odt {

/// Annual user time valued at `vot` plus the operator's net annual cost.
/// Times in minutes per trip, `sd` trips/day, `vot` CAD/h, `nac` CAD/yr.
double generalized_cost(double walk_min, double wait_min, double ivtt_min, double sd, double vot,
                        double nac);

struct GcPoint {
  int demand_level = 0;
  double density = 0;  // riders/km2/day
  double gc = 0;       // CAD/yr
  double served_fraction = 0;
  bool capacity_flag = false;  // served_fraction below threshold
};

struct GcCurve {
  std::string system;
  std::vector<GcPoint> points;  // ascending density
};

/// Sets capacity flags on every point of `curve`.
void flag_capacity(GcCurve& curve, double served_threshold = 0.8);

struct SwitchingPoint {
  std::string system_a;
  std::string system_b;
  double density = 0;
  double bracket_lo = 0;
  double bracket_hi = 0;
};

/// Densities where the curves cross, by linear interpolation between adjacent
/// grid points both curves have unflagged. A zero difference at a grid point
/// reports that density; curves equal everywhere have no crossing. Throws
/// InsufficientDataError with fewer than two comparable points.
std::vector<SwitchingPoint> switching_points(const GcCurve& a, const GcCurve& b);

struct TTestResult {
  double mean_diff = 0;
  double sd_diff = 0;
  std::size_t n = 0;
  double t = 0;
  double critical = 0;
  bool significant_95 = false;
};

/// Two-sided critical t at 95%; 1.96 beyond 30 degrees of freedom.
double t_critical_95(std::size_t df);

/// Paired test on a - b. Throws ArgumentError on length mismatch or n < 2.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);
/// Same test from the summary of the differences.
TTestResult paired_t_test(double mean_diff, double sd_diff, std::size_t n);

}  // namespace odt
