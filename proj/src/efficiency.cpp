#include "odt/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "odt/error.hpp"

namespace odt {

double generalized_cost(double walk_min, double wait_min, double ivtt_min, double sd, double vot,
                        double nac) {
  return (walk_min + wait_min + ivtt_min) / 60.0 * sd * 365.0 * vot + nac;
}

void flag_capacity(GcCurve& curve, double served_threshold) {
  for (auto& p : curve.points) p.capacity_flag = p.served_fraction < served_threshold;
}

std::vector<SwitchingPoint> switching_points(const GcCurve& a, const GcCurve& b) {
  // Shared grid keyed by demand level; a level missing or flagged in either
  // curve breaks interpolation across it.
  std::map<int, std::pair<const GcPoint*, const GcPoint*>> grid;
  for (const auto& p : a.points) grid[p.demand_level].first = &p;
  for (const auto& p : b.points) grid[p.demand_level].second = &p;

  struct Cmp {
    double x, d;
  };
  std::vector<std::optional<Cmp>> seq;
  std::size_t comparable = 0;
  for (const auto& [level, pr] : grid) {
    const auto [pa, pb] = pr;
    if (!pa || !pb || pa->capacity_flag || pb->capacity_flag) {
      seq.emplace_back();
      continue;
    }
    seq.push_back(Cmp{pa->density, pa->gc - pb->gc});
    ++comparable;
  }
  if (comparable < 2) {
    throw InsufficientDataError("switching points need two comparable grid points, got " +
                                std::to_string(comparable));
  }

  std::vector<SwitchingPoint> out;
  const bool identical = std::all_of(seq.begin(), seq.end(),
                                     [](const auto& c) { return !c || c->d == 0.0; });
  if (identical) return out;

  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!seq[i]) continue;
    const auto& c = *seq[i];
    if (c.d == 0.0) {
      out.push_back({a.system, b.system, c.x, c.x, c.x});
      continue;
    }
    if (i + 1 < seq.size() && seq[i + 1]) {
      const auto& n = *seq[i + 1];
      if ((c.d < 0 && n.d > 0) || (c.d > 0 && n.d < 0)) {
        const double x = c.x + c.d / (c.d - n.d) * (n.x - c.x);
        out.push_back({a.system, b.system, std::clamp(x, c.x, n.x), c.x, n.x});
      }
    }
  }
  return out;
}

double t_critical_95(std::size_t df) {
  static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                     2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                     2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                     2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df == 0) throw ArgumentError("t test needs at least one degree of freedom");
  if (df > 30) return 1.96;
  return table[df - 1];
}

TTestResult paired_t_test(double mean_diff, double sd_diff, std::size_t n) {
  if (n < 2) throw ArgumentError("paired t test needs n >= 2");
  if (!(sd_diff >= 0)) throw ArgumentError("standard deviation must be >= 0");
  TTestResult r;
  r.mean_diff = mean_diff;
  r.sd_diff = sd_diff;
  r.n = n;
  if (sd_diff == 0) {
    r.t = mean_diff == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean_diff);
  } else {
    r.t = mean_diff / (sd_diff / std::sqrt(static_cast<double>(n)));
  }
  r.critical = n > 30 ? 1.96 : t_critical_95(n - 1);
  r.significant_95 = std::abs(r.t) > r.critical;
  return r;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ArgumentError("paired samples differ in length: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  if (n < 2) throw ArgumentError("paired t test needs n >= 2");
  double mean = 0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = a[i] - b[i] - mean;
    ss += e * e;
  }
  return paired_t_test(mean, std::sqrt(ss / static_cast<double>(n - 1)), n);
}

}  // namespace odt
