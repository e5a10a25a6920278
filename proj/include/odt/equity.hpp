#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "odt/engine.hpp"
#include "odt/network.hpp"

namespace odt {

enum class EquityMetric { usage, wait, ivtt };

const char* to_string(EquityMetric m);
inline constexpr EquityMetric kEquityMetrics[] = {EquityMetric::usage, EquityMetric::wait,
                                                  EquityMetric::ivtt};

/// One zone's outcome and the size of the analysed group living there.
/// Extensive outcomes (trip counts) are zone totals; intensive ones (mean
/// times) already are per resident and count `weight` times.
struct ZonalOutcome {
  int zone_id = 0;
  double outcome = 0;
  double weight = 0;
  bool intensive = false;
  double attribute_value = 0;  // used only by concentration ordering

  double total() const { return intensive ? outcome * weight : outcome; }
  double per_capita() const;
};

struct ZonalReport {
  std::vector<ZonalOutcome> outcomes;
  std::size_t unzoned_trips = 0;   // origin outside every zone
  std::size_t excluded_zones = 0;  // time metrics with no served trip
};

/// Group weight of a zone: attribute share x population; for pop_density the
/// zone's land area (population / density).
double group_weight(const Zone& zone, const std::string& attribute);

/// Served trips per origin zone (usage) or their mean wait / in-vehicle time.
/// Throws ArgumentError when a zone lacks `attribute`.
ZonalReport zonal_outcomes(std::span<const TripRecord> trips, std::span<const Zone> zones,
                           EquityMetric metric, const std::string& attribute);

struct LorenzCurve {
  std::vector<double> population_share;  // starts at 0, ends at 1
  std::vector<double> outcome_share;
  bool degenerate = false;     // all outcomes zero
  bool concentration = false;  // ordered by attribute value
};

/// Zones sorted ascending by per-capita outcome (or by attribute value with
/// `concentration`), shares accumulated. Throws ArgumentError when the total
/// weight is not positive.
LorenzCurve lorenz(std::span<const ZonalOutcome> outcomes, bool concentration = false);

/// 1 - 2 x trapezoidal area. 0 for a degenerate curve; clamped to [0, 1]
/// unless the curve is a concentration curve.
double gini(const LorenzCurve& curve);

struct GiniResult {
  std::string attribute;
  EquityMetric metric = EquityMetric::usage;
  double gini = 0;
  LorenzCurve curve;
  std::string warning;
};

struct EquityReport {
  std::vector<GiniResult> results;
  std::vector<std::string> warnings;
};

/// Gini per (attribute, metric). Attributes missing from the zones are
/// skipped with a warning.
EquityReport equity_report(const SimulationResult& result, std::span<const Zone> zones,
                           std::span<const std::string> attributes, bool concentration = false);

/// lorenz_<attr>_<metric>.csv body.
std::string lorenz_csv(const LorenzCurve& curve);

}  // namespace odt
