#include "odt/equity.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "odt/csv.hpp"
#include "odt/error.hpp"

namespace odt {

const char* to_string(EquityMetric m) {
  switch (m) {
    case EquityMetric::usage: return "usage";
    case EquityMetric::wait: return "wait";
    case EquityMetric::ivtt: return "ivtt";
  }
  return "?";
}

double ZonalOutcome::per_capita() const {
  if (intensive) return outcome;
  if (weight > 0) return outcome / weight;
  return outcome > 0 ? std::numeric_limits<double>::infinity() : 0.0;
}

double group_weight(const Zone& zone, const std::string& attribute) {
  const auto it = zone.attributes.find(attribute);
  if (it == zone.attributes.end()) {
    throw ArgumentError("zone " + std::to_string(zone.zone_id) + " has no attribute " + attribute);
  }
  if (attribute == "pop_density") return it->second > 0 ? zone.population / it->second : 0.0;
  return std::max(0.0, it->second * zone.population);
}

ZonalReport zonal_outcomes(std::span<const TripRecord> trips, std::span<const Zone> zones,
                           EquityMetric metric, const std::string& attribute) {
  ZonalReport rep;
  std::map<int, std::pair<double, std::size_t>> acc;  // zone -> (sum, count)
  for (const auto& t : trips) {
    if (!t.served) continue;
    if (!t.origin_zone) {
      ++rep.unzoned_trips;
      continue;
    }
    auto& [sum, n] = acc[*t.origin_zone];
    ++n;
    if (metric == EquityMetric::wait) sum += t.wait_min;
    if (metric == EquityMetric::ivtt) sum += t.in_vehicle_min;
  }
  for (const auto& z : zones) {
    ZonalOutcome o;
    o.zone_id = z.zone_id;
    o.weight = group_weight(z, attribute);
    o.attribute_value = z.attributes.at(attribute);
    const auto it = acc.find(z.zone_id);
    const std::size_t n = it == acc.end() ? 0 : it->second.second;
    if (metric == EquityMetric::usage) {
      o.outcome = static_cast<double>(n);
    } else {
      if (n == 0) {
        ++rep.excluded_zones;
        continue;
      }
      o.intensive = true;
      o.outcome = it->second.first / static_cast<double>(n);
    }
    rep.outcomes.push_back(o);
  }
  return rep;
}

LorenzCurve lorenz(std::span<const ZonalOutcome> outcomes, bool concentration) {
  LorenzCurve c;
  c.concentration = concentration;
  double wsum = 0, osum = 0;
  for (const auto& o : outcomes) {
    if (!(o.weight >= 0) || !(o.outcome >= 0)) throw ArgumentError("outcomes and weights must be >= 0");
    wsum += o.weight;
    osum += o.total();
  }
  if (!(wsum > 0)) throw ArgumentError("Lorenz curve needs a positive total weight");

  std::vector<std::size_t> order(outcomes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (concentration) return outcomes[a].attribute_value < outcomes[b].attribute_value;
    return outcomes[a].per_capita() < outcomes[b].per_capita();
  });

  c.degenerate = !(osum > 0);
  c.population_share.push_back(0.0);
  c.outcome_share.push_back(0.0);
  double w = 0, y = 0;
  for (auto i : order) {
    w += outcomes[i].weight;
    y += outcomes[i].total();
    c.population_share.push_back(w / wsum);
    c.outcome_share.push_back(c.degenerate ? 0.0 : y / osum);
  }
  c.population_share.back() = 1.0;
  if (!c.degenerate) c.outcome_share.back() = 1.0;
  return c;
}

double gini(const LorenzCurve& curve) {
  if (curve.degenerate) return 0.0;
  double area = 0;
  for (std::size_t i = 1; i < curve.population_share.size(); ++i) {
    area += (curve.population_share[i] - curve.population_share[i - 1]) *
            (curve.outcome_share[i] + curve.outcome_share[i - 1]) / 2.0;
  }
  const double g = 1.0 - 2.0 * area;
  return curve.concentration ? g : std::clamp(g, 0.0, 1.0);
}

EquityReport equity_report(const SimulationResult& result, std::span<const Zone> zones,
                           std::span<const std::string> attributes, bool concentration) {
  EquityReport rep;
  for (const auto& attr : attributes) {
    const bool present = !zones.empty() && std::all_of(zones.begin(), zones.end(), [&](const Zone& z) {
      return z.attributes.contains(attr);
    });
    if (!present) {
      rep.warnings.push_back("attribute " + attr + " missing from zones; skipped");
      continue;
    }
    for (auto metric : kEquityMetrics) {
      GiniResult g;
      g.attribute = attr;
      g.metric = metric;
      const auto z = zonal_outcomes(result.trips, zones, metric, attr);
      double wsum = 0;
      for (const auto& o : z.outcomes) wsum += o.weight;
      if (!(wsum > 0)) {
        g.curve.degenerate = true;
        g.curve.population_share = {0.0, 1.0};
        g.curve.outcome_share = {0.0, 0.0};
        g.warning = "no weighted zones";
      } else {
        g.curve = lorenz(z.outcomes, concentration);
        if (g.curve.degenerate) g.warning = "all outcomes zero";
      }
      g.gini = gini(g.curve);
      if (!g.warning.empty()) {
        rep.warnings.push_back(attr + "/" + to_string(metric) + ": " + g.warning);
      }
      rep.results.push_back(std::move(g));
    }
  }
  return rep;
}

std::string lorenz_csv(const LorenzCurve& curve) {
  std::string s = "population_share,outcome_share\n";
  for (std::size_t i = 0; i < curve.population_share.size(); ++i) {
    s += csv::exact(curve.population_share[i]) + "," + csv::exact(curve.outcome_share[i]) + "\n";
  }
  return s;
}

}  // namespace odt
