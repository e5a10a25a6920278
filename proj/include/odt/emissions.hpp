#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "odt/demand.hpp"
#include "odt/engine.hpp"
#include "odt/routing.hpp"

namespace odt {

/// Calibration defaults: with I = 25 g/kWh these give a 98.1% cut at full
/// electrification.
struct EmissionFactors {
  double ghg_km_transit = 0.000237;  // t/veh-km, gasoline transit vehicle
  double ghg_km_private = 0.000237;  // t/veh-km, private car
  double e_kwh_per_km = 0.18;
  double i_g_per_kwh = 25.0;
  std::vector<double> levels{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

  /// Throws ArgumentError on a non-positive factor or a level outside [0, 1].
  void validate() const;
};

/// Tonnes per year.
double total_ghg(double ghg_km, double total_km_per_day);
/// Tonnes per year from grid electricity (grams converted).
double ev_ghg(double i_g_per_kwh, double e_kwh_per_km, double total_km_per_day);
/// Gasoline/electric mix at `level` over the same distance.
double fleet_ghg_at_level(double level, const EmissionFactors& f, double total_km_per_day);
/// Fractional cut against the all-gasoline fleet.
double ghg_reduction(double level, const EmissionFactors& f);

struct EmissionsReport {
  double elec_level = 0;
  double total_km_day = 0;
  double ghg_t_yr = 0;
  std::optional<double> vkm_per_pax;       // nullopt when nothing was served
  std::optional<double> ghg_g_per_pax_km;  // nullopt when no passenger-km
};

struct BaselineReport {
  EmissionsReport report;
  std::size_t trips = 0;
  std::size_t excluded = 0;  // unroutable pairs
};

/// Every request driven alone on its direct shortest path.
BaselineReport baseline_private(const DemandSet& demand, const Router& router,
                                const EmissionFactors& f);

/// Fleet footprint of a run at one electrification level.
EmissionsReport per_passenger_metrics(const SimulationResult& result, const EmissionFactors& f,
                                      double level = 0.0);

}  // namespace odt
