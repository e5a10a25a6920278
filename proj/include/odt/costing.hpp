#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "odt/engine.hpp"

namespace odt {

/// Amounts in CAD. Defaults are the published Greater Toronto / Innisfil
/// values.
struct CostParameters {
  double fixed_fees_exclusive = 5.25;
  double fixed_fees_shared = 4.25;
  double beta_time = 0.18;    // CAD/min
  double beta_length = 0.81;  // CAD/km
  double fare = 4.0;
  double vehicle_price = 41050.0;
  double oc_hour = 83.95;  // dedicated vehicle, CAD/veh-h
  double oc_km = 0.73;     // fixed-route vehicle, CAD/veh-km
  double wage = 15.0;      // CAD/h
  double other_costs = 200000.0;  // CAD/yr
  double vot = 15.0;              // CAD/h
  std::vector<double> surge_pct{0, 20, 40, 50};
  /// Read the fixed-route VKM as fleet-total daily km instead of per vehicle.
  bool frt_vkm_fleet_total = false;

  /// Throws ArgumentError on a negative value.
  void validate() const;
};

/// Whole cents.
using Cents = std::int64_t;

Cents to_cents(double cad);
double to_cad(Cents c);

struct CostBreakdown {
  Cents cc = 0;
  Cents noc = 0;
  Cents nac = 0;
  double per_trip = 0;  // NAC per annual served trip, CAD; 0 when nothing served
  /// Fares exceed operating costs (negative per-trip operating cost).
  bool surplus = false;
};

struct CrowdsourcedStats {
  double ivtt_min = 0;
  double trip_km = 0;
  double served_per_day = 0;
};

struct DedicatedStats {
  double avg_vehicles = 0;
  double operating_hours = 0;
  double served_per_day = 0;
};

struct FrtStats {
  int vehicles = 0;
  double vkm = 0;  // per vehicle per day
  double operating_hours = 0;
  double served_per_day = 0;
};

Cents capital_cost(int n_vehicles, double vehicle_price);

/// Operating cost of one crowdsourced trip net of the fare, CAD.
double crowdsourced_trip_cost(const CrowdsourcedStats& s, const CostParameters& p, bool shared);

Cents noc_crowdsourced(const CrowdsourcedStats& s, const CostParameters& p, bool shared,
                       double surge_pct);
Cents noc_dedicated(const DedicatedStats& s, const CostParameters& p);
Cents noc_frt(const FrtStats& s, const CostParameters& p);
Cents net_annual_cost(Cents cc, Cents noc);

/// Cost of a simulated system: each service priced with its own formula over
/// its own served trips, then summed. `surge_pct` applies to the crowdsourced
/// part only.
CostBreakdown system_cost(const SimulationResult& result, SystemType system,
                          const CostParameters& p, double surge_pct,
                          bool hybrid_crowdsourced_shared = false);

/// Whether a system's cost depends on surge.
inline bool surge_applies(SystemType s) { return has_crowdsourced(s); }

/// CAD with two decimals.
std::string format_cents(Cents c);

}  // namespace odt
