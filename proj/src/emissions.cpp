#include "odt/emissions.hpp"

#include "odt/error.hpp"

namespace odt {

void EmissionFactors::validate() const {
  if (!(ghg_km_transit > 0) || !(ghg_km_private > 0) || !(e_kwh_per_km > 0) || !(i_g_per_kwh > 0)) {
    throw ArgumentError("emission factors must be > 0");
  }
  for (double l : levels) {
    if (!(l >= 0 && l <= 1)) throw ArgumentError("electrification levels must lie in [0, 1]");
  }
}

double total_ghg(double ghg_km, double total_km_per_day) { return ghg_km * total_km_per_day * 365.0; }

double ev_ghg(double i_g_per_kwh, double e_kwh_per_km, double total_km_per_day) {
  return i_g_per_kwh * e_kwh_per_km * total_km_per_day * 365.0 / 1e6;
}

double fleet_ghg_at_level(double level, const EmissionFactors& f, double total_km_per_day) {
  return (1.0 - level) * total_ghg(f.ghg_km_transit, total_km_per_day) +
         level * ev_ghg(f.i_g_per_kwh, f.e_kwh_per_km, total_km_per_day);
}

double ghg_reduction(double level, const EmissionFactors& f) {
  const double base = total_ghg(f.ghg_km_transit, 1.0);
  return 1.0 - fleet_ghg_at_level(level, f, 1.0) / base;
}

BaselineReport baseline_private(const DemandSet& demand, const Router& router,
                                const EmissionFactors& f) {
  BaselineReport out;
  double km = 0;
  for (const auto& r : demand.requests) {
    const double d = router.distance_m(r.origin, r.destination);
    if (d == kUnreachable) {
      ++out.excluded;
      continue;
    }
    km += d / 1000.0;
    ++out.trips;
  }
  auto& rep = out.report;
  rep.total_km_day = km;
  rep.ghg_t_yr = total_ghg(f.ghg_km_private, km);
  if (out.trips > 0) rep.vkm_per_pax = km / static_cast<double>(out.trips);
  if (km > 0) rep.ghg_g_per_pax_km = rep.ghg_t_yr * 1e6 / (km * 365.0);
  return out;
}

EmissionsReport per_passenger_metrics(const SimulationResult& result, const EmissionFactors& f,
                                      double level) {
  EmissionsReport rep;
  rep.elec_level = level;
  rep.total_km_day = result.total.total_km;
  rep.ghg_t_yr = fleet_ghg_at_level(level, f, rep.total_km_day);
  if (result.total.served > 0) {
    rep.vkm_per_pax = rep.total_km_day / static_cast<double>(result.total.served);
  }
  if (result.total.passenger_km > 0) {
    rep.ghg_g_per_pax_km = rep.ghg_t_yr * 1e6 / (result.total.passenger_km * 365.0);
  }
  return rep;
}

}  // namespace odt
