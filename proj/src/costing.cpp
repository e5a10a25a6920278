#include "odt/costing.hpp"

#include <cmath>
#include <cstdlib>

#include "odt/error.hpp"

namespace odt {

void CostParameters::validate() const {
  const double all[] = {fixed_fees_exclusive, fixed_fees_shared, beta_time, beta_length, fare,
                        vehicle_price, oc_hour, oc_km, wage, other_costs, vot};
  for (double v : all) {
    if (!(v >= 0)) throw ArgumentError("cost parameters must be >= 0");
  }
  for (double s : surge_pct) {
    if (!(s >= 0)) throw ArgumentError("surge increments must be >= 0");
  }
}

Cents to_cents(double cad) { return static_cast<Cents>(std::llround(cad * 100.0)); }
double to_cad(Cents c) { return static_cast<double>(c) / 100.0; }

std::string format_cents(Cents c) {
  const Cents a = c < 0 ? -c : c;
  std::string frac = std::to_string(a % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (c < 0 ? "-" : "") + std::to_string(a / 100) + "." + frac;
}

Cents capital_cost(int n_vehicles, double vehicle_price) {
  if (n_vehicles < 0 || !(vehicle_price >= 0)) throw ArgumentError("capital cost inputs must be >= 0");
  return to_cents(n_vehicles * vehicle_price);
}

double crowdsourced_trip_cost(const CrowdsourcedStats& s, const CostParameters& p, bool shared) {
  const double fees = shared ? p.fixed_fees_shared : p.fixed_fees_exclusive;
  return fees + p.beta_time * s.ivtt_min + p.beta_length * s.trip_km - p.fare;
}

Cents noc_crowdsourced(const CrowdsourcedStats& s, const CostParameters& p, bool shared,
                       double surge_pct) {
  if (s.served_per_day <= 0) return 0;
  const double base = crowdsourced_trip_cost(s, p, shared) * s.served_per_day * 365.0;
  return to_cents(base * (1.0 + surge_pct / 100.0));
}

Cents noc_dedicated(const DedicatedStats& s, const CostParameters& p) {
  return to_cents((p.oc_hour * s.avg_vehicles * s.operating_hours - p.fare * s.served_per_day) *
                      365.0 +
                  p.other_costs);
}

Cents noc_frt(const FrtStats& s, const CostParameters& p) {
  const double n = s.vehicles;
  return to_cents((p.oc_km * n * s.vkm + n * s.operating_hours * p.wage -
                   p.fare * s.served_per_day) *
                      365.0 +
                  p.other_costs);
}

Cents net_annual_cost(Cents cc, Cents noc) { return cc + noc; }

CostBreakdown system_cost(const SimulationResult& result, SystemType system,
                          const CostParameters& p, double surge_pct,
                          bool hybrid_crowdsourced_shared) {
  CostBreakdown out;
  for (const auto& [tag, s] : result.services) {
    const auto sd = static_cast<double>(s.served);
    switch (tag) {
      case ServiceTag::crowdsourced: {
        const bool shared = system == SystemType::crowdsourced_shared ||
                            (system != SystemType::crowdsourced_exclusive && hybrid_crowdsourced_shared);
        const CrowdsourcedStats cs{s.avg_ivtt_min, s.avg_trip_km, sd};
        out.noc += noc_crowdsourced(cs, p, shared, surge_pct);
        if (sd > 0 && crowdsourced_trip_cost(cs, p, shared) < 0) out.surplus = true;
        break;
      }
      case ServiceTag::dedicated:
        out.cc += capital_cost(s.fleet_size, p.vehicle_price);
        out.noc += noc_dedicated({s.avg_vehicles, s.operating_hours, sd}, p);
        break;
      case ServiceTag::frt: {
        const double vkm = p.frt_vkm_fleet_total || s.fleet_size == 0
                               ? s.total_km
                               : s.total_km / s.fleet_size;
        out.cc += capital_cost(s.fleet_size, p.vehicle_price);
        out.noc += noc_frt({s.fleet_size, vkm, s.operating_hours, sd}, p);
        break;
      }
    }
  }
  out.nac = net_annual_cost(out.cc, out.noc);
  if (result.total.served > 0) {
    out.per_trip = to_cad(out.nac) / (static_cast<double>(result.total.served) * 365.0);
  }
  return out;
}

}  // namespace odt
