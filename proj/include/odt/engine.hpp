#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "odt/demand.hpp"
#include "odt/dispatch.hpp"
#include "odt/frt.hpp"
#include "odt/routing.hpp"

namespace odt {

enum class SystemType {
  crowdsourced_exclusive,
  crowdsourced_shared,
  dedicated_darp,
  frt,
  hybrid_frt,
  hybrid_odt,
};

const char* to_string(SystemType s);
std::optional<SystemType> parse_system_type(const std::string& s);

/// Which services a system runs.
bool has_crowdsourced(SystemType s);
bool has_dedicated(SystemType s);
bool has_frt(SystemType s);

struct ScenarioPolicy {
  SystemType system = SystemType::crowdsourced_exclusive;
  double max_detour = 2.0;
  double max_wait_s = 1800.0;
  double batch_s = 30.0;
  int capacity = kVehicleSeats;
  /// Crowdsourced component of hybrids pools riders (Shared Greedy) when set.
  bool hybrid_crowdsourced_shared = false;
  std::optional<RouteSpec> route;  // frt and hybrid systems
  int demand_level_pct = 100;      // picks the fixed-route vehicle count
};

/// Hourly vehicle schedules per on-demand service. FRT vehicle counts come
/// from RouteSpec.
struct SupplyPlan {
  std::optional<SupplySchedule> crowdsourced;
  std::optional<SupplySchedule> dedicated;
};

struct TripRecord {
  int request_id = 0;
  ServiceTag mode = ServiceTag::crowdsourced;
  bool served = false;
  double request_time_s = 0;
  double walk_min = 0;
  double wait_min = 0;  // request -> pickup; accrued wait when unserved at the horizon
  double in_vehicle_min = 0;
  double length_km = 0;  // on-board distance
  double direct_km = 0;
  std::optional<double> pickup_time_s;
  std::optional<double> dropoff_time_s;
  std::string reject_reason;  // "", "no_feasible_insertion", "waiting_at_horizon", ...
  std::optional<int> origin_zone;
  std::optional<int> dest_zone;
  int vehicle_id = -1;
};

struct FleetRecord {
  int vehicle_id = 0;
  ServiceTag service = ServiceTag::crowdsourced;
  double service_start_s = 0;
  double service_end_s = 0;  // includes overtime spent finishing riders
  double km = 0;
  double passenger_seconds = 0;

  double service_hours() const { return (service_end_s - service_start_s) / 3600.0; }
  double avg_occupancy() const {
    const double span = service_end_s - service_start_s;
    return span > 0 ? passenger_seconds / span : 0.0;
  }
};

enum class EventKind {
  shift_start,
  shift_end,
  vehicle_arrives,
  pickup,
  dropoff,
  request_arrival,
  batch_dispatch,
};

const char* to_string(EventKind k);

struct LogEvent {
  double time_s = 0;
  EventKind kind = EventKind::request_arrival;
  int vehicle_id = -1;
  int request_id = -1;
};

/// Aggregates over served trips of one service (or of the whole system).
struct ServiceSummary {
  std::size_t requests = 0;
  std::size_t served = 0;  // SD, trips/day
  std::size_t rejected = 0;
  std::size_t waiting_at_horizon = 0;
  double avg_walk_min = 0;  // WK_T
  double avg_wait_min = 0;  // WT_T
  double avg_ivtt_min = 0;  // IVTT
  double avg_trip_km = 0;   // TL
  double passenger_km = 0;  // sum of on-board trip lengths
  double total_km = 0;      // Total_km, fleet km/day
  double avg_vehicles = 0;  // Avg_Vehicles over operating hours
  double operating_hours = 0;  // OH
  double vehicle_hours = 0;
  double avg_occupancy = 0;
  int fleet_size = 0;  // N: peak vehicles in service
};

struct SimulationResult {
  std::vector<TripRecord> trips;
  std::vector<FleetRecord> fleet;
  std::vector<LogEvent> events;
  ServiceSummary total;
  std::vector<std::pair<ServiceTag, ServiceSummary>> services;

  const ServiceSummary* service(ServiceTag tag) const;
};

/// Averages over served trips, fleet km, occupancy. `operating_hours` and
/// `fleet_size` are the schedule-derived OH and N.
ServiceSummary summarize(const std::vector<TripRecord>& trips,
                         const std::vector<FleetRecord>& fleet, double operating_hours,
                         int fleet_size);

/// A dedicated-fleet decision as the dispatcher saw it. Used to audit
/// rejections after the fact.
struct DarpDecision {
  double time_s = 0;
  RideRequest request;
  std::vector<FleetVehicle> fleet;
  DarpParams params;
  InsertionResult result;
};

struct RunHooks {
  std::function<void(const DarpDecision&)> on_darp_decision;
};

/// Simulates one 24 h day. Deterministic for fixed inputs and seed; the event
/// queue drains, so vehicles finish their riders past midnight when needed.
SimulationResult run_scenario(const Router& router, const DemandSet& demand,
                              const SupplyPlan& supply, const ScenarioPolicy& policy,
                              std::uint64_t seed, const RunHooks* hooks = nullptr);

/// trips.csv / fleet.csv bodies with their headers.
std::string trips_csv(const SimulationResult& result);
std::string fleet_csv(const SimulationResult& result);

}  // namespace odt
