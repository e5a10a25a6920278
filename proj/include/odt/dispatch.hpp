#pragma once

#include <optional>
#include <span>
#include <vector>

#include "odt/demand.hpp"
#include "odt/routing.hpp"

namespace odt {

inline constexpr int kVehicleSeats = 8;
/// Added-distance comparisons treat values this close (metres) as equal.
inline constexpr double kDistanceEps = 1e-6;

enum class StopAction { pickup, dropoff };

struct Stop {
  int node = 0;
  StopAction action = StopAction::pickup;
  int request_id = 0;

  friend bool operator==(const Stop&, const Stop&) = default;
};

/// A request a vehicle is responsible for, either aboard or scheduled.
struct Passenger {
  int request_id = 0;
  int origin = 0;
  int destination = 0;
  double request_time_s = 0;
  double direct_m = 0;                    // shortest origin->destination distance
  std::optional<double> boarded_odometer_m;  // set once aboard
};

/// Dispatcher view of a vehicle at decision time. `node` is the first node the
/// vehicle can divert from (its current node when idle); it reaches it at
/// `ready_time_s` with `odometer_m` on the clock.
struct FleetVehicle {
  int id = 0;
  int capacity = kVehicleSeats;
  int node = 0;
  double ready_time_s = 0;
  double odometer_m = 0;
  bool accepting = true;
  std::vector<Stop> schedule;
  std::vector<Passenger> passengers;

  bool idle() const { return schedule.empty(); }
  int aboard() const;
  const Passenger* passenger(int request_id) const;
};

/// One dispatcher decision: `vehicle_id` serves `request_id` with the new
/// stop list `schedule`.
struct Assignment {
  int request_id = 0;
  int vehicle_id = 0;
  double added_m = 0;
  std::vector<Stop> schedule;
};

/// FCFS over `queue` (ordered by request time): each request takes the idle
/// vehicle with the smallest network distance to its origin, lowest id on
/// ties. Unreachable vehicles are skipped; requests without a vehicle stay
/// unassigned.
std::vector<Assignment> greedy_assign(std::span<const FleetVehicle> idle,
                                      std::span<const RideRequest> queue, const Router& router);

/// Shared Greedy. FCFS over `queue`; a request may take an idle vehicle (as in
/// greedy_assign) or join a vehicle carrying exactly one passenger toward that
/// passenger's destination, when both riders stay within `max_detour` times
/// their direct distance. The cheapest host by added distance wins, lowest id
/// on ties.
std::vector<Assignment> shared_greedy_match(std::span<const FleetVehicle> en_route,
                                            std::span<const FleetVehicle> idle,
                                            std::span<const RideRequest> queue,
                                            double max_detour, const Router& router);

/// True when `v` may host a shared-greedy rider.
bool shared_greedy_host(const FleetVehicle& v);

struct DarpParams {
  double max_detour = 2.0;
  double max_wait_s = 1800.0;
};

/// Predicted execution of a stop list from a vehicle's divert point.
struct RoutePlan {
  bool feasible = false;
  double length_m = 0;  // from the divert node through the last stop
  std::vector<double> arrival_s;
  std::vector<double> odometer_m;
};

/// Walks `schedule` from the vehicle's divert point and checks seats, the wait
/// bound for every pending pickup and the detour bound for every rider.
/// `extra` is a passenger not yet in `v.passengers` (the candidate).
RoutePlan evaluate_schedule(const FleetVehicle& v, std::span<const Stop> schedule,
                            const Passenger* extra, const DarpParams& params,
                            const Router& router);

struct InsertionResult {
  bool accepted = false;
  int vehicle_id = -1;
  int pickup_index = -1;   // position of the pickup in the new schedule
  int dropoff_index = -1;  // position of the dropoff in the new schedule
  double added_m = 0;
  double predicted_wait_s = 0;
  double predicted_ride_m = 0;
  std::vector<Stop> schedule;
};

/// Cheapest feasible insertion of `request` into any accepting vehicle, trying
/// every (pickup, dropoff) position pair. Ties go to the lower vehicle id,
/// then the earlier pickup, then the earlier dropoff. Not accepted when no
/// position pair is feasible.
InsertionResult darp_insert(std::span<const FleetVehicle> fleet, const RideRequest& request,
                            const DarpParams& params, const Router& router);

}  // namespace odt
