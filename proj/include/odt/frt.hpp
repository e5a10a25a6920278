#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odt/demand.hpp"
#include "odt/routing.hpp"

namespace odt {

/// Fixed-route corridor. Vehicles shuttle stop 0 -> stop k-1 -> stop 0.
struct RouteSpec {
  std::vector<int> stops;  // node ids, in route order
  double cruise_speed_mps = 11.1;
  double window_start_s = 7 * 3600.0;
  double window_end_s = 21 * 3600.0;
  double catchment_min = 7.0;
  double walk_speed_mps = 5000.0 / 3600.0;
  double dwell_s = 20.0;
  int vehicles_below_threshold = 2;
  int vehicles_at_or_above = 3;
  int threshold_level_pct = 300;

  double catchment_m() const { return catchment_min * 60.0 * walk_speed_mps; }
  int vehicles_for_level(int level_pct) const {
    return level_pct < threshold_level_pct ? vehicles_below_threshold : vehicles_at_or_above;
  }
  bool in_window(double t) const { return t >= window_start_s && t < window_end_s; }
};

/// Derived schedule. Departures leave each terminus at window_start +
/// k * headway while still inside the window.
struct FrtTimetable {
  int vehicles = 0;
  double window_start_s = 0;
  std::vector<double> stop_offset_m;  // route distance from stop 0
  // Run time from the departing terminus to each stop, intermediate dwells
  // included. Indexed by stop in route order for both directions.
  std::vector<double> forward_offset_s;
  std::vector<double> backward_offset_s;
  double length_m = 0;
  double one_way_s = 0;
  double cycle_s = 0;
  double headway_s = 0;
  int departures_per_direction = 0;

  /// Vehicle-km driven per vehicle per day.
  double vkm_per_vehicle() const;
  /// Arrival time at `stop` of departure k in the given direction.
  double time_at(bool forward, int departure, int stop) const;
};

/// Throws ArgumentError for fewer than 2 stops, unknown/unreachable stops or
/// no vehicles.
FrtTimetable build_timetable(const RouteSpec& route, const Router& router, int vehicles);

struct BoardingPlan {
  int board_stop = 0;   // index into RouteSpec::stops
  int alight_stop = 0;
  bool forward = true;
  int departure = 0;
  double walk_access_m = 0;
  double walk_egress_m = 0;
  double walk_min = 0;  // both ends
  double wait_min = 0;  // at the boarding stop
  double ivtt_min = 0;
  double ride_km = 0;
  double board_time_s = 0;
  double alight_time_s = 0;
};

/// Index of the stop closest to `node` by straight line, with its distance.
std::pair<int, double> nearest_stop(const Network& net, const RouteSpec& route, int node);

/// Whether both ends of `request` lie within the corridor catchment.
bool in_corridor(const Network& net, const RouteSpec& route, const RideRequest& request);

/// Plan for riding the corridor, or nullopt when the request is outside the
/// service window, either end is beyond the walking catchment, both ends map
/// to the same stop, or no departure remains. `first_departure` lets callers
/// skip full departures.
std::optional<BoardingPlan> frt_board(const Network& net, const RideRequest& request,
                                      const RouteSpec& route, const FrtTimetable& timetable,
                                      int first_departure = 0);

enum class ServiceTag { crowdsourced, dedicated, frt };

const char* to_string(ServiceTag tag);

enum class HybridMode { frt_based, odt_based };

/// Which service of a hybrid system takes the request.
ServiceTag hybrid_route(const Network& net, const RideRequest& request, const RouteSpec& corridor,
                        const FrtTimetable& timetable, HybridMode mode);

}  // namespace odt
