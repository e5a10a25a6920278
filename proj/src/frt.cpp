#include "odt/frt.hpp"

#include <cmath>

#include "odt/error.hpp"

namespace odt {

double FrtTimetable::vkm_per_vehicle() const {
  if (vehicles <= 0) return 0;
  return 2.0 * departures_per_direction * length_m / 1000.0 / vehicles;
}

double FrtTimetable::time_at(bool forward, int departure, int stop) const {
  const auto s = static_cast<std::size_t>(stop);
  return window_start_s + departure * headway_s +
         (forward ? forward_offset_s[s] : backward_offset_s[s]);
}

FrtTimetable build_timetable(const RouteSpec& route, const Router& router, int vehicles) {
  if (route.stops.size() < 2) throw ArgumentError("a fixed route needs at least 2 stops");
  if (vehicles <= 0) throw ArgumentError("a fixed route needs at least one vehicle");
  if (!(route.cruise_speed_mps > 0)) throw ArgumentError("cruise speed must be > 0");
  if (!(route.window_end_s > route.window_start_s)) throw ArgumentError("empty service window");
  if (route.dwell_s < 0) throw ArgumentError("dwell must be >= 0");

  FrtTimetable tt;
  tt.vehicles = vehicles;
  tt.window_start_s = route.window_start_s;
  const auto k = route.stops.size();
  std::vector<double> seg(k - 1);
  tt.stop_offset_m.assign(k, 0.0);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    seg[i] = router.distance_m(route.stops[i], route.stops[i + 1]);
    if (seg[i] == kUnreachable || seg[i] <= 0) {
      throw ArgumentError("route stop " + std::to_string(route.stops[i + 1]) +
                          " is not reachable from " + std::to_string(route.stops[i]));
    }
    tt.stop_offset_m[i + 1] = tt.stop_offset_m[i] + seg[i];
  }

  // Dwell applies at intermediate stops only; termini get a layover dwell.
  tt.forward_offset_s.assign(k, 0.0);
  for (std::size_t i = 1; i < k; ++i) {
    tt.forward_offset_s[i] = tt.forward_offset_s[i - 1] + seg[i - 1] / route.cruise_speed_mps +
                             (i - 1 >= 1 ? route.dwell_s : 0.0);
  }
  tt.backward_offset_s.assign(k, 0.0);
  for (std::size_t i = k - 1; i-- > 0;) {
    tt.backward_offset_s[i] = tt.backward_offset_s[i + 1] + seg[i] / route.cruise_speed_mps +
                              (i + 1 < k - 1 ? route.dwell_s : 0.0);
  }

  tt.length_m = tt.stop_offset_m.back();
  tt.one_way_s = tt.forward_offset_s.back();
  tt.cycle_s = 2.0 * (tt.one_way_s + route.dwell_s);
  tt.headway_s = tt.cycle_s / vehicles;
  tt.departures_per_direction =
      static_cast<int>(std::ceil((route.window_end_s - route.window_start_s) / tt.headway_s));
  return tt;
}

std::pair<int, double> nearest_stop(const Network& net, const RouteSpec& route, int node) {
  int best = -1;
  double best_d = kUnreachable;
  for (std::size_t i = 0; i < route.stops.size(); ++i) {
    const double d = net.euclidean_m(node, route.stops[i]);
    if (d < best_d) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  return {best, best_d};
}

bool in_corridor(const Network& net, const RouteSpec& route, const RideRequest& request) {
  const double reach = route.catchment_m();
  return nearest_stop(net, route, request.origin).second <= reach &&
         nearest_stop(net, route, request.destination).second <= reach;
}

std::optional<BoardingPlan> frt_board(const Network& net, const RideRequest& request,
                                      const RouteSpec& route, const FrtTimetable& timetable,
                                      int first_departure) {
  if (!route.in_window(request.time_s)) return std::nullopt;
  const auto [board, access] = nearest_stop(net, route, request.origin);
  const auto [alight, egress] = nearest_stop(net, route, request.destination);
  const double reach = route.catchment_m();
  if (board < 0 || access > reach || egress > reach || board == alight) return std::nullopt;

  BoardingPlan plan;
  plan.board_stop = board;
  plan.alight_stop = alight;
  plan.forward = board < alight;
  plan.walk_access_m = access;
  plan.walk_egress_m = egress;
  const double at_stop = request.time_s + access / route.walk_speed_mps;

  int k = std::max(0, first_departure);
  if (timetable.headway_s > 0) {
    const double first_pass = timetable.time_at(plan.forward, 0, board);
    if (at_stop > first_pass) {
      k = std::max(k, static_cast<int>(std::ceil((at_stop - first_pass) / timetable.headway_s)));
    }
  }
  // ceil() may land one short after rounding.
  while (k < timetable.departures_per_direction && timetable.time_at(plan.forward, k, board) < at_stop) ++k;
  if (k >= timetable.departures_per_direction) return std::nullopt;

  plan.departure = k;
  plan.board_time_s = timetable.time_at(plan.forward, k, board);
  plan.alight_time_s = timetable.time_at(plan.forward, k, alight);
  plan.walk_min = (access + egress) / route.walk_speed_mps / 60.0;
  plan.wait_min = (plan.board_time_s - at_stop) / 60.0;
  plan.ivtt_min = (plan.alight_time_s - plan.board_time_s) / 60.0;
  plan.ride_km = std::abs(timetable.stop_offset_m[static_cast<std::size_t>(alight)] -
                          timetable.stop_offset_m[static_cast<std::size_t>(board)]) /
                 1000.0;
  return plan;
}

const char* to_string(ServiceTag tag) {
  switch (tag) {
    case ServiceTag::crowdsourced: return "CROWDSOURCED";
    case ServiceTag::dedicated: return "DEDICATED";
    case ServiceTag::frt: return "FRT";
  }
  return "?";
}

ServiceTag hybrid_route(const Network& net, const RideRequest& request, const RouteSpec& corridor,
                        const FrtTimetable& timetable, HybridMode mode) {
  if (mode == HybridMode::frt_based) {
    return frt_board(net, request, corridor, timetable) ? ServiceTag::frt : ServiceTag::crowdsourced;
  }
  return corridor.in_window(request.time_s) && in_corridor(net, corridor, request)
             ? ServiceTag::dedicated
             : ServiceTag::crowdsourced;
}

}  // namespace odt
