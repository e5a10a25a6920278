#include "odt/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace odt {

int FleetVehicle::aboard() const {
  int n = 0;
  for (const auto& p : passengers) n += p.boarded_odometer_m.has_value();
  return n;
}

const Passenger* FleetVehicle::passenger(int request_id) const {
  for (const auto& p : passengers) {
    if (p.request_id == request_id) return &p;
  }
  return nullptr;
}

namespace {

double schedule_length(const FleetVehicle& v, std::span<const Stop> schedule, const Router& router) {
  double len = 0;
  int at = v.node;
  for (const auto& s : schedule) {
    len += router.distance_m(at, s.node);
    at = s.node;
  }
  return len;
}

Passenger candidate(const RideRequest& r, const Router& router) {
  return {r.id, r.origin, r.destination, r.time_s, router.distance_m(r.origin, r.destination),
          std::nullopt};
}

// Strictly better under (added, vehicle id) with the shared epsilon.
bool better(double added, int vid, double best_added, int best_vid) {
  if (added < best_added - kDistanceEps) return true;
  if (added > best_added + kDistanceEps) return false;
  return vid < best_vid;
}

}  // namespace

RoutePlan evaluate_schedule(const FleetVehicle& v, std::span<const Stop> schedule,
                            const Passenger* extra, const DarpParams& params,
                            const Router& router) {
  RoutePlan plan;
  plan.arrival_s.reserve(schedule.size());
  plan.odometer_m.reserve(schedule.size());

  auto lookup = [&](int rid) -> const Passenger* {
    if (extra && extra->request_id == rid) return extra;
    return v.passenger(rid);
  };

  int load = v.aboard();
  double t = v.ready_time_s;
  double odo = v.odometer_m;
  double len = 0;
  int at = v.node;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const auto& s = schedule[k];
    const double d = router.distance_m(at, s.node);
    if (d == kUnreachable) return plan;
    t = t + router.time_s(at, s.node);
    odo = odo + d;
    len += d;
    at = s.node;
    plan.arrival_s.push_back(t);
    plan.odometer_m.push_back(odo);

    const Passenger* p = lookup(s.request_id);
    if (!p) return plan;
    if (s.action == StopAction::pickup) {
      if (++load > v.capacity) return plan;
      if (t - p->request_time_s > params.max_wait_s) return plan;
    } else {
      --load;
      double boarded = 0;
      if (p->boarded_odometer_m) {
        boarded = *p->boarded_odometer_m;
      } else {
        std::size_t pk = k;
        while (pk-- > 0) {
          if (schedule[pk].request_id == s.request_id && schedule[pk].action == StopAction::pickup) break;
        }
        if (pk >= k) return plan;  // dropoff before pickup
        boarded = plan.odometer_m[pk];
      }
      if (odo - boarded > params.max_detour * p->direct_m) return plan;
    }
  }
  plan.length_m = len;
  plan.feasible = true;
  return plan;
}

std::vector<Assignment> greedy_assign(std::span<const FleetVehicle> idle,
                                      std::span<const RideRequest> queue, const Router& router) {
  std::vector<Assignment> out;
  std::vector<bool> taken(idle.size(), false);
  for (const auto& r : queue) {
    std::size_t best = idle.size();
    double best_d = kUnreachable;
    for (std::size_t i = 0; i < idle.size(); ++i) {
      if (taken[i] || !idle[i].accepting) continue;
      const double d = router.distance_m(idle[i].node, r.origin);
      if (d == kUnreachable) continue;
      if (best == idle.size() || better(d, idle[i].id, best_d, idle[best].id)) {
        best = i;
        best_d = d;
      }
    }
    if (best == idle.size()) continue;
    const double direct = router.distance_m(r.origin, r.destination);
    if (direct == kUnreachable) continue;
    taken[best] = true;
    out.push_back({r.id, idle[best].id, best_d + direct,
                   {{r.origin, StopAction::pickup, r.id}, {r.destination, StopAction::dropoff, r.id}}});
  }
  return out;
}

bool shared_greedy_host(const FleetVehicle& v) {
  return v.accepting && v.passengers.size() == 1 && v.passengers[0].boarded_odometer_m &&
         v.schedule.size() == 1 && v.schedule[0].action == StopAction::dropoff;
}

std::vector<Assignment> shared_greedy_match(std::span<const FleetVehicle> en_route,
                                            std::span<const FleetVehicle> idle,
                                            std::span<const RideRequest> queue,
                                            double max_detour, const Router& router) {
  const DarpParams detour_only{max_detour, std::numeric_limits<double>::infinity()};
  std::vector<Assignment> out;
  std::vector<bool> host_used(en_route.size(), false), idle_used(idle.size(), false);

  for (const auto& r : queue) {
    const double direct = router.distance_m(r.origin, r.destination);
    if (direct == kUnreachable) continue;
    const Passenger rider = candidate(r, router);

    bool found = false;
    Assignment best;
    bool best_is_host = false;
    std::size_t best_index = 0;
    auto offer = [&](double added, int vid, std::vector<Stop> sched, bool is_host, std::size_t idx) {
      if (!found || better(added, vid, best.added_m, best.vehicle_id)) {
        found = true;
        best = {r.id, vid, added, std::move(sched)};
        best_is_host = is_host;
        best_index = idx;
      }
    };

    for (std::size_t i = 0; i < idle.size(); ++i) {
      if (idle_used[i] || !idle[i].accepting) continue;
      const double d = router.distance_m(idle[i].node, r.origin);
      if (d == kUnreachable) continue;
      offer(d + direct, idle[i].id,
            {{r.origin, StopAction::pickup, r.id}, {r.destination, StopAction::dropoff, r.id}},
            false, i);
    }

    for (std::size_t i = 0; i < en_route.size(); ++i) {
      const auto& v = en_route[i];
      if (host_used[i] || !shared_greedy_host(v)) continue;
      const double old_len = schedule_length(v, v.schedule, router);
      const Stop pick{r.origin, StopAction::pickup, r.id};
      const Stop drop{r.destination, StopAction::dropoff, r.id};
      const Stop host_drop = v.schedule[0];
      // Host's passenger first, then the newcomer; or the reverse.
      for (auto sched : {std::vector<Stop>{pick, host_drop, drop}, std::vector<Stop>{pick, drop, host_drop}}) {
        auto plan = evaluate_schedule(v, sched, &rider, detour_only, router);
        if (!plan.feasible) continue;
        offer(plan.length_m - old_len, v.id, std::move(sched), true, i);
      }
    }

    if (!found) continue;
    (best_is_host ? host_used : idle_used)[best_index] = true;
    out.push_back(std::move(best));
  }
  return out;
}

InsertionResult darp_insert(std::span<const FleetVehicle> fleet, const RideRequest& request,
                            const DarpParams& params, const Router& router) {
  InsertionResult best;
  const Passenger rider = candidate(request, router);
  if (rider.direct_m == kUnreachable) return best;
  const Stop pick{request.origin, StopAction::pickup, request.id};
  const Stop drop{request.destination, StopAction::dropoff, request.id};

  std::vector<Stop> sched;
  for (const auto& v : fleet) {
    if (!v.accepting) continue;
    const double old_len = schedule_length(v, v.schedule, router);
    const auto m = v.schedule.size();
    for (std::size_t i = 0; i <= m; ++i) {
      for (std::size_t j = i; j <= m; ++j) {
        sched.clear();
        sched.insert(sched.end(), v.schedule.begin(), v.schedule.begin() + static_cast<long>(i));
        sched.push_back(pick);
        sched.insert(sched.end(), v.schedule.begin() + static_cast<long>(i),
                     v.schedule.begin() + static_cast<long>(j));
        sched.push_back(drop);
        sched.insert(sched.end(), v.schedule.begin() + static_cast<long>(j), v.schedule.end());

        auto plan = evaluate_schedule(v, sched, &rider, params, router);
        if (!plan.feasible) continue;
        const double added = plan.length_m - old_len;
        const int pi = static_cast<int>(i);
        const int di = static_cast<int>(j + 1);
        bool take = !best.accepted;
        if (!take) {
          if (added < best.added_m - kDistanceEps) {
            take = true;
          } else if (added <= best.added_m + kDistanceEps) {
            take = std::tie(v.id, pi, di) < std::tie(best.vehicle_id, best.pickup_index, best.dropoff_index);
          }
        }
        if (!take) continue;
        best.accepted = true;
        best.vehicle_id = v.id;
        best.pickup_index = pi;
        best.dropoff_index = di;
        best.added_m = added;
        best.predicted_wait_s = plan.arrival_s[i] - request.time_s;
        best.predicted_ride_m = plan.odometer_m[j + 1] - plan.odometer_m[i];
        best.schedule = sched;
      }
    }
  }
  return best;
}

}  // namespace odt
