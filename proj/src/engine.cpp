#include "odt/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <tuple>
#include <unordered_map>

#include "odt/csv.hpp"
#include "odt/error.hpp"

namespace odt {

const char* to_string(SystemType s) {
  switch (s) {
    case SystemType::crowdsourced_exclusive: return "crowdsourced_exclusive";
    case SystemType::crowdsourced_shared: return "crowdsourced_shared";
    case SystemType::dedicated_darp: return "dedicated_darp";
    case SystemType::frt: return "frt";
    case SystemType::hybrid_frt: return "hybrid_frt";
    case SystemType::hybrid_odt: return "hybrid_odt";
  }
  return "?";
}

std::optional<SystemType> parse_system_type(const std::string& s) {
  for (auto t : {SystemType::crowdsourced_exclusive, SystemType::crowdsourced_shared,
                 SystemType::dedicated_darp, SystemType::frt, SystemType::hybrid_frt,
                 SystemType::hybrid_odt}) {
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

bool has_crowdsourced(SystemType s) {
  return s == SystemType::crowdsourced_exclusive || s == SystemType::crowdsourced_shared ||
         s == SystemType::hybrid_frt || s == SystemType::hybrid_odt;
}
bool has_dedicated(SystemType s) {
  return s == SystemType::dedicated_darp || s == SystemType::hybrid_odt;
}
bool has_frt(SystemType s) { return s == SystemType::frt || s == SystemType::hybrid_frt; }

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::shift_start: return "shift_start";
    case EventKind::shift_end: return "shift_end";
    case EventKind::vehicle_arrives: return "vehicle_arrives";
    case EventKind::pickup: return "pickup";
    case EventKind::dropoff: return "dropoff";
    case EventKind::request_arrival: return "request_arrival";
    case EventKind::batch_dispatch: return "batch_dispatch";
  }
  return "?";
}

const ServiceSummary* SimulationResult::service(ServiceTag tag) const {
  for (const auto& [t, s] : services) {
    if (t == tag) return &s;
  }
  return nullptr;
}

ServiceSummary summarize(const std::vector<TripRecord>& trips,
                         const std::vector<FleetRecord>& fleet, double operating_hours,
                         int fleet_size) {
  ServiceSummary s;
  s.requests = trips.size();
  s.operating_hours = operating_hours;
  s.fleet_size = fleet_size;
  double walk = 0, wait = 0, ivtt = 0;
  for (const auto& t : trips) {
    if (t.served) {
      ++s.served;
      walk += t.walk_min;
      wait += t.wait_min;
      ivtt += t.in_vehicle_min;
      s.passenger_km += t.length_km;
    } else if (t.reject_reason == "waiting_at_horizon") {
      ++s.waiting_at_horizon;
    } else {
      ++s.rejected;
    }
  }
  if (s.served > 0) {
    const auto n = static_cast<double>(s.served);
    s.avg_walk_min = walk / n;
    s.avg_wait_min = wait / n;
    s.avg_ivtt_min = ivtt / n;
    s.avg_trip_km = s.passenger_km / n;
  }
  double pax_s = 0, service_s = 0;
  for (const auto& f : fleet) {
    s.total_km += f.km;
    s.vehicle_hours += f.service_hours();
    pax_s += f.passenger_seconds;
    service_s += f.service_end_s - f.service_start_s;
  }
  s.avg_vehicles = operating_hours > 0 ? s.vehicle_hours / operating_hours : 0.0;
  s.avg_occupancy = service_s > 0 ? pax_s / service_s : 0.0;
  return s;
}

namespace {

enum class DispatcherKind { greedy, shared, darp };

// Same-time ordering: supply changes, vehicle movements, new requests,
// batched dispatch, then the horizon.
int priority(EventKind k) {
  switch (k) {
    case EventKind::shift_start: return 0;
    case EventKind::vehicle_arrives: return 1;
    case EventKind::request_arrival: return 2;
    case EventKind::batch_dispatch: return 3;
    case EventKind::shift_end: return 4;
    default: return 5;
  }
}

struct Pending {
  double time_s;
  int prio;
  int entity;
  std::uint64_t seq;
  EventKind kind;
  int version = 0;  // vehicle plan version, for stale arrival events
  int fleet = 0;

  bool operator>(const Pending& o) const {
    return std::tie(time_s, prio, entity, seq) > std::tie(o.time_s, o.prio, o.entity, o.seq);
  }
};

struct SimVehicle {
  int id = 0;
  int fleet = 0;
  int capacity = kVehicleSeats;
  bool accepting = true;
  bool retire_pending = false;
  bool retired = false;
  double start_s = 0;
  double end_s = 0;

  int anchor = 0;
  double anchor_time = 0;
  double anchor_odo = 0;
  // Current leg from the anchor to the first stop; absolute times/odometers.
  std::vector<int> leg_nodes;
  std::vector<double> leg_time;
  std::vector<double> leg_odo;

  std::vector<Stop> schedule;
  std::vector<Passenger> passengers;
  int version = 0;
  double passenger_seconds = 0;
};

struct FleetState {
  ServiceTag tag = ServiceTag::crowdsourced;
  DispatcherKind kind = DispatcherKind::greedy;
  SupplySchedule supply;
  std::vector<std::size_t> vehicles;  // indices into Simulation::vehicles_
  std::vector<std::size_t> queue;     // request indices, arrival order
  bool batch_scheduled = false;
};

class Simulation {
 public:
  Simulation(const Router& router, const DemandSet& demand, const SupplyPlan& supply,
             const ScenarioPolicy& policy, std::uint64_t seed, const RunHooks* hooks)
      : router_(router), net_(router.network()), policy_(policy), rng_(seed), hooks_(hooks) {
    requests_ = demand.requests;
    std::stable_sort(requests_.begin(), requests_.end(), [](const RideRequest& a, const RideRequest& b) {
      return a.time_s != b.time_s ? a.time_s < b.time_s : a.id < b.id;
    });
    for (const auto& r : requests_) spawn_nodes_.push_back(r.origin);
    if (spawn_nodes_.empty()) {
      for (const auto& nd : net_.nodes()) spawn_nodes_.push_back(nd.id);
    }

    const auto sys = policy_.system;
    if (has_frt(sys) || sys == SystemType::hybrid_odt) {
      if (!policy_.route) throw ArgumentError(std::string(to_string(sys)) + " needs a route spec");
      frt_vehicles_ = policy_.route->vehicles_for_level(policy_.demand_level_pct);
      timetable_ = build_timetable(*policy_.route, router_, frt_vehicles_);
    }
    if (has_crowdsourced(sys)) {
      if (!supply.crowdsourced) throw ArgumentError("crowdsourced supply schedule missing");
      FleetState f;
      f.tag = ServiceTag::crowdsourced;
      const bool pooled = sys == SystemType::crowdsourced_shared ||
                          ((sys == SystemType::hybrid_frt || sys == SystemType::hybrid_odt) &&
                           policy_.hybrid_crowdsourced_shared);
      f.kind = pooled ? DispatcherKind::shared : DispatcherKind::greedy;
      f.supply = *supply.crowdsourced;
      cs_fleet_ = static_cast<int>(fleets_.size());
      fleets_.push_back(std::move(f));
    }
    if (has_dedicated(sys)) {
      if (!supply.dedicated) throw ArgumentError("dedicated supply schedule missing");
      FleetState f;
      f.tag = ServiceTag::dedicated;
      f.kind = DispatcherKind::darp;
      f.supply = *supply.dedicated;
      if (sys == SystemType::hybrid_odt) {
        // The corridor fleet runs only during the corridor's hours.
        for (int h = 0; h < 24; ++h) {
          if (h * 3600.0 + 3600.0 <= policy_.route->window_start_s ||
              h * 3600.0 >= policy_.route->window_end_s) {
            f.supply.vehicles[static_cast<std::size_t>(h)] = 0;
          }
        }
      }
      dd_fleet_ = static_cast<int>(fleets_.size());
      fleets_.push_back(std::move(f));
    }
  }

  SimulationResult run() {
    trips_.resize(requests_.size());
    for (std::size_t i = 0; i < requests_.size(); ++i) {
      const auto& r = requests_[i];
      auto& t = trips_[i];
      t.request_id = r.id;
      t.request_time_s = r.time_s;
      t.origin_zone = net_.node(r.origin).zone_id;
      t.dest_zone = net_.node(r.destination).zone_id;
      t.direct_km = router_.distance_m(r.origin, r.destination) / 1000.0;
      push({r.time_s, 0, r.id, 0, EventKind::request_arrival, static_cast<int>(i), 0});
    }
    if (!fleets_.empty()) {
      for (int h = 0; h < 24; ++h) push({h * 3600.0, 0, h, 0, EventKind::shift_start, 0, 0});
    }
    push({kHorizonS, 0, 0, 0, EventKind::shift_end, 0, 0});
    if (timetable_) start_frt_fleet();

    while (!queue_.empty()) {
      const Pending ev = queue_.top();
      queue_.pop();
      now_ = ev.time_s;
      switch (ev.kind) {
        case EventKind::shift_start: on_hour(ev.entity); break;
        case EventKind::shift_end: on_horizon(); break;
        case EventKind::vehicle_arrives: on_arrival(static_cast<std::size_t>(ev.fleet), ev.version); break;
        case EventKind::request_arrival: on_request(static_cast<std::size_t>(ev.version)); break;
        case EventKind::batch_dispatch: on_batch(ev.fleet); break;
        default: break;
      }
    }
    return finish();
  }

 private:
  void push(Pending p) {
    p.prio = priority(p.kind);
    p.seq = seq_++;
    queue_.push(p);
  }

  void log(EventKind k, int vehicle, int request) { events_.push_back({now_, k, vehicle, request}); }

  // ---- supply -------------------------------------------------------------

  void on_hour(int hour) {
    log(EventKind::shift_start, -1, -1);
    for (std::size_t f = 0; f < fleets_.size(); ++f) {
      auto& fleet = fleets_[f];
      const int target = fleet.supply.vehicles[static_cast<std::size_t>(hour)];
      std::vector<std::size_t> active;
      for (auto vi : fleet.vehicles) {
        if (vehicles_[vi].accepting) active.push_back(vi);
      }
      const int have = static_cast<int>(active.size());
      for (int k = have; k < target; ++k) spawn(static_cast<int>(f));
      if (have > target) {
        // Idle vehicles leave first, newest first.
        std::sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
          const bool ia = vehicles_[a].schedule.empty(), ib = vehicles_[b].schedule.empty();
          if (ia != ib) return ia;
          return vehicles_[a].id > vehicles_[b].id;
        });
        for (int k = 0; k < have - target; ++k) retire(active[static_cast<std::size_t>(k)]);
      }
      dispatch(static_cast<int>(f));
    }
  }

  void spawn(int fleet) {
    std::uniform_int_distribution<std::size_t> pick(0, spawn_nodes_.size() - 1);
    SimVehicle v;
    v.id = next_vehicle_id_++;
    v.fleet = fleet;
    v.capacity = policy_.capacity;
    v.start_s = now_;
    v.anchor = spawn_nodes_[pick(rng_)];
    v.anchor_time = now_;
    fleets_[static_cast<std::size_t>(fleet)].vehicles.push_back(vehicles_.size());
    vehicles_.push_back(std::move(v));
    log(EventKind::shift_start, vehicles_.back().id, -1);
  }

  void retire(std::size_t vi) {
    auto& v = vehicles_[vi];
    if (!v.accepting) return;
    v.accepting = false;
    if (v.schedule.empty()) {
      v.retired = true;
      v.end_s = now_;
      log(EventKind::shift_end, v.id, -1);
    } else {
      v.retire_pending = true;
    }
  }

  void on_horizon() {
    for (std::size_t vi = 0; vi < vehicles_.size(); ++vi) {
      if (vehicles_[vi].fleet >= 0) retire(vi);
    }
    for (auto& fleet : fleets_) {
      for (auto ri : fleet.queue) {
        auto& t = trips_[ri];
        t.mode = fleet.tag;
        t.served = false;
        t.wait_min = (kHorizonS - requests_[ri].time_s) / 60.0;
        t.reject_reason = "waiting_at_horizon";
      }
      fleet.queue.clear();
    }
  }

  // ---- vehicle motion -----------------------------------------------------

  // First node at or after `now_` on the current leg.
  std::size_t divert_index(const SimVehicle& v) const {
    for (std::size_t k = 0; k < v.leg_time.size(); ++k) {
      if (v.leg_time[k] >= now_) return k;
    }
    return v.leg_time.size() - 1;
  }

  FleetVehicle view(const SimVehicle& v) const {
    FleetVehicle fv;
    fv.id = v.id;
    fv.capacity = v.capacity;
    fv.accepting = v.accepting;
    fv.schedule = v.schedule;
    fv.passengers = v.passengers;
    if (v.schedule.empty() || v.leg_nodes.empty()) {
      fv.node = v.anchor;
      fv.ready_time_s = std::max(v.anchor_time, now_);
      fv.odometer_m = v.anchor_odo;
    } else {
      const auto k = divert_index(v);
      fv.node = v.leg_nodes[k];
      fv.ready_time_s = v.leg_time[k];
      fv.odometer_m = v.leg_odo[k];
    }
    return fv;
  }

  void start_leg(std::size_t vi) {
    auto& v = vehicles_[vi];
    ++v.version;
    v.leg_nodes.clear();
    v.leg_time.clear();
    v.leg_odo.clear();
    if (v.schedule.empty()) return;
    const auto target = v.schedule.front().node;
    const auto path = router_.path(v.anchor, target);
    double t = 0, d = 0;
    v.leg_nodes.push_back(v.anchor);
    v.leg_time.push_back(v.anchor_time);
    v.leg_odo.push_back(v.anchor_odo);
    const auto& edges = net_.edges();
    for (std::size_t i = 0; i < path.edges.size(); ++i) {
      const auto& e = edges[static_cast<std::size_t>(edge_position(path.edges[i]))];
      t += e.travel_time_s();
      d += e.length_m;
      v.leg_nodes.push_back(path.nodes[i + 1]);
      v.leg_time.push_back(v.anchor_time + t);
      v.leg_odo.push_back(v.anchor_odo + d);
    }
    // Ordered by vehicle id; `fleet` carries the vehicle index.
    push({v.leg_time.back(), 0, v.id, 0, EventKind::vehicle_arrives, v.version, static_cast<int>(vi)});
  }

  int edge_position(int edge_id) {
    if (edge_pos_.empty()) {
      const auto& edges = net_.edges();
      for (std::size_t i = 0; i < edges.size(); ++i) edge_pos_[edges[i].id] = static_cast<int>(i);
    }
    return edge_pos_.at(edge_id);
  }

  void assign(std::size_t vi, const RideRequest& r, std::vector<Stop> schedule) {
    auto& v = vehicles_[vi];
    if (!v.schedule.empty() && !v.leg_nodes.empty()) {
      const auto k = divert_index(v);
      v.anchor = v.leg_nodes[k];
      v.anchor_time = v.leg_time[k];
      v.anchor_odo = v.leg_odo[k];
    } else {
      v.anchor_time = std::max(v.anchor_time, now_);
    }
    v.schedule = std::move(schedule);
    v.passengers.push_back({r.id, r.origin, r.destination, r.time_s,
                            router_.distance_m(r.origin, r.destination), std::nullopt});
    start_leg(vi);
  }

  void on_arrival(std::size_t vi, int version) {
    auto& v = vehicles_[vi];
    if (version != v.version || v.leg_nodes.empty()) return;
    v.anchor = v.leg_nodes.back();
    v.anchor_time = v.leg_time.back();
    v.anchor_odo = v.leg_odo.back();
    v.leg_nodes.clear();
    v.leg_time.clear();
    v.leg_odo.clear();
    log(EventKind::vehicle_arrives, v.id, -1);

    bool picked_up = false;
    while (!v.schedule.empty() && v.schedule.front().node == v.anchor) {
      const Stop s = v.schedule.front();
      v.schedule.erase(v.schedule.begin());
      auto pit = std::find_if(v.passengers.begin(), v.passengers.end(),
                              [&](const Passenger& p) { return p.request_id == s.request_id; });
      auto& trip = trips_[request_index_.at(s.request_id)];
      if (s.action == StopAction::pickup) {
        pit->boarded_odometer_m = v.anchor_odo;
        trip.pickup_time_s = now_;
        picked_up = true;
        log(EventKind::pickup, v.id, s.request_id);
      } else {
        trip.served = true;
        trip.dropoff_time_s = now_;
        trip.wait_min = (*trip.pickup_time_s - trip.request_time_s) / 60.0;
        trip.in_vehicle_min = (now_ - *trip.pickup_time_s) / 60.0;
        trip.length_km = (v.anchor_odo - *pit->boarded_odometer_m) / 1000.0;
        trip.vehicle_id = v.id;
        v.passenger_seconds += now_ - *trip.pickup_time_s;
        v.passengers.erase(pit);
        log(EventKind::dropoff, v.id, s.request_id);
      }
    }

    if (!v.schedule.empty()) {
      start_leg(vi);
      if (picked_up && fleets_[static_cast<std::size_t>(v.fleet)].kind == DispatcherKind::shared) {
        dispatch(v.fleet);
      }
      return;
    }
    ++v.version;
    if (v.retire_pending) {
      v.retire_pending = false;
      v.retired = true;
      v.end_s = now_;
      log(EventKind::shift_end, v.id, -1);
      return;
    }
    dispatch(v.fleet);
  }

  // ---- requests -----------------------------------------------------------

  void reject(std::size_t ri, ServiceTag mode, const char* reason) {
    auto& t = trips_[ri];
    t.mode = mode;
    t.served = false;
    t.reject_reason = reason;
  }

  void on_request(std::size_t ri) {
    const auto& r = requests_[ri];
    request_index_[r.id] = ri;
    log(EventKind::request_arrival, -1, r.id);
    if (trips_[ri].direct_km * 1000.0 == kUnreachable) {
      reject(ri, ServiceTag::crowdsourced, "unroutable");
      return;
    }

    ServiceTag tag = ServiceTag::crowdsourced;
    switch (policy_.system) {
      case SystemType::crowdsourced_exclusive:
      case SystemType::crowdsourced_shared: tag = ServiceTag::crowdsourced; break;
      case SystemType::dedicated_darp: tag = ServiceTag::dedicated; break;
      case SystemType::frt:
      case SystemType::hybrid_frt: tag = ServiceTag::frt; break;
      case SystemType::hybrid_odt:
        tag = hybrid_route(net_, r, *policy_.route, *timetable_, HybridMode::odt_based);
        break;
    }

    if (tag == ServiceTag::frt) {
      if (ride_frt(ri)) return;
      if (policy_.system == SystemType::frt) {
        reject(ri, ServiceTag::frt, frt_board(net_, r, *policy_.route, *timetable_)
                                        ? "frt_capacity"
                                        : "outside_frt_service");
        return;
      }
      tag = ServiceTag::crowdsourced;
    }

    const int f = tag == ServiceTag::dedicated ? dd_fleet_ : cs_fleet_;
    auto& fleet = fleets_[static_cast<std::size_t>(f)];
    trips_[ri].mode = tag;
    fleet.queue.push_back(ri);
    if (fleet.kind == DispatcherKind::darp) {
      schedule_batch(f);
    } else {
      dispatch(f);
    }
  }

  // ---- fixed route ----------------------------------------------------------

  void start_frt_fleet() {
    const auto& tt = *timetable_;
    for (int k = 0; k < frt_vehicles_; ++k) {
      FleetRecord rec;
      rec.vehicle_id = next_vehicle_id_++;
      rec.service = ServiceTag::frt;
      rec.service_start_s = policy_.route->window_start_s;
      rec.service_end_s = policy_.route->window_end_s;
      rec.km = tt.vkm_per_vehicle();
      frt_fleet_.push_back(rec);
    }
  }

  bool ride_frt(std::size_t ri) {
    const auto& r = requests_[ri];
    const auto& route = *policy_.route;
    const auto& tt = *timetable_;
    const int segments = static_cast<int>(route.stops.size()) - 1;
    int first = 0;
    while (true) {
      auto plan = frt_board(net_, r, route, tt, first);
      if (!plan) return false;
      auto& load = frt_load_[{plan->forward, plan->departure}];
      if (load.empty()) load.assign(static_cast<std::size_t>(segments), 0);
      const int lo = std::min(plan->board_stop, plan->alight_stop);
      const int hi = std::max(plan->board_stop, plan->alight_stop);
      bool room = true;
      for (int s = lo; s < hi; ++s) room = room && load[static_cast<std::size_t>(s)] < policy_.capacity;
      if (!room) {
        first = plan->departure + 1;
        continue;
      }
      for (int s = lo; s < hi; ++s) ++load[static_cast<std::size_t>(s)];
      auto& t = trips_[ri];
      t.mode = ServiceTag::frt;
      t.served = true;
      t.walk_min = plan->walk_min;
      t.wait_min = plan->wait_min;
      t.in_vehicle_min = plan->ivtt_min;
      t.length_km = plan->ride_km;
      t.pickup_time_s = plan->board_time_s;
      t.dropoff_time_s = plan->alight_time_s;
      auto& veh = frt_fleet_[static_cast<std::size_t>(plan->departure % frt_vehicles_)];
      t.vehicle_id = veh.vehicle_id;
      veh.passenger_seconds += plan->alight_time_s - plan->board_time_s;
      return true;
    }
  }

  // ---- dispatch -------------------------------------------------------------

  void schedule_batch(int f) {
    auto& fleet = fleets_[static_cast<std::size_t>(f)];
    if (fleet.batch_scheduled) return;
    const double step = policy_.batch_s;
    double t = std::ceil(now_ / step) * step;
    if (fleet.kind != DispatcherKind::darp && t <= now_) t += step;
    fleet.batch_scheduled = true;
    push({t, 0, f, 0, EventKind::batch_dispatch, 0, f});
  }

  void on_batch(int f) {
    fleets_[static_cast<std::size_t>(f)].batch_scheduled = false;
    log(EventKind::batch_dispatch, -1, -1);
    if (fleets_[static_cast<std::size_t>(f)].kind == DispatcherKind::darp) {
      run_darp(f);
    } else {
      dispatch(f);
    }
  }

  void dispatch(int f) {
    if (f < 0) return;
    auto& fleet = fleets_[static_cast<std::size_t>(f)];
    if (fleet.queue.empty()) return;
    if (fleet.kind == DispatcherKind::darp) return;  // decided at batch time only

    std::vector<RideRequest> queue;
    queue.reserve(fleet.queue.size());
    for (auto ri : fleet.queue) queue.push_back(requests_[ri]);
    std::vector<FleetVehicle> idle, en_route;
    std::map<int, std::size_t> by_id;
    for (auto vi : fleet.vehicles) {
      const auto& v = vehicles_[vi];
      if (!v.accepting) continue;
      by_id[v.id] = vi;
      if (v.schedule.empty()) {
        idle.push_back(view(v));
      } else if (fleet.kind == DispatcherKind::shared) {
        en_route.push_back(view(v));
      }
    }
    if (idle.empty() && en_route.empty()) return;

    const auto assignments =
        fleet.kind == DispatcherKind::greedy
            ? greedy_assign(idle, queue, router_)
            : shared_greedy_match(en_route, idle, queue, policy_.max_detour, router_);
    for (const auto& a : assignments) {
      const auto ri = request_index_.at(a.request_id);
      assign(by_id.at(a.vehicle_id), requests_[ri], a.schedule);
      fleet.queue.erase(std::find(fleet.queue.begin(), fleet.queue.end(), ri));
    }
    if (!fleet.queue.empty() && fleet.kind == DispatcherKind::shared) schedule_batch(f);
  }

  void run_darp(int f) {
    auto& fleet = fleets_[static_cast<std::size_t>(f)];
    const DarpParams params{policy_.max_detour, policy_.max_wait_s};
    const auto pending = std::move(fleet.queue);
    fleet.queue.clear();
    for (auto ri : pending) {
      std::vector<FleetVehicle> views;
      std::map<int, std::size_t> by_id;
      for (auto vi : fleet.vehicles) {
        const auto& v = vehicles_[vi];
        if (!v.accepting) continue;
        views.push_back(view(v));
        by_id[v.id] = vi;
      }
      const auto& r = requests_[ri];
      auto result = darp_insert(views, r, params, router_);
      if (hooks_ && hooks_->on_darp_decision) {
        hooks_->on_darp_decision(DarpDecision{now_, r, views, params, result});
      }
      if (result.accepted) {
        assign(by_id.at(result.vehicle_id), r, std::move(result.schedule));
      } else {
        reject(ri, ServiceTag::dedicated, "no_feasible_insertion");
      }
    }
  }

  // ---- results --------------------------------------------------------------

  SimulationResult finish() {
    SimulationResult res;
    res.trips = std::move(trips_);
    res.events = std::move(events_);
    for (const auto& v : vehicles_) {
      FleetRecord rec;
      rec.vehicle_id = v.id;
      rec.service = fleets_[static_cast<std::size_t>(v.fleet)].tag;
      rec.service_start_s = v.start_s;
      rec.service_end_s = v.retired ? v.end_s : std::max(v.anchor_time, kHorizonS);
      rec.km = v.anchor_odo / 1000.0;
      rec.passenger_seconds = v.passenger_seconds;
      res.fleet.push_back(rec);
    }
    for (const auto& rec : frt_fleet_) res.fleet.push_back(rec);
    std::sort(res.fleet.begin(), res.fleet.end(),
              [](const FleetRecord& a, const FleetRecord& b) { return a.vehicle_id < b.vehicle_id; });

    double total_oh = 0;
    int total_n = 0;
    auto add_service = [&](ServiceTag tag, double oh, int n) {
      std::vector<TripRecord> trips;
      std::vector<FleetRecord> fleet;
      for (const auto& t : res.trips) {
        if (t.mode == tag) trips.push_back(t);
      }
      for (const auto& f : res.fleet) {
        if (f.service == tag) fleet.push_back(f);
      }
      res.services.emplace_back(tag, summarize(trips, fleet, oh, n));
      total_oh = std::max(total_oh, oh);
      total_n += n;
    };
    for (const auto& fleet : fleets_) {
      int oh = 0, peak = 0;
      for (int c : fleet.supply.vehicles) {
        oh += c > 0;
        peak = std::max(peak, c);
      }
      add_service(fleet.tag, oh, peak);
    }
    if (timetable_ && has_frt(policy_.system)) {
      add_service(ServiceTag::frt,
                  (policy_.route->window_end_s - policy_.route->window_start_s) / 3600.0,
                  frt_vehicles_);
    }
    res.total = summarize(res.trips, res.fleet, total_oh, total_n);
    return res;
  }

  const Router& router_;
  const Network& net_;
  ScenarioPolicy policy_;
  std::mt19937_64 rng_;
  const RunHooks* hooks_;

  std::vector<RideRequest> requests_;
  std::vector<TripRecord> trips_;
  std::unordered_map<int, std::size_t> request_index_;
  std::vector<int> spawn_nodes_;
  std::vector<SimVehicle> vehicles_;
  std::vector<FleetState> fleets_;
  int cs_fleet_ = -1;
  int dd_fleet_ = -1;
  int next_vehicle_id_ = 0;

  std::optional<FrtTimetable> timetable_;
  int frt_vehicles_ = 0;
  std::vector<FleetRecord> frt_fleet_;
  std::map<std::pair<bool, int>, std::vector<int>> frt_load_;

  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0;
  std::vector<LogEvent> events_;
  std::unordered_map<int, int> edge_pos_;
};

}  // namespace

SimulationResult run_scenario(const Router& router, const DemandSet& demand,
                              const SupplyPlan& supply, const ScenarioPolicy& policy,
                              std::uint64_t seed, const RunHooks* hooks) {
  validate_demand(demand, router.network());
  if (!(policy.max_detour >= 1.0)) throw ArgumentError("max_detour must be >= 1");
  if (!(policy.max_wait_s > 0)) throw ArgumentError("max_wait must be > 0");
  if (!(policy.batch_s > 0)) throw ArgumentError("batch window must be > 0");
  if (policy.capacity <= 0) throw ArgumentError("capacity must be > 0");
  Simulation sim(router, demand, supply, policy, seed, hooks);
  return sim.run();
}

std::string trips_csv(const SimulationResult& result) {
  std::string s = "request_id,mode,served,walk_min,wait_min,ivtt_min,length_km,origin_zone,dest_zone,reject_reason\n";
  auto zone = [](const std::optional<int>& z) { return z ? std::to_string(*z) : std::string(); };
  for (const auto& t : result.trips) {
    s += std::to_string(t.request_id) + "," + to_string(t.mode) + "," + (t.served ? "1" : "0") + ",";
    if (t.served) {
      s += csv::exact(t.walk_min) + "," + csv::exact(t.wait_min) + "," + csv::exact(t.in_vehicle_min) +
           "," + csv::exact(t.length_km);
    } else if (t.reject_reason == "waiting_at_horizon") {
      s += "," + csv::exact(t.wait_min) + ",,";
    } else {
      s += ",,,";
    }
    s += "," + zone(t.origin_zone) + "," + zone(t.dest_zone) + "," + t.reject_reason + "\n";
  }
  return s;
}

std::string fleet_csv(const SimulationResult& result) {
  std::string s = "vehicle_id,service_hours,km,avg_occupancy\n";
  for (const auto& f : result.fleet) {
    s += std::to_string(f.vehicle_id) + "," + csv::exact(f.service_hours()) + "," +
         csv::exact(f.km) + "," + csv::exact(f.avg_occupancy()) + "\n";
  }
  return s;
}

}  // namespace odt
