#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "odt/csv.hpp"
#include "odt/engine.hpp"
#include "odt/error.hpp"
#include "odt/network.hpp"
#include "oracles.hpp"

using namespace odt;

namespace {

struct Fixture {
  Network net = generate_grid(6, 6, 500, 10, 5);
  Router router{net};
};

SupplySchedule flat(int n) {
  SupplySchedule s;
  s.vehicles.fill(n);
  return s;
}

DemandSet synthetic(const Network& net, std::size_t count, std::uint64_t seed) {
  std::vector<double> profile(24, 1.0);
  for (int h = 7; h < 10; ++h) profile[h] = 4.0;
  for (int h = 15; h < 19; ++h) profile[h] = 4.0;
  return generate_synthetic_demand(net, count, profile, seed);
}

RouteSpec row_route() {
  RouteSpec r;
  r.stops = {12, 13, 14, 15, 16, 17};
  return r;
}

ScenarioPolicy policy_for(SystemType s, int level = 100) {
  ScenarioPolicy p;
  p.system = s;
  p.demand_level_pct = level;
  if (has_frt(s) || s == SystemType::hybrid_odt) p.route = row_route();
  return p;
}

SupplyPlan supply_for(SystemType s, int crowd, int dedicated) {
  SupplyPlan plan;
  if (has_crowdsourced(s)) plan.crowdsourced = flat(crowd);
  if (has_dedicated(s)) plan.dedicated = flat(dedicated);
  return plan;
}

constexpr SystemType kAll[] = {SystemType::crowdsourced_exclusive, SystemType::crowdsourced_shared,
                               SystemType::dedicated_darp,         SystemType::frt,
                               SystemType::hybrid_frt,             SystemType::hybrid_odt};

bool pooled(SystemType s) {
  return s == SystemType::crowdsourced_shared || s == SystemType::dedicated_darp ||
         s == SystemType::hybrid_odt;
}

}  // namespace

TEST_CASE("system names round-trip") {
  for (auto s : kAll) CHECK(parse_system_type(to_string(s)) == s);
  CHECK_FALSE(parse_system_type("bus"));
}

TEST_CASE("zero requests") {
  Fixture f;
  const DemandSet empty;
  const auto r = run_scenario(f.router, empty, supply_for(SystemType::crowdsourced_exclusive, 3, 0),
                              policy_for(SystemType::crowdsourced_exclusive), 1);
  CHECK(r.total.served == 0);
  CHECK(r.total.total_km == 0);
  CHECK(r.total.avg_wait_min == 0);
  CHECK(r.total.avg_ivtt_min == 0);
  CHECK(r.total.avg_trip_km == 0);
  CHECK(r.total.avg_occupancy == 0);
  CHECK(r.trips.empty());
}

TEST_CASE("one request, one vehicle at its origin") {
  Fixture f;
  DemandSet d;
  d.requests = {{1, 3600.0, 7, 28}};
  d.base_count = 1;
  SupplySchedule s;
  s.vehicles[0] = 1;
  s.vehicles[1] = 1;
  const auto r = run_scenario(f.router, d, {s, std::nullopt}, policy_for(SystemType::crowdsourced_exclusive), 1);
  REQUIRE(r.trips.size() == 1);
  const auto& t = r.trips[0];
  REQUIRE(t.served);
  CHECK(t.wait_min == doctest::Approx(0.0));
  CHECK(t.in_vehicle_min == doctest::Approx(f.router.time_s(7, 28) / 60));
  CHECK(t.length_km == doctest::Approx(f.router.distance_m(7, 28) / 1000));
  CHECK(r.total.total_km == doctest::Approx(t.length_km));
}

TEST_CASE("same seed, same logs") {
  Fixture f;
  const auto d = synthetic(f.net, 20, 3);
  for (auto s : kAll) {
    CAPTURE(to_string(s));
    const auto a = run_scenario(f.router, d, supply_for(s, 3, 3), policy_for(s), 17);
    const auto b = run_scenario(f.router, d, supply_for(s, 3, 3), policy_for(s), 17);
    CHECK(trips_csv(a) == trips_csv(b));
    CHECK(fleet_csv(a) == fleet_csv(b));
    CHECK(a.events.size() == b.events.size());
  }
}

TEST_CASE("summarize examples") {
  std::vector<TripRecord> trips(2);
  trips[0].served = trips[1].served = true;
  trips[0].wait_min = 4;
  trips[1].wait_min = 8;
  std::vector<FleetRecord> fleet(1);
  fleet[0].service_start_s = 0;
  fleet[0].service_end_s = 7200;
  fleet[0].passenger_seconds = 3600;
  const auto s = summarize(trips, fleet, 2.0, 1);
  CHECK(s.avg_wait_min == doctest::Approx(6.0));
  CHECK(s.avg_occupancy == doctest::Approx(0.5));
  CHECK(fleet[0].avg_occupancy() == doctest::Approx(0.5));
  CHECK(s.avg_vehicles == doctest::Approx(1.0));
}

TEST_CASE("aggregates recompute from trips.csv and fleet.csv") {
  Fixture f;
  const auto d = synthetic(f.net, 20, 8);
  for (auto s : kAll) {
    CAPTURE(to_string(s));
    const auto r = run_scenario(f.router, d, supply_for(s, 3, 3), policy_for(s), 5);
    const auto trips = csv::parse(trips_csv(r), "trips.csv");
    const auto fleet = csv::parse(fleet_csv(r), "fleet.csv");
    double wait = 0, ivtt = 0, walk = 0, km = 0;
    int served = 0;
    for (std::size_t i = 0; i < trips.rows.size(); ++i) {
      if (trips.rows[i][2] != "1") continue;
      ++served;
      walk += csv::to_double(trips, i, 3);
      wait += csv::to_double(trips, i, 4);
      ivtt += csv::to_double(trips, i, 5);
      km += csv::to_double(trips, i, 6);
    }
    double fleet_km = 0;
    for (std::size_t i = 0; i < fleet.rows.size(); ++i) fleet_km += csv::to_double(fleet, i, 2);
    CHECK(static_cast<std::size_t>(served) == r.total.served);
    if (served > 0) {
      CHECK(r.total.avg_wait_min == doctest::Approx(wait / served));
      CHECK(r.total.avg_ivtt_min == doctest::Approx(ivtt / served));
      CHECK(r.total.avg_walk_min == doctest::Approx(walk / served));
      CHECK(r.total.avg_trip_km == doctest::Approx(km / served));
    }
    CHECK(r.total.total_km == doctest::Approx(fleet_km));
  }
}

TEST_CASE("every run conserves requests and keeps its invariants") {
  Fixture f;
  const auto base = synthetic(f.net, 60, 21);
  for (auto s : kAll) {
    for (int level : {100, 300}) {
      for (int vehicles : {1, 4}) {
        CAPTURE(to_string(s));
        CAPTURE(level);
        CAPTURE(vehicles);
        const auto d = scale_demand(base, level, 3);
        const auto r = run_scenario(f.router, d, supply_for(s, vehicles, vehicles), policy_for(s, level), 9);

        // Conservation.
        CHECK(r.total.served + r.total.rejected + r.total.waiting_at_horizon == d.requests.size());
        CHECK(r.trips.size() == d.requests.size());
        if (s == SystemType::crowdsourced_exclusive || s == SystemType::crowdsourced_shared) {
          CHECK(r.total.rejected == 0);
        }

        // Timing identities and record shape.
        double direct_km = 0;
        for (const auto& t : r.trips) {
          if (!t.served) {
            CHECK(t.length_km == 0);
            CHECK(!t.pickup_time_s);
            CHECK(!t.reject_reason.empty());
            continue;
          }
          CHECK(t.wait_min >= 0);
          CHECK(t.in_vehicle_min >= 0);
          CHECK(t.length_km > 0);
          if (t.mode != ServiceTag::frt) {
            REQUIRE(t.pickup_time_s);
            REQUIRE(t.dropoff_time_s);
            CHECK(t.wait_min == (*t.pickup_time_s - t.request_time_s) / 60.0);
            CHECK(t.in_vehicle_min == (*t.dropoff_time_s - *t.pickup_time_s) / 60.0);
            direct_km += t.direct_km;
            // Realized detour bound for pooled services.
            if (pooled(s) && (t.mode == ServiceTag::dedicated || s == SystemType::crowdsourced_shared)) {
              CHECK(t.length_km <= 2.0 * t.direct_km + 1e-9);
            }
            if (t.mode == ServiceTag::dedicated) CHECK(t.wait_min <= 30.0 + 1e-9);
          }
        }

        // Exclusive rides: deadheading only adds distance.
        if (s == SystemType::crowdsourced_exclusive) CHECK(r.total.total_km >= direct_km - 1e-9);

        // Total_km is the sum of odometers.
        double odo = 0;
        for (const auto& v : r.fleet) odo += v.km;
        CHECK(r.total.total_km == doctest::Approx(odo));

        // The log is time-ordered.
        CHECK(std::is_sorted(r.events.begin(), r.events.end(),
                             [](const LogEvent& a, const LogEvent& b) { return a.time_s < b.time_s; }));

        // Seats and concurrent requests per vehicle, replayed from the log.
        std::map<int, int> aboard;
        std::map<int, ServiceTag> service;
        for (const auto& v : r.fleet) service[v.vehicle_id] = v.service;
        for (const auto& e : r.events) {
          if (e.kind == EventKind::pickup) {
            CHECK(++aboard[e.vehicle_id] <= kVehicleSeats);
            if (service[e.vehicle_id] == ServiceTag::crowdsourced) CHECK(aboard[e.vehicle_id] <= 2);
          } else if (e.kind == EventKind::dropoff) {
            CHECK(--aboard[e.vehicle_id] >= 0);
          }
        }
      }
    }
  }
}

TEST_CASE("dedicated rejections are certified by the exhaustive oracle") {
  Fixture f;
  const auto d = scale_demand(synthetic(f.net, 80, 4), 400, 2);
  int certified = 0, accepted = 0;
  RunHooks hooks;
  hooks.on_darp_decision = [&](const DarpDecision& dec) {
    const auto want = oracle::darp(dec.fleet, dec.request, dec.params, f.router);
    CHECK(want.accepted == dec.result.accepted);
    if (dec.result.accepted) {
      ++accepted;
      CHECK(dec.result.added_m == doctest::Approx(want.added));
      CHECK(dec.result.predicted_wait_s <= dec.params.max_wait_s + 1e-9);
    } else {
      ++certified;
    }
  };
  for (auto s : {SystemType::dedicated_darp, SystemType::hybrid_odt}) {
    auto p = policy_for(s, 400);
    p.max_wait_s = 300;
    p.max_detour = 1.3;
    const auto r = run_scenario(f.router, d, supply_for(s, 1, 1), p, 3, &hooks);
    std::size_t darp_rejects = 0;
    for (const auto& t : r.trips) {
      darp_rejects += t.reject_reason == "no_feasible_insertion";
      if (t.served && t.mode == ServiceTag::dedicated) {
        CHECK(t.wait_min <= 5.0 + 1e-9);
        CHECK(t.length_km <= 1.3 * t.direct_km + 1e-9);
      }
    }
    CHECK(darp_rejects > 0);
  }
  MESSAGE("accepted " << accepted << ", certified rejections " << certified);
  CHECK(certified > 0);
  CHECK(accepted > 0);
}

TEST_CASE("no dedicated vehicles means every request is rejected") {
  Fixture f;
  const auto d = synthetic(f.net, 10, 1);
  const auto r = run_scenario(f.router, d, supply_for(SystemType::dedicated_darp, 0, 0),
                              policy_for(SystemType::dedicated_darp), 1);
  CHECK(r.total.served == 0);
  CHECK(r.total.rejected == 10);
}

TEST_CASE("starved crowdsourced requests wait at the horizon") {
  Fixture f;
  DemandSet d;
  d.requests = {{1, 80000.0, 0, 35}};
  d.base_count = 1;
  SupplySchedule s;
  s.vehicles[2] = 1;  // one vehicle, hours before the request
  const auto r = run_scenario(f.router, d, {s, std::nullopt}, policy_for(SystemType::crowdsourced_exclusive), 1);
  REQUIRE(r.trips.size() == 1);
  CHECK_FALSE(r.trips[0].served);
  CHECK(r.trips[0].reject_reason == "waiting_at_horizon");
  CHECK(r.trips[0].wait_min == doctest::Approx((86400.0 - 80000.0) / 60));
  CHECK(r.total.waiting_at_horizon == 1);
}

TEST_CASE("fixed route service summary") {
  Fixture f;
  const auto d = synthetic(f.net, 100, 6);
  const auto r = run_scenario(f.router, d, {}, policy_for(SystemType::frt, 100), 1);
  const auto* frt = r.service(ServiceTag::frt);
  REQUIRE(frt);
  CHECK(frt->operating_hours == doctest::Approx(14.0));
  CHECK(frt->fleet_size == 2);
  CHECK(frt->total_km > 0);
  for (const auto& t : r.trips) {
    if (t.served) {
      CHECK(t.mode == ServiceTag::frt);
      CHECK(t.walk_min <= 2 * 7.0 + 1e-9);
    } else {
      CHECK((t.reject_reason == "outside_frt_service" || t.reject_reason == "frt_capacity"));
    }
  }
  const auto busy = run_scenario(f.router, d, {}, policy_for(SystemType::frt, 300), 1);
  CHECK(busy.service(ServiceTag::frt)->fleet_size == 3);
}

TEST_CASE("argument checks") {
  Fixture f;
  const auto d = synthetic(f.net, 5, 1);
  auto p = policy_for(SystemType::crowdsourced_exclusive);
  p.max_detour = 0.5;
  CHECK_THROWS_AS(run_scenario(f.router, d, supply_for(p.system, 1, 1), p, 1), ArgumentError);
  p = policy_for(SystemType::crowdsourced_exclusive);
  p.batch_s = 0;
  CHECK_THROWS_AS(run_scenario(f.router, d, supply_for(p.system, 1, 1), p, 1), ArgumentError);
}
