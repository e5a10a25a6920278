// Acceptance suite: one line per criterion, "PASS", "FAIL" or "WARN".
// Exit status is nonzero when a blocking criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "odt/config.hpp"
#include "odt/costing.hpp"
#include "odt/demand.hpp"
#include "odt/efficiency.hpp"
#include "odt/emissions.hpp"
#include "odt/equity.hpp"
#include "odt/error.hpp"
#include "odt/pipeline.hpp"
#include "../oracles.hpp"

using namespace odt;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Checker {
 public:
  void expect(bool cond, const std::string& what) {
    ++checks_;
    if (!cond && failures_.size() < 5) failures_.push_back(what);
    if (!cond) ++failed_;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << " (" << checks_ - failed_ << "/" << checks_ << " checks)";
    for (const auto& f : failures_) s << "; " << f;
    return {failed_ == 0, s.str()};
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// The synthetic town shared by criteria 4, 5, 7 and 10.
const char* kTown = R"({
  "seed": 2024,
  "network": {"grid": {"rows": 10, "cols": 10, "spacing_m": 500, "speed_mps": 11.1}},
  "demand": {
    "synthetic": {"count": 100,
                  "hourly_profile": [1, 1, 1, 1, 1, 2, 4, 8, 9, 6, 5, 5, 6, 6, 6, 7, 9, 9, 7, 5, 4, 3, 2, 1]},
    "levels": [50, 100, 150, 200, 250, 300, 350, 400, 450, 500]
  },
  "supply": {
    "alpha": 1,
    "crowdsourced": [1, 1, 1, 1, 1, 1, 2, 3, 3, 2, 2, 2, 2, 2, 2, 2, 3, 3, 2, 2, 2, 1, 1, 1],
    "dedicated": [2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 2, 2, 2]
  },
  "system": {
    "types": ["crowdsourced_exclusive", "crowdsourced_shared", "dedicated_darp", "frt", "hybrid_frt", "hybrid_odt"],
    "route": {"stops": [50, 51, 52, 53, 54, 55, 56, 57, 58, 59]}
  }
})";

Config town_config() {
  auto c = validate_config_text(kTown, "acceptance_town.json");
  if (!c.ok()) throw Error("acceptance town config invalid: " + c.errors.front());
  return *c.config;
}

// 1 -----------------------------------------------------------------------
Outcome formulas() {
  Checker c;
  const CostParameters p;
  const CrowdsourcedStats cs{11.39, 9.76, 177};
  c.expect(std::abs(crowdsourced_trip_cost(cs, p, false) - 11.2058) <= 1e-9 * 11.2058,
           "per-trip " + num(crowdsourced_trip_cost(cs, p, false)));
  const double annual = to_cad(noc_crowdsourced(cs, p, false, 0));
  c.expect(std::abs(annual - 723951) <= 1.0, "annual crowdsourced " + num(annual));
  c.expect(to_cad(noc_dedicated({3, 24, 177}, p)) == 2147786.0, "dedicated");
  c.expect(to_cad(noc_frt({2, 280, 14, 100}, p)) == 356512.0, "fixed route");
  c.expect(to_cents(generalized_cost(0, 8, 10, 177, 15, 500000)) == to_cents(790722.50), "generalized cost");
  c.expect(generalized_cost(2, 8, 10, 0, 15, 500000) == 500000.0, "GC at SD=0");
  c.expect(round2(demand_density(885, 262.4)) == 3.37, "885/262.4");
  c.expect(round2(demand_density(354, 262.4)) == 1.35, "354/262.4");
  return c.outcome("cost, GC and density worked examples");
}

// 2 -----------------------------------------------------------------------
Outcome electrification() {
  Checker c;
  const EmissionFactors f;
  const double full = 100 * ghg_reduction(1.0, f), fifth = 100 * ghg_reduction(0.2, f);
  c.expect(std::abs(full - 98.1) <= 0.1, "full " + num(full));
  c.expect(std::abs(fifth - 19.6) <= 0.1, "20% " + num(fifth));
  return c.outcome("reductions " + num(full) + "% and " + num(fifth) + "%");
}

// 3 -----------------------------------------------------------------------
Outcome dispatcher_oracles() {
  Checker c;
  const auto net = generate_grid(5, 5, 500, 10, 3);
  const Router router(net);
  std::mt19937_64 rng(20240);
  std::uniform_int_distribution<int> node(0, 24), count(1, 5), fleet_size(1, 3), seats(1, 3);
  std::uniform_real_distribution<double> coin(0, 1);
  const int instances = 250;
  int darp_decisions = 0;
  for (int i = 0; i < instances; ++i) {
    // Greedy.
    std::vector<FleetVehicle> idle;
    const int nv = fleet_size(rng);
    for (int v = 0; v < nv; ++v) {
      FleetVehicle f;
      f.id = 4 * v + 1;
      f.node = node(rng);
      idle.push_back(f);
    }
    std::vector<RideRequest> queue;
    const int nr = count(rng);
    for (int k = 0; k < nr; ++k) {
      int o = node(rng), d = node(rng);
      if (o == d) d = (d + 1) % 25;
      queue.push_back({k, 10.0 * k, o, d});
    }
    std::map<int, int> got;
    for (const auto& a : greedy_assign(idle, queue, router)) got[a.request_id] = a.vehicle_id;
    c.expect(got == oracle::greedy(idle, queue, router), "greedy instance " + std::to_string(i));

    // DARP: requests inserted one after another into the evolving fleet.
    const DarpParams params{i % 2 ? 1.5 : 2.0, i % 3 ? 1800.0 : 600.0};
    std::vector<FleetVehicle> fleet = idle;
    for (auto& f : fleet) f.capacity = seats(rng);
    for (const auto& r : queue) {
      for (auto& f : fleet) f.ready_time_s = std::max(f.ready_time_s, r.time_s);
      const auto want = oracle::darp(fleet, r, params, router);
      const auto res = darp_insert(fleet, r, params, router);
      ++darp_decisions;
      c.expect(res.accepted == want.accepted, "darp acceptance, instance " + std::to_string(i));
      if (!res.accepted || !want.accepted) continue;
      c.expect(res.vehicle_id == want.vehicle_id && res.pickup_index == want.pickup &&
                   res.dropoff_index == want.dropoff,
               "darp choice, instance " + std::to_string(i));
      c.expect(std::abs(res.added_m - want.added) <= 1e-6, "darp added distance");
      auto& v = *std::find_if(fleet.begin(), fleet.end(), [&](const auto& f) { return f.id == res.vehicle_id; });
      v.schedule = res.schedule;
      v.passengers.push_back({r.id, r.origin, r.destination, r.time_s,
                              router.distance_m(r.origin, r.destination), std::nullopt});
      if (coin(rng) < 0.5 && !v.schedule.empty() && v.schedule.front().action == StopAction::pickup) {
        const Stop s = v.schedule.front();
        v.ready_time_s += router.time_s(v.node, s.node);
        v.odometer_m += router.distance_m(v.node, s.node);
        v.node = s.node;
        v.schedule.erase(v.schedule.begin());
        for (auto& p : v.passengers) {
          if (p.request_id == s.request_id) p.boarded_odometer_m = v.odometer_m;
        }
      }
    }
  }
  return c.outcome(std::to_string(instances) + " greedy instances, " + std::to_string(darp_decisions) +
                   " DARP decisions");
}

struct TownSweep {
  Config config;
  StudyInputs inputs;
  std::vector<ScenarioRun> runs;
  std::size_t darp_decisions = 0, certified = 0, uncertified = 0;
};

/// Stress variant: one dedicated vehicle all day at every level (alpha 0);
/// only the DARP systems run.
TownSweep run_town(bool constant_supply) {
  TownSweep t{town_config(), {}, {}};
  if (constant_supply) {
    t.config.supply.alpha = 0;
    t.config.supply.dedicated->vehicles.fill(1);
    t.config.systems = {SystemType::dedicated_darp, SystemType::hybrid_odt};
  }
  t.inputs = prepare_inputs(t.config);
  const Router router(t.inputs.network, t.inputs.table);
  RunHooks hooks;
  hooks.on_darp_decision = [&](const DarpDecision& d) {
    ++t.darp_decisions;
    if (d.result.accepted) return;
    if (oracle::darp(d.fleet, d.request, d.params, router).accepted) {
      ++t.uncertified;
    } else {
      ++t.certified;
    }
  };
  for (auto sys : t.config.systems) {
    for (int level : t.config.demand.levels) {
      t.runs.push_back(run_scenario_at(t.config, t.inputs, sys, level, &hooks));
    }
  }
  return t;
}

// 4 -----------------------------------------------------------------------
Outcome constraints(const TownSweep& scaled, const TownSweep& fixed) {
  Checker c;
  std::size_t pooled = 0, darp_served = 0;
  std::vector<const ScenarioRun*> all;
  for (const auto* t : {&scaled, &fixed}) {
    for (const auto& r : t->runs) all.push_back(&r);
  }
  for (const auto* rp : all) {
    const auto& r = *rp;
    const auto& s = r.result.total;
    c.expect(s.served + s.rejected + s.waiting_at_horizon == r.requests, "conservation " + r.name());
    c.expect(r.requests <= 1000, "demand size " + r.name());
    const bool shared = r.system == SystemType::crowdsourced_shared;
    for (const auto& trip : r.result.trips) {
      if (!trip.served) continue;
      if (shared || trip.mode == ServiceTag::dedicated) {
        ++pooled;
        c.expect(trip.length_km <= 2.0 * trip.direct_km + 1e-9,
                 "detour " + r.name() + " request " + std::to_string(trip.request_id));
      }
      if (trip.mode == ServiceTag::dedicated) {
        ++darp_served;
        c.expect(trip.wait_min <= 30.0 + 1e-9, "wait " + r.name() + " request " + std::to_string(trip.request_id));
      }
    }
  }
  const std::size_t uncertified = scaled.uncertified + fixed.uncertified;
  const std::size_t certified = scaled.certified + fixed.certified;
  c.expect(uncertified == 0, std::to_string(uncertified) + " rejections had a feasible slot");
  c.expect(certified > 0, "no DARP rejection exercised");
  return c.outcome(std::to_string(all.size()) + " runs, " + std::to_string(pooled) + " pooled trips, " +
                   std::to_string(darp_served) + " DARP trips, " + std::to_string(certified) +
                   " certified rejections");
}

// 5 -----------------------------------------------------------------------
Outcome determinism() {
  Checker c;
  std::string first_manifest, first_trips;
  for (int rerun = 0; rerun < 3; ++rerun) {
    const auto config = town_config();
    const auto inputs = prepare_inputs(config);
    const auto runs = run_sweep(config, inputs, 0);
    std::vector<std::string> warnings;
    const auto files = render_outputs(config, inputs, runs, warnings);
    const auto manifest = manifest_json(config, files);
    if (rerun == 0) {
      first_manifest = manifest;
      first_trips = files.at("trips.csv");
    } else {
      c.expect(manifest == first_manifest, "manifest differs on rerun " + std::to_string(rerun));
      c.expect(files.at("trips.csv") == first_trips, "trips.csv differs on rerun " + std::to_string(rerun));
    }
  }
  return c.outcome("3 full sweeps, manifest sha256 " + sha256_hex(first_manifest).substr(0, 12));
}

// 6 -----------------------------------------------------------------------
ZonalOutcome zone(int id, double outcome, double weight) {
  ZonalOutcome z;
  z.zone_id = id;
  z.outcome = outcome;
  z.weight = weight;
  return z;
}

double gini_of(const std::vector<ZonalOutcome>& z) { return gini(lorenz(z)); }

Outcome gini_suite() {
  Checker c;
  c.expect(gini_of({zone(1, 2, 2), zone(2, 5, 5), zone(3, 1, 1)}) == 0.0, "diagonal");
  c.expect(gini_of({zone(1, 0, 1), zone(2, 0, 1), zone(3, 0, 1), zone(4, 1, 1)}) == 0.75, "(0,0,0,1)");
  c.expect(gini_of({zone(1, 1, 1), zone(2, 3, 1)}) == 0.25, "(1,3)");
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> zones(2, 12);
  std::uniform_real_distribution<double> value(0, 100), weight(0.5, 50), scale(0.01, 100);
  for (int i = 0; i < 1000; ++i) {
    std::vector<ZonalOutcome> z;
    const int n = zones(rng);
    for (int k = 0; k < n; ++k) z.push_back(zone(k, value(rng), weight(rng)));
    const double g = gini_of(z);
    c.expect(g >= 0 && g <= 1, "range case " + std::to_string(i));
    // Scale: outcomes and weights by independent positive factors.
    auto scaled = z;
    const double so = scale(rng), sw = scale(rng);
    for (auto& x : scaled) {
      x.outcome *= so;
      x.weight *= sw;
    }
    c.expect(std::abs(gini_of(scaled) - g) <= 1e-9, "scale case " + std::to_string(i));
    // Permutation.
    auto perm = z;
    std::shuffle(perm.begin(), perm.end(), rng);
    c.expect(std::abs(gini_of(perm) - g) <= 1e-9, "permutation case " + std::to_string(i));
    // Split a zone into two with the same per-capita outcome.
    auto split = z;
    const std::size_t at = static_cast<std::size_t>(rng() % split.size());
    const double share = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    ZonalOutcome part = split[at];
    part.zone_id = 1000;
    part.outcome *= share;
    part.weight *= share;
    split[at].outcome *= 1 - share;
    split[at].weight *= 1 - share;
    split.push_back(part);
    c.expect(std::abs(gini_of(split) - g) <= 1e-9, "split case " + std::to_string(i));
  }
  return c.outcome("exact examples and 1000 random property cases");
}

// 7 -----------------------------------------------------------------------
Outcome exclusive_bound(const TownSweep& t) {
  Checker c;
  int runs = 0;
  for (const auto& r : t.runs) {
    if (r.system != SystemType::crowdsourced_exclusive) continue;
    ++runs;
    double direct = 0;
    for (const auto& trip : r.result.trips) {
      if (trip.served) direct += trip.direct_km;
    }
    c.expect(r.result.total.total_km >= direct - 1e-9,
             r.name() + " fleet " + num(r.result.total.total_km) + " < direct " + num(direct));
  }
  return c.outcome(std::to_string(runs) + " exclusive runs");
}

// 8 -----------------------------------------------------------------------
Outcome switching() {
  Checker c;
  GcCurve a{"a", {}}, b{"b", {}};
  for (int x = 0; x <= 10; ++x) {
    a.points.push_back({50 * (x + 1), double(x), 100.0 + 10.0 * x, 1.0, false});
    b.points.push_back({50 * (x + 1), double(x), 160.0, 1.0, false});
  }
  const auto sp = switching_points(a, b);
  c.expect(sp.size() == 1, std::to_string(sp.size()) + " crossings");
  if (!sp.empty()) c.expect(std::abs(sp[0].density - 6.0) <= 1e-9, "crossing at " + num(sp[0].density));
  c.expect(switching_points(a, a).empty(), "identical curves cross");
  return c.outcome(sp.empty() ? "no crossing" : "crossing at x = " + num(sp[0].density));
}

// 9 -----------------------------------------------------------------------
Outcome t_test() {
  Checker c;
  const auto r = paired_t_test(-0.60, 7.52, 170);
  c.expect(std::abs(r.t) >= 1.03 && std::abs(r.t) <= 1.06, "|t| " + num(std::abs(r.t)));
  c.expect(!r.significant_95, "reported significant");
  return c.outcome("|t| = " + num(std::abs(r.t)) + ", not significant");
}

// 10 ----------------------------------------------------------------------
Outcome vkm_trend(const TownSweep& t) {
  Checker c;
  std::vector<std::pair<int, double>> series;
  for (const auto& r : t.runs) {
    if (r.system != SystemType::crowdsourced_shared || r.result.total.served == 0) continue;
    series.push_back({r.level, r.result.total.total_km / static_cast<double>(r.result.total.served)});
  }
  std::sort(series.begin(), series.end());
  std::string trace;
  for (std::size_t i = 0; i < series.size(); ++i) {
    trace += (i ? " " : "") + std::to_string(series[i].first) + ":" + num(std::round(series[i].second * 1000) / 1000);
    if (i > 0) {
      c.expect(series[i].second <= series[i - 1].second * 1.05,
               "rise at " + std::to_string(series[i].first) + "%");
    }
  }
  return c.outcome("shared-ride km/pax " + trace);
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  struct Row {
    int id;
    const char* name;
    bool blocking;
    std::function<Outcome()> run;
  };
  std::optional<TownSweep> town, fixed_town;
  auto sweep = [&]() -> const TownSweep& {
    if (!town) town = run_town(false);
    return *town;
  };
  auto fixed_sweep = [&]() -> const TownSweep& {
    if (!fixed_town) fixed_town = run_town(true);
    return *fixed_town;
  };
  const std::vector<Row> rows{
      {1, "formula reproduction", true, formulas},
      {2, "electrification calibration", true, electrification},
      {3, "dispatcher oracle equivalence", true, dispatcher_oracles},
      {4, "constraint invariants", true, [&] { return constraints(sweep(), fixed_sweep()); }},
      {5, "determinism", true, determinism},
      {6, "gini suite", true, gini_suite},
      {7, "exclusive-mode lower bound", true, [&] { return exclusive_bound(sweep()); }},
      {8, "switching-point detection", true, switching},
      {9, "paired t-test", true, t_test},
      {10, "VKM per passenger trend", false, [&] { return vkm_trend(sweep()); }},
  };
  int blocking_failures = 0;
  for (const auto& row : rows) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = row.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const char* status = o.ok ? "PASS" : (row.blocking ? "FAIL" : "WARN");
    if (!o.ok && row.blocking) ++blocking_failures;
    std::printf("[%s] %2d %-30s %s [%.1fs]\n", status, row.id, row.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return blocking_failures == 0 ? 0 : 1;
}
