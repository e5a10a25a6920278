#include "odt/pipeline.hpp"

#include <omp.h>
#include <unistd.h>

#include <algorithm>
#include <exception>
#include <fstream>
#include <set>

#include <json.hpp>

#include "odt/costing.hpp"
#include "odt/csv.hpp"
#include "odt/emissions.hpp"
#include "odt/equity.hpp"
#include "odt/error.hpp"

namespace odt {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Job {
  SystemType system;
  int level;
  const DemandSet* demand;
};

std::vector<Job> plan_jobs(const Config& config, const std::map<int, DemandSet>& demands) {
  std::vector<Job> jobs;
  for (auto sys : config.systems) {
    for (int level : config.demand.levels) jobs.push_back({sys, level, &demands.at(level)});
  }
  return jobs;
}

std::map<int, DemandSet> level_demands(const Config& config, const StudyInputs& inputs) {
  std::map<int, DemandSet> out;
  for (int level : config.demand.levels) out[level] = level_demand(config, inputs, level);
  return out;
}

ScenarioRun run_one(const Config& config, const StudyInputs& inputs, const Job& job,
                    const RunHooks* hooks = nullptr) {
  Router router(inputs.network, inputs.table);
  SupplyPlan supply;
  const double change = job.level - 100.0;
  if (config.supply.crowdsourced) {
    supply.crowdsourced = scale_supply(*config.supply.crowdsourced, change, config.supply.alpha);
  }
  if (config.supply.dedicated) {
    supply.dedicated = scale_supply(*config.supply.dedicated, change, config.supply.alpha);
  }
  ScenarioPolicy policy = config.policy;
  policy.system = job.system;
  policy.demand_level_pct = job.level;
  ScenarioRun run;
  run.system = job.system;
  run.level = job.level;
  run.requests = job.demand->requests.size();
  run.result =
      run_scenario(router, *job.demand, supply, policy, engine_seed(config.seed, job.level), hooks);
  return run;
}

const ScenarioRun& base_run(const Config& config, const std::vector<ScenarioRun>& runs) {
  const auto sys = config.systems.front();
  for (const auto& r : runs) {
    if (r.system == sys && r.level == 100) return r;
  }
  for (const auto& r : runs) {
    if (r.system == sys) return r;
  }
  throw Error("no scenario was run");
}

std::string opt(const std::optional<double>& v) { return v ? csv::exact(*v) : std::string(); }

std::string surge_tag(SystemType s, double surge) {
  std::string tag = to_string(s);
  if (surge > 0) tag += "+surge" + csv::exact(surge);
  return tag;
}

}  // namespace

std::string ScenarioRun::name() const { return std::string(to_string(system)) + "_" + std::to_string(level); }

std::uint64_t demand_seed(std::uint64_t seed, int level) {
  return splitmix(seed ^ splitmix(static_cast<std::uint64_t>(level)));
}
std::uint64_t engine_seed(std::uint64_t seed, int level) {
  return splitmix(seed ^ splitmix(0x10000ULL + static_cast<std::uint64_t>(level)));
}

DemandSet level_demand(const Config& config, const StudyInputs& inputs, int level) {
  if (inputs.base_demand.requests.empty()) return DemandSet{{}, level, 0};
  return scale_demand(inputs.base_demand, level, demand_seed(config.seed, level));
}

ScenarioRun run_scenario_at(const Config& config, const StudyInputs& inputs, SystemType system,
                            int level, const RunHooks* hooks) {
  const auto demand = level_demand(config, inputs, level);
  return run_one(config, inputs, {system, level, &demand}, hooks);
}

StudyInputs prepare_inputs(const Config& config) {
  StudyInputs in;
  const auto& n = config.network;
  if (n.grid) {
    in.network = generate_grid(n.grid->rows, n.grid->cols, n.grid->spacing_m, n.grid->speed_mps,
                               config.seed);
  } else {
    in.network = load_network(*n.nodes, *n.edges, n.zones, n.area_km2);
  }
  if (config.demand.requests) {
    in.base_demand = read_requests(*config.demand.requests);
  } else {
    in.base_demand = generate_synthetic_demand(in.network, config.demand.synthetic_count,
                                               config.demand.hourly_profile, config.seed);
  }
  in.base_demand.level_pct = 100;
  in.base_demand.base_count = in.base_demand.requests.size();
  validate_demand(in.base_demand, in.network);
  if (config.policy.route) {
    for (int s : config.policy.route->stops) {
      if (!in.network.has_node(s)) {
        throw ValidationError("system.route: stop " + std::to_string(s) + " is not a network node");
      }
    }
  }
  in.table = std::make_shared<DistanceTable>(DistanceTable::compute(in.network));
  return in;
}

std::vector<ScenarioRun> run_sweep(const Config& config, const StudyInputs& inputs, int jobs) {
  const auto demands = level_demands(config, inputs);
  const auto plan = plan_jobs(config, demands);
  std::vector<ScenarioRun> runs(plan.size());
  std::vector<std::exception_ptr> errors(plan.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const long count = static_cast<long>(plan.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < count; ++i) {
    try {
      runs[static_cast<std::size_t>(i)] = run_one(config, inputs, plan[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return runs;
}

std::vector<ScenarioRun> run_sweep_serial(const Config& config, const StudyInputs& inputs) {
  const auto demands = level_demands(config, inputs);
  std::vector<ScenarioRun> runs;
  for (const auto& job : plan_jobs(config, demands)) runs.push_back(run_one(config, inputs, job));
  return runs;
}

std::vector<GcCurve> gc_curves(const Config& config, const StudyInputs& inputs,
                               const std::vector<ScenarioRun>& runs) {
  std::vector<GcCurve> curves;
  for (auto sys : config.systems) {
    for (double surge : config.costs.surge_pct) {
      if (surge > 0 && !surge_applies(sys)) continue;
      GcCurve c;
      c.system = surge_tag(sys, surge);
      for (const auto& r : runs) {
        if (r.system != sys) continue;
        const auto cost = system_cost(r.result, sys, config.costs, surge,
                                      config.policy.hybrid_crowdsourced_shared);
        const auto& t = r.result.total;
        GcPoint p;
        p.demand_level = r.level;
        p.density = demand_density(static_cast<double>(r.requests), inputs.network.area_km2());
        p.gc = generalized_cost(t.avg_walk_min, t.avg_wait_min, t.avg_ivtt_min,
                                static_cast<double>(t.served), config.costs.vot, to_cad(cost.nac));
        p.served_fraction = r.requests > 0 ? static_cast<double>(t.served) / static_cast<double>(r.requests) : 1.0;
        c.points.push_back(p);
      }
      std::sort(c.points.begin(), c.points.end(),
                [](const GcPoint& a, const GcPoint& b) { return a.demand_level < b.demand_level; });
      flag_capacity(c, config.analysis.served_threshold);
      curves.push_back(std::move(c));
    }
  }
  return curves;
}

std::map<std::string, std::string> render_outputs(const Config& config, const StudyInputs& inputs,
                                                  const std::vector<ScenarioRun>& runs,
                                                  std::vector<std::string>& warnings) {
  std::map<std::string, std::string> files;
  const auto& base = base_run(config, runs);
  files["trips.csv"] = trips_csv(base.result);
  files["fleet.csv"] = fleet_csv(base.result);
  for (const auto& r : runs) {
    files["scenarios/" + r.name() + "/trips.csv"] = trips_csv(r.result);
    files["scenarios/" + r.name() + "/fleet.csv"] = fleet_csv(r.result);
  }

  std::string costs = "scenario,demand_level,system,CC,NOC,NAC,per_trip,surge_pct\n";
  for (const auto& r : runs) {
    for (double surge : config.costs.surge_pct) {
      if (surge > 0 && !surge_applies(r.system)) continue;
      const auto c = system_cost(r.result, r.system, config.costs, surge,
                                 config.policy.hybrid_crowdsourced_shared);
      if (c.surplus && surge == 0) {
        warnings.push_back(r.name() + ": crowdsourced fares exceed per-trip operating cost");
      }
      costs += r.name() + "," + std::to_string(r.level) + "," + to_string(r.system) + "," +
               format_cents(c.cc) + "," + format_cents(c.noc) + "," + format_cents(c.nac) + "," +
               csv::fixed(c.per_trip, 4) + "," + csv::exact(surge) + "\n";
    }
  }
  files["costs.csv"] = std::move(costs);

  std::string em = "scenario,demand_level,system,elec_level,total_km_day,ghg_t_yr,vkm_per_pax,ghg_g_per_pax_km\n";
  {
    Router router(inputs.network, inputs.table);
    const auto demands = level_demands(config, inputs);
    for (const auto& r : runs) {
      for (double level : config.emissions.levels) {
        const auto e = per_passenger_metrics(r.result, config.emissions, level);
        em += r.name() + "," + std::to_string(r.level) + "," + to_string(r.system) + "," +
              csv::exact(level) + "," + csv::exact(e.total_km_day) + "," + csv::exact(e.ghg_t_yr) +
              "," + opt(e.vkm_per_pax) + "," + opt(e.ghg_g_per_pax_km) + "\n";
      }
    }
    for (const auto& [level, d] : demands) {
      const auto b = baseline_private(d, router, config.emissions);
      if (b.excluded > 0) {
        warnings.push_back("private baseline at " + std::to_string(level) + "%: " +
                           std::to_string(b.excluded) + " unroutable requests excluded");
      }
      em += "private_baseline_" + std::to_string(level) + "," + std::to_string(level) +
            ",private_baseline,0," + csv::exact(b.report.total_km_day) + "," +
            csv::exact(b.report.ghg_t_yr) + "," + opt(b.report.vkm_per_pax) + "," +
            opt(b.report.ghg_g_per_pax_km) + "\n";
    }
  }
  files["emissions.csv"] = std::move(em);

  const auto curves = gc_curves(config, inputs, runs);
  std::string gc = "system,demand_level,density,gc,served_fraction,flag\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      gc += c.system + "," + std::to_string(p.demand_level) + "," + csv::exact(p.density) + "," +
            csv::fixed(p.gc, 2) + "," + csv::exact(p.served_fraction) + "," +
            (p.capacity_flag ? "capacity_exceeded" : "") + "\n";
    }
  }
  files["gc_curve.csv"] = std::move(gc);

  std::string sw = "system_a,system_b,density,bracket_lo,bracket_hi\n";
  for (double surge : config.costs.surge_pct) {
    // Each surge group compares surge-priced systems against the rest; pairs
    // without a surge-priced member belong to the zero group.
    std::vector<std::pair<const GcCurve*, bool>> group;
    for (auto sys : config.systems) {
      const bool surged = surge > 0 && surge_applies(sys);
      const auto tag = surge_tag(sys, surged ? surge : 0.0);
      for (const auto& c : curves) {
        if (c.system == tag) group.emplace_back(&c, surged);
      }
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        if (surge > 0 && !group[i].second && !group[j].second) continue;
        try {
          for (const auto& s : switching_points(*group[i].first, *group[j].first)) {
            sw += s.system_a + "," + s.system_b + "," + csv::exact(s.density) + "," +
                  csv::exact(s.bracket_lo) + "," + csv::exact(s.bracket_hi) + "\n";
          }
        } catch (const InsufficientDataError& e) {
          warnings.push_back(group[i].first->system + " vs " + group[j].first->system + ": " + e.what());
        }
      }
    }
  }
  files["switching_points.csv"] = std::move(sw);

  std::string gini_csv = "scenario,demand_level,system,attribute,metric,gini\n";
  if (!inputs.network.has_zones()) {
    warnings.push_back("network has no zones; equity analysis skipped");
  } else {
    for (const auto& r : runs) {
      const auto& lv = config.analysis.equity_levels;
      if (std::find(lv.begin(), lv.end(), r.level) == lv.end()) continue;
      const auto rep = equity_report(r.result, inputs.network.zones(), config.analysis.equity_attributes,
                                     config.analysis.concentration_ordering);
      for (const auto& w : rep.warnings) warnings.push_back(r.name() + ": " + w);
      for (const auto& g : rep.results) {
        gini_csv += r.name() + "," + std::to_string(r.level) + "," + to_string(r.system) + "," +
                    g.attribute + "," + to_string(g.metric) + "," + csv::exact(g.gini) + "\n";
        files["scenarios/" + r.name() + "/lorenz_" + g.attribute + "_" + to_string(g.metric) + ".csv"] =
            lorenz_csv(g.curve);
      }
    }
  }
  files["gini.csv"] = std::move(gini_csv);
  return files;
}

std::string manifest_json(const Config& config, const std::map<std::string, std::string>& files) {
  nlohmann::json m;
  m["tool"] = "odt-lab";
  m["version"] = kToolVersion;
  m["config_sha256"] = config.sha256;
  m["seed"] = config.seed;
  nlohmann::json outs = nlohmann::json::object();
  for (const auto& [path, body] : files) outs[path] = sha256_hex(body);
  m["outputs"] = outs;
  return m.dump(2) + "\n";
}

void write_outputs(const std::filesystem::path& dir, const Config& config,
                   const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  const fs::path target = fs::absolute(dir);
  if (fs::exists(target) && !fs::exists(target / "manifest.json")) {
    throw Error("refusing to replace " + target.string() + ": not an odt-lab output folder");
  }
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(static_cast<unsigned long>(::getpid()));
  fs::remove_all(tmp);
  try {
    for (const auto& [rel, body] : files) {
      const auto p = tmp / rel;
      fs::create_directories(p.parent_path());
      std::ofstream out(p, std::ios::binary);
      out << body;
      if (!out) throw Error("cannot write " + p.string());
    }
    {
      std::ofstream out(tmp / "manifest.json", std::ios::binary);
      out << manifest_json(config, files);
      if (!out) throw Error("cannot write manifest");
    }
    if (fs::exists(target)) fs::remove_all(target);
    fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
}

}  // namespace odt
