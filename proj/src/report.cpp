#include "odt/report.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <vector>

#include "odt/costing.hpp"
#include "odt/csv.hpp"
#include "odt/emissions.hpp"
#include "odt/error.hpp"

namespace odt {

namespace {

csv::Table load(const std::filesystem::path& dir, const char* name) {
  const auto p = dir / name;
  if (!std::filesystem::is_regular_file(p)) throw Error("missing " + p.string());
  return csv::read_file(p);
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

std::string row(const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
  std::string out = " ";
  for (std::size_t i = 0; i < cells.size(); ++i) out += pad(cells[i], widths[i]);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out + "\n";
}

std::string table(const std::vector<std::string>& head, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w(head.size());
  for (std::size_t i = 0; i < head.size(); ++i) w[i] = head[i].size() + 2;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size() + 2);
  }
  std::string out = row(head, w);
  for (const auto& r : rows) out += row(r, w);
  return out;
}

std::vector<std::vector<std::string>> pick(const csv::Table& t, const std::vector<std::string>& cols) {
  std::vector<std::size_t> idx;
  for (const auto& c : cols) idx.push_back(t.require_column(c));
  std::vector<std::vector<std::string>> out;
  for (const auto& r : t.rows) {
    std::vector<std::string> cells;
    for (auto i : idx) cells.push_back(r[i]);
    out.push_back(std::move(cells));
  }
  return out;
}

}  // namespace

std::string report_summary(const std::filesystem::path& dir) {
  const auto gc = load(dir, "gc_curve.csv");
  const auto sw = load(dir, "switching_points.csv");
  const auto em = load(dir, "emissions.csv");
  const auto gi = load(dir, "gini.csv");
  const auto co = load(dir, "costs.csv");

  std::string out;
  std::vector<std::string> systems;
  {
    std::set<std::string> seen;
    const auto c = gc.require_column("system");
    for (const auto& r : gc.rows) {
      if (seen.insert(r[c]).second) systems.push_back(r[c]);
    }
  }
  out += "Systems:";
  for (const auto& s : systems) out += " " + s;
  out += "\n\nGeneralized cost (CAD/yr)\n";
  out += table({"system", "level", "density", "gc", "served", "flag"},
               pick(gc, {"system", "demand_level", "density", "gc", "served_fraction", "flag"}));

  out += "\nSwitching points (riders/km2/day)\n";
  if (sw.rows.empty()) {
    out += " no switching points in sweep range\n";
  } else {
    out += table({"system_a", "system_b", "density", "bracket_lo", "bracket_hi"},
                 pick(sw, {"system_a", "system_b", "density", "bracket_lo", "bracket_hi"}));
  }

  out += "\nNet annual cost (CAD)\n";
  out += table({"scenario", "surge", "CC", "NOC", "NAC", "per_trip"},
               pick(co, {"scenario", "surge_pct", "CC", "NOC", "NAC", "per_trip"}));

  out += "\nEmissions by electrification level\n";
  out += table({"scenario", "elec", "km/day", "t/yr", "vkm/pax", "g/pax-km"},
               pick(em, {"scenario", "elec_level", "total_km_day", "ghg_t_yr", "vkm_per_pax",
                         "ghg_g_per_pax_km"}));

  out += "\nGini\n";
  if (gi.rows.empty()) {
    out += " no equity results\n";
  } else {
    const auto cs = gi.require_column("scenario"), ca = gi.require_column("attribute"),
               cm = gi.require_column("metric"), cg = gi.require_column("gini");
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>> m;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& r : gi.rows) {
      const auto key = std::make_pair(r[cs], r[ca]);
      if (!m.contains(key)) order.push_back(key);
      m[key][r[cm]] = r[cg];
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& k : order) {
      auto& v = m[k];
      rows.push_back({k.first, k.second, v["usage"], v["wait"], v["ivtt"]});
    }
    out += table({"scenario", "attribute", "usage", "wait", "ivtt"}, rows);
  }
  return out;
}

std::string show_params() {
  const CostParameters c;
  const EmissionFactors e;
  auto line = [](const char* k, double v) { return std::string(" ") + pad(k, 24) + csv::exact(v) + "\n"; };
  std::string out = "Cost parameters (CAD)\n";
  out += line("fixed_fees_exclusive", c.fixed_fees_exclusive);
  out += line("fixed_fees_shared", c.fixed_fees_shared);
  out += line("beta_time", c.beta_time);
  out += line("beta_length", c.beta_length);
  out += line("fare", c.fare);
  out += line("vehicle_price", c.vehicle_price);
  out += line("oc_hour", c.oc_hour);
  out += line("oc_km", c.oc_km);
  out += line("wage", c.wage);
  out += line("other_costs", c.other_costs);
  out += line("vot", c.vot);
  out += " surge_pct              ";
  for (std::size_t i = 0; i < c.surge_pct.size(); ++i) out += (i ? "," : "") + csv::exact(c.surge_pct[i]);
  out += "\nEmission factors\n";
  out += line("ghg_km_transit", e.ghg_km_transit);
  out += line("ghg_km_private", e.ghg_km_private);
  out += line("e_kwh_per_km", e.e_kwh_per_km);
  out += line("i_g_per_kwh", e.i_g_per_kwh);
  out += " elec_levels             ";
  for (std::size_t i = 0; i < e.levels.size(); ++i) out += (i ? "," : "") + csv::exact(e.levels[i]);
  return out + "\n";
}

std::string long_format(const std::filesystem::path& dir) {
  std::string out = "file,scenario,system,demand_level,variant,measure,value\n";
  auto emit = [&](const char* file, const std::string& scenario, const std::string& system,
                  const std::string& level, const std::string& variant, const std::string& measure,
                  const std::string& value) {
    out += std::string(file) + "," + scenario + "," + system + "," + level + "," + variant + "," +
           measure + "," + value + "\n";
  };
  {
    const auto t = load(dir, "gc_curve.csv");
    const auto s = t.require_column("system"), l = t.require_column("demand_level");
    for (const auto& r : t.rows) {
      for (const char* m : {"density", "gc", "served_fraction"}) {
        emit("gc_curve", r[s] + "_" + r[l], r[s], r[l], "", m, r[t.require_column(m)]);
      }
    }
  }
  {
    const auto t = load(dir, "costs.csv");
    const auto sc = t.require_column("scenario"), s = t.require_column("system"),
               l = t.require_column("demand_level"), v = t.require_column("surge_pct");
    for (const auto& r : t.rows) {
      for (const char* m : {"CC", "NOC", "NAC", "per_trip"}) {
        emit("costs", r[sc], r[s], r[l], "surge=" + r[v], m, r[t.require_column(m)]);
      }
    }
  }
  {
    const auto t = load(dir, "emissions.csv");
    const auto sc = t.require_column("scenario"), s = t.require_column("system"),
               l = t.require_column("demand_level"), v = t.require_column("elec_level");
    for (const auto& r : t.rows) {
      for (const char* m : {"total_km_day", "ghg_t_yr", "vkm_per_pax", "ghg_g_per_pax_km"}) {
        emit("emissions", r[sc], r[s], r[l], "elec=" + r[v], m, r[t.require_column(m)]);
      }
    }
  }
  return out;
}

}  // namespace odt
