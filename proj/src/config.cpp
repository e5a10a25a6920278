#include "odt/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace odt {

using json = nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

namespace {

// Reads one JSON object, remembering which keys were consumed so the rest can
// be reported as unknown.
class Section {
 public:
  Section(const json* obj, std::string name, ConfigCheck& check)
      : obj_(obj), name_(std::move(name)), check_(check) {
    if (obj_ && !obj_->is_object()) {
      error("must be an object");
      obj_ = nullptr;
    }
  }

  bool present() const { return obj_ != nullptr; }
  bool has(const char* key) {
    seen_.insert(key);
    return obj_ && obj_->contains(key);
  }
  const json* raw(const char* key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }
  Section child(const char* key) { return Section(raw(key), path(key), check_); }

  void error(const std::string& msg) { check_.errors.push_back(name_ + ": " + msg); }
  void error(const char* key, const std::string& msg) { check_.errors.push_back(path(key) + ": " + msg); }

  template <class T>
  void get(const char* key, T& out) {
    const json* v = raw(key);
    if (!v) return;
    try {
      out = v->get<T>();
    } catch (const json::exception&) {
      error(key, "has the wrong type");
    }
  }

  void number(const char* key, double& out, double lo, double hi, bool lo_open = false) {
    const json* v = raw(key);
    if (!v) return;
    if (!v->is_number()) {
      error(key, "must be a number");
      return;
    }
    const double x = v->get<double>();
    if (!(lo_open ? x > lo : x >= lo) || !(x <= hi)) {
      error(key, "out of range");
      return;
    }
    out = x;
  }

  void finish() {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items()) {
      if (!seen_.contains(k)) check_.warnings.push_back(path(k.c_str()) + ": unknown key ignored");
    }
  }

  std::string path(const char* key) const { return name_.empty() ? key : name_ + "." + key; }

 private:
  const json* obj_;
  std::string name_;
  ConfigCheck& check_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(Section& s, const char* key, const std::filesystem::path& p) {
  if (!std::filesystem::is_regular_file(p)) s.error(key, "file not found: " + p.string());
}

std::optional<SupplySchedule> read_schedule(Section& s, const char* key,
                                            const std::filesystem::path& base) {
  const json* v = s.raw(key);
  if (!v) return std::nullopt;
  if (v->is_string()) {
    const auto p = resolve(base, v->get<std::string>());
    if (!std::filesystem::is_regular_file(p)) {
      s.error(key, "file not found: " + p.string());
      return std::nullopt;
    }
    try {
      return read_supply(p);
    } catch (const std::exception& e) {
      s.error(key, e.what());
      return std::nullopt;
    }
  }
  if (!v->is_array() || v->size() != 24) {
    s.error(key, "must be a supply.csv path or 24 hourly vehicle counts");
    return std::nullopt;
  }
  SupplySchedule out;
  for (std::size_t h = 0; h < 24; ++h) {
    const auto& c = (*v)[h];
    if (!c.is_number_integer() || c.get<int>() < 0) {
      s.error(key, "hourly counts must be integers >= 0");
      return std::nullopt;
    }
    out.vehicles[h] = c.get<int>();
  }
  return out;
}

void read_network(Section s, Config& c, const std::filesystem::path& base) {
  if (!s.present()) {
    s.error("section is required");
    return;
  }
  if (s.has("grid")) {
    auto g = s.child("grid");
    GridSpec spec;
    g.get("rows", spec.rows);
    g.get("cols", spec.cols);
    g.number("spacing_m", spec.spacing_m, 0, 1e7, true);
    g.number("speed_mps", spec.speed_mps, 0, 1e3, true);
    if (spec.rows < 2 || spec.cols < 2) g.error("rows and cols must be >= 2");
    g.finish();
    c.network.grid = spec;
  }
  std::string nodes, edges, zones;
  s.get("nodes", nodes);
  s.get("edges", edges);
  s.get("zones", zones);
  if (!nodes.empty()) {
    c.network.nodes = resolve(base, nodes);
    require_file(s, "nodes", *c.network.nodes);
  }
  if (!edges.empty()) {
    c.network.edges = resolve(base, edges);
    require_file(s, "edges", *c.network.edges);
  }
  if (!zones.empty()) {
    c.network.zones = resolve(base, zones);
    require_file(s, "zones", *c.network.zones);
  }
  if (s.has("area_km2")) {
    double a = 0;
    s.number("area_km2", a, 0, 1e9, true);
    if (a > 0) c.network.area_km2 = a;
  }
  const bool files = c.network.nodes || c.network.edges;
  if (c.network.grid && files) s.error("give either grid or nodes/edges files, not both");
  if (!c.network.grid && !files) s.error("missing grid or nodes/edges files");
  if (files && !(c.network.nodes && c.network.edges)) s.error("nodes and edges files go together");
  s.finish();
}

void read_demand(Section s, Config& c, const std::filesystem::path& base) {
  if (!s.present()) {
    s.error("section is required");
    return;
  }
  std::string req;
  s.get("requests", req);
  if (!req.empty()) {
    c.demand.requests = resolve(base, req);
    require_file(s, "requests", *c.demand.requests);
  }
  if (s.has("synthetic")) {
    auto syn = s.child("synthetic");
    if (!syn.has("count")) syn.error("missing count");
    syn.get("count", c.demand.synthetic_count);
    syn.get("hourly_profile", c.demand.hourly_profile);
    if (c.demand.hourly_profile.size() != 24) syn.error("hourly_profile needs 24 weights");
    double total = 0;
    for (double w : c.demand.hourly_profile) {
      if (!(w >= 0)) syn.error("hourly_profile weights must be >= 0");
      total += w;
    }
    if (!(total > 0)) syn.error("hourly_profile weights are all zero");
    syn.finish();
  }
  if (c.demand.requests && s.has("synthetic")) s.error("give either requests or synthetic, not both");
  if (!c.demand.requests && !s.has("synthetic")) s.error("missing requests or synthetic");
  s.get("levels", c.demand.levels);
  if (c.demand.levels.empty()) s.error("levels", "must not be empty");
  std::set<int> seen;
  for (int l : c.demand.levels) {
    if (l < 50 || l > 500 || l % 50 != 0) s.error("levels", "each level must be 50..500 in steps of 50");
    if (!seen.insert(l).second) s.error("levels", "duplicate level " + std::to_string(l));
  }
  std::sort(c.demand.levels.begin(), c.demand.levels.end());
  s.finish();
}

void read_supply_section(Section s, Config& c, const std::filesystem::path& base) {
  if (!s.present()) return;
  if (s.has("alpha")) {
    const json* a = s.raw("alpha");
    if (!a->is_number()) {
      s.error("alpha", "must be a number");
    } else {
      const double v = a->get<double>();
      if (v != 0.0 && v != 0.5 && v != 1.0) {
        s.error("alpha", "must be 0, 0.5 or 1");
      } else {
        c.supply.alpha = v;
      }
    }
  }
  c.supply.crowdsourced = read_schedule(s, "crowdsourced", base);
  c.supply.dedicated = read_schedule(s, "dedicated", base);
  if (c.supply.crowdsourced) c.supply.crowdsourced->alpha = c.supply.alpha;
  if (c.supply.dedicated) c.supply.dedicated->alpha = c.supply.alpha;
  s.finish();
}

void read_route(Section r, RouteSpec& route) {
  r.get("stops", route.stops);
  if (route.stops.size() < 2) r.error("stops needs at least 2 node ids");
  r.number("cruise_speed_mps", route.cruise_speed_mps, 0, 1e3, true);
  if (const json* w = r.raw("window_h")) {
    if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number() || !(*w)[1].is_number()) {
      r.error("window_h", "must be [start_hour, end_hour]");
    } else {
      const double a = (*w)[0].get<double>(), b = (*w)[1].get<double>();
      if (!(a >= 0 && b <= 24 && a < b)) {
        r.error("window_h", "must satisfy 0 <= start < end <= 24");
      } else {
        route.window_start_s = a * 3600.0;
        route.window_end_s = b * 3600.0;
      }
    }
  }
  r.number("catchment_min", route.catchment_min, 0, 600, true);
  double walk_kmh = route.walk_speed_mps * 3.6;
  r.number("walk_kmh", walk_kmh, 0, 50, true);
  route.walk_speed_mps = walk_kmh / 3.6;
  r.number("dwell_s", route.dwell_s, 0, 3600);
  if (const json* v = r.raw("vehicles")) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_integer() ||
        !(*v)[1].is_number_integer() || (*v)[0].get<int>() < 1 || (*v)[1].get<int>() < 1) {
      r.error("vehicles", "must be [count_below_threshold, count_at_or_above], each >= 1");
    } else {
      route.vehicles_below_threshold = (*v)[0].get<int>();
      route.vehicles_at_or_above = (*v)[1].get<int>();
    }
  }
  r.get("threshold_pct", route.threshold_level_pct);
  r.finish();
}

void read_system(Section s, Config& c) {
  if (!s.present()) {
    s.error("section is required");
    return;
  }
  std::vector<std::string> types;
  if (!s.has("types")) s.error("missing types");
  s.get("types", types);
  for (const auto& t : types) {
    if (auto st = parse_system_type(t)) {
      if (std::find(c.systems.begin(), c.systems.end(), *st) != c.systems.end()) {
        s.error("types", "duplicate system " + t);
      } else {
        c.systems.push_back(*st);
      }
    } else {
      s.error("types", "unknown system " + t);
    }
  }
  auto& p = c.policy;
  s.number("max_detour", p.max_detour, 1, 100);
  double wait_min = p.max_wait_s / 60.0;
  s.number("max_wait_min", wait_min, 0, 1440, true);
  p.max_wait_s = wait_min * 60.0;
  s.number("batch_s", p.batch_s, 0, 3600, true);
  s.get("capacity", p.capacity);
  if (p.capacity < 1) s.error("capacity", "must be >= 1");
  s.get("hybrid_crowdsourced_shared", p.hybrid_crowdsourced_shared);
  if (s.has("route")) {
    RouteSpec route;
    read_route(s.child("route"), route);
    p.route = route;
  }
  s.finish();
}

void read_costs(Section s, CostParameters& p) {
  if (!s.present()) return;
  const double big = 1e12;
  s.number("fixed_fees_exclusive", p.fixed_fees_exclusive, 0, big);
  s.number("fixed_fees_shared", p.fixed_fees_shared, 0, big);
  s.number("beta_time", p.beta_time, 0, big);
  s.number("beta_length", p.beta_length, 0, big);
  s.number("fare", p.fare, 0, big);
  s.number("vehicle_price", p.vehicle_price, 0, big);
  s.number("oc_hour", p.oc_hour, 0, big);
  s.number("oc_km", p.oc_km, 0, big);
  s.number("wage", p.wage, 0, big);
  s.number("other_costs", p.other_costs, 0, big);
  s.get("frt_vkm_fleet_total", p.frt_vkm_fleet_total);
  s.finish();
}

void read_emissions(Section s, EmissionFactors& f) {
  if (!s.present()) return;
  s.number("ghg_km_transit", f.ghg_km_transit, 0, 1, true);
  s.number("ghg_km_private", f.ghg_km_private, 0, 1, true);
  s.number("e_kwh_per_km", f.e_kwh_per_km, 0, 100, true);
  s.number("i_g_per_kwh", f.i_g_per_kwh, 0, 1e5, true);
  s.finish();
}

void read_analysis(Section s, Config& c) {
  if (!s.present()) return;
  s.number("vot", c.costs.vot, 0, 1e6);
  s.get("surge_pct", c.costs.surge_pct);
  for (double v : c.costs.surge_pct) {
    if (!(v >= 0)) s.error("surge_pct", "values must be >= 0");
  }
  if (std::find(c.costs.surge_pct.begin(), c.costs.surge_pct.end(), 0.0) == c.costs.surge_pct.end()) {
    c.costs.surge_pct.insert(c.costs.surge_pct.begin(), 0.0);
  }
  s.get("elec_levels", c.emissions.levels);
  for (double v : c.emissions.levels) {
    if (!(v >= 0 && v <= 1)) s.error("elec_levels", "values must lie in [0, 1]");
  }
  s.number("served_threshold", c.analysis.served_threshold, 0, 1);
  s.get("equity_levels", c.analysis.equity_levels);
  s.get("equity_attributes", c.analysis.equity_attributes);
  for (const auto& a : c.analysis.equity_attributes) {
    if (std::find_if(std::begin(kZoneAttributes), std::end(kZoneAttributes),
                     [&](const char* k) { return a == k; }) == std::end(kZoneAttributes)) {
      s.error("equity_attributes", "unknown attribute " + a);
    }
  }
  s.get("concentration_ordering", c.analysis.concentration_ordering);
  s.finish();
}

void cross_check(Config& c, ConfigCheck& check) {
  auto err = [&](const std::string& m) { check.errors.push_back(m); };
  for (auto sys : c.systems) {
    const std::string name = to_string(sys);
    if (has_crowdsourced(sys) && !c.supply.crowdsourced) err("supply.crowdsourced: required by " + name);
    if (has_dedicated(sys) && !c.supply.dedicated) err("supply.dedicated: required by " + name);
    if ((has_frt(sys) || sys == SystemType::hybrid_odt) && !c.policy.route) err("system.route: required by " + name);
  }
  for (int l : c.analysis.equity_levels) {
    if (std::find(c.demand.levels.begin(), c.demand.levels.end(), l) == c.demand.levels.end()) {
      check.warnings.push_back("analysis.equity_levels: level " + std::to_string(l) +
                               " is not in demand.levels; skipped");
    }
  }
}

}  // namespace

ConfigCheck validate_config_text(const std::string& text, const std::filesystem::path& source) {
  ConfigCheck check;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    check.errors.push_back(source.string() + ": " + e.what());
    return check;
  }
  if (!root.is_object()) {
    check.errors.push_back(source.string() + ": top level must be an object");
    return check;
  }
  Config c;
  c.source = source;
  c.sha256 = sha256_hex(text);
  const auto base = source.has_parent_path() ? source.parent_path() : std::filesystem::path(".");
  Section top(&root, "", check);

  if (const json* seed = top.raw("seed")) {
    if (!seed->is_number_unsigned()) {
      top.error("seed", "must be a nonnegative integer");
    } else {
      c.seed = seed->get<std::uint64_t>();
    }
  }
  std::string out;
  top.get("output", out);
  if (!out.empty()) c.output = resolve(base, out);

  read_network(top.child("network"), c, base);
  read_demand(top.child("demand"), c, base);
  read_supply_section(top.child("supply"), c, base);
  read_system(top.child("system"), c);
  read_costs(top.child("costs"), c.costs);
  read_emissions(top.child("emissions"), c.emissions);
  read_analysis(top.child("analysis"), c);
  top.finish();
  cross_check(c, check);
  check.config = std::move(c);
  return check;
}

ConfigCheck validate_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    ConfigCheck check;
    check.errors.push_back("cannot read config " + file.string());
    return check;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return validate_config_text(ss.str(), file);
}

}  // namespace odt
