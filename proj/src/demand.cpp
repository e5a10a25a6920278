#include "odt/demand.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "odt/csv.hpp"
#include "odt/error.hpp"

namespace odt {

namespace {

constexpr double kJitterS = 600.0;

int hour_of(double t) { return std::clamp(static_cast<int>(t / 3600.0), 0, 23); }

}  // namespace

std::int64_t round_half_up(double v) { return static_cast<std::int64_t>(std::floor(v + 0.5)); }

DemandSet scale_demand(const DemandSet& base, int level_pct, std::uint64_t seed) {
  if (base.requests.empty()) throw ArgumentError("cannot scale an empty demand set");
  if (level_pct < 50 || level_pct > 500 || level_pct % 50 != 0) {
    throw ArgumentError("demand level must be one of 50, 100, ..., 500 (got " +
                        std::to_string(level_pct) + ")");
  }
  const auto n = base.requests.size();
  const auto target = static_cast<std::size_t>((n * static_cast<std::size_t>(level_pct) + 50) / 100);

  DemandSet out;
  out.level_pct = level_pct;
  out.base_count = n;
  std::mt19937_64 rng(seed);

  if (target <= n) {
    out.requests.reserve(target);
    std::sample(base.requests.begin(), base.requests.end(), std::back_inserter(out.requests),
                target, rng);
    return out;
  }

  std::array<std::vector<std::size_t>, 24> by_hour;
  int next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    by_hour[hour_of(base.requests[i].time_s)].push_back(i);
    next_id = std::max(next_id, base.requests[i].id + 1);
  }

  out.requests = base.requests;
  out.requests.reserve(target);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> jitter(-kJitterS, kJitterS);
  const double last = std::nextafter(kHorizonS, 0.0);
  while (out.requests.size() < target) {
    const auto& src = base.requests[pick(rng)];
    RideRequest r;
    r.id = next_id++;
    r.time_s = std::clamp(src.time_s + jitter(rng), 0.0, last);
    const auto* pool = &by_hour[hour_of(r.time_s)];
    if (pool->empty()) pool = &by_hour[hour_of(src.time_s)];
    std::uniform_int_distribution<std::size_t> od(0, pool->size() - 1);
    const auto& pair = base.requests[(*pool)[od(rng)]];
    r.origin = pair.origin;
    r.destination = pair.destination;
    out.requests.push_back(r);
  }
  return out;
}

SupplySchedule scale_supply(const SupplySchedule& base, double demand_change_pct, double alpha) {
  if (alpha != 0.0 && alpha != 0.5 && alpha != 1.0) {
    throw ArgumentError("alpha must be 0, 0.5 or 1");
  }
  if (!std::isfinite(demand_change_pct)) throw ArgumentError("demand change must be finite");
  SupplySchedule out;
  out.alpha = alpha;
  const double factor = 1.0 + alpha * demand_change_pct / 100.0;
  for (std::size_t h = 0; h < 24; ++h) {
    const int b = base.vehicles[h];
    if (b < 0) throw ArgumentError("negative vehicle count in hour " + std::to_string(h));
    auto v = std::max<std::int64_t>(0, round_half_up(b * factor));
    if (b >= 1) v = std::max<std::int64_t>(v, 1);
    out.vehicles[h] = static_cast<int>(v);
  }
  return out;
}

double demand_density(double requests_per_day, double area_km2) {
  if (!(area_km2 > 0)) throw ArgumentError("area must be > 0 km2");
  return requests_per_day / area_km2;
}

DemandSet generate_synthetic_demand(const Network& net, std::size_t count,
                                    std::span<const double> hourly_profile, std::uint64_t seed) {
  if (net.nodes().size() < 2) throw ArgumentError("synthetic demand needs at least 2 nodes");
  if (hourly_profile.size() != 24) throw ArgumentError("hourly profile needs 24 weights");
  double total = 0;
  for (double w : hourly_profile) {
    if (!(w >= 0) || !std::isfinite(w)) throw ArgumentError("hourly weights must be >= 0");
    total += w;
  }
  if (!(total > 0)) throw ArgumentError("hourly profile is all zero");

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> hour(hourly_profile.begin(), hourly_profile.end());
  std::uniform_real_distribution<double> within(0.0, 3600.0);
  const auto n = net.nodes().size();
  std::uniform_int_distribution<std::size_t> first(0, n - 1), second(0, n - 2);

  DemandSet out;
  out.base_count = count;
  out.requests.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RideRequest r;
    r.id = static_cast<int>(i);
    r.time_s = hour(rng) * 3600.0 + within(rng);
    const auto o = first(rng);
    auto d = second(rng);
    if (d >= o) ++d;
    r.origin = net.nodes()[o].id;
    r.destination = net.nodes()[d].id;
    out.requests.push_back(r);
  }
  std::stable_sort(out.requests.begin(), out.requests.end(),
                   [](const RideRequest& a, const RideRequest& b) { return a.time_s < b.time_s; });
  return out;
}

DemandSet read_requests(const std::filesystem::path& file) {
  auto t = csv::read_file(file);
  const auto c_id = t.require_column("id");
  const auto c_time = t.require_column("time_s");
  const auto c_o = t.require_column("origin");
  const auto c_d = t.require_column("destination");
  DemandSet out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    RideRequest q;
    q.id = static_cast<int>(csv::to_int(t, r, c_id));
    q.time_s = csv::to_double(t, r, c_time);
    q.origin = static_cast<int>(csv::to_int(t, r, c_o));
    q.destination = static_cast<int>(csv::to_int(t, r, c_d));
    if (q.time_s < 0 || q.time_s >= kHorizonS) {
      throw ParseError(t.source, t.line_numbers[r], "request time outside [0, 86400)");
    }
    if (q.origin == q.destination) {
      throw ParseError(t.source, t.line_numbers[r], "origin equals destination");
    }
    out.requests.push_back(q);
  }
  out.base_count = out.requests.size();
  return out;
}

void write_requests(const DemandSet& demand, const std::filesystem::path& file) {
  std::string s = "id,time_s,origin,destination\n";
  for (const auto& r : demand.requests) {
    s += std::to_string(r.id) + "," + csv::exact(r.time_s) + "," + std::to_string(r.origin) + "," +
         std::to_string(r.destination) + "\n";
  }
  csv::write_atomic(file, s);
}

void validate_demand(const DemandSet& demand, const Network& net) {
  std::vector<int> ids;
  ids.reserve(demand.requests.size());
  for (const auto& r : demand.requests) {
    const auto tag = "request " + std::to_string(r.id);
    if (!net.has_node(r.origin)) throw ValidationError(tag + ": unknown origin " + std::to_string(r.origin));
    if (!net.has_node(r.destination)) {
      throw ValidationError(tag + ": unknown destination " + std::to_string(r.destination));
    }
    if (r.origin == r.destination) throw ValidationError(tag + ": origin equals destination");
    if (!(r.time_s >= 0 && r.time_s < kHorizonS)) throw ValidationError(tag + ": time outside horizon");
    ids.push_back(r.id);
  }
  std::sort(ids.begin(), ids.end());
  if (auto it = std::adjacent_find(ids.begin(), ids.end()); it != ids.end()) {
    throw ValidationError("duplicate request id " + std::to_string(*it));
  }
}

SupplySchedule read_supply(const std::filesystem::path& file) {
  auto t = csv::read_file(file);
  const auto c_h = t.require_column("hour");
  const auto c_v = t.require_column("vehicles");
  SupplySchedule s;
  std::array<bool, 24> seen{};
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto h = csv::to_int(t, r, c_h);
    const auto v = csv::to_int(t, r, c_v);
    if (h < 0 || h > 23) throw ParseError(t.source, t.line_numbers[r], "hour outside 0..23");
    if (v < 0) throw ParseError(t.source, t.line_numbers[r], "negative vehicle count");
    if (seen[h]) throw ParseError(t.source, t.line_numbers[r], "hour listed twice");
    seen[h] = true;
    s.vehicles[h] = static_cast<int>(v);
  }
  return s;
}

void write_supply(const SupplySchedule& supply, const std::filesystem::path& file) {
  std::string s = "hour,vehicles\n";
  for (std::size_t h = 0; h < 24; ++h) {
    s += std::to_string(h) + "," + std::to_string(supply.vehicles[h]) + "\n";
  }
  csv::write_atomic(file, s);
}

}  // namespace odt
