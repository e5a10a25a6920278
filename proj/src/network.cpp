#include "odt/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

#include "odt/csv.hpp"
#include "odt/error.hpp"

namespace odt {

namespace {

std::vector<std::size_t> build_csr(std::size_t n, const std::vector<std::size_t>& key,
                                   std::vector<std::size_t>& start) {
  start.assign(n + 1, 0);
  for (auto k : key) ++start[k + 1];
  for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
  std::vector<std::size_t> list(key.size());
  auto fill = start;
  for (std::size_t e = 0; e < key.size(); ++e) list[fill[key[e]]++] = e;
  return list;
}

// Iterative Kosaraju; returns the number of strongly connected components.
std::size_t count_sccs(const Network& net) {
  const auto n = net.nodes().size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      auto out = net.out_edges(v);
      if (i < out.size()) {
        auto w = net.edge_to_index(out[i++]);
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<char> assigned(n, 0);
  std::size_t comps = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned[*it]) continue;
    ++comps;
    std::vector<std::size_t> stack{*it};
    assigned[*it] = 1;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto e : net.in_edges(v)) {
        auto u = net.edge_from_index(e);
        if (!assigned[u]) {
          assigned[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return comps;
}

std::size_t count_unreachable(const Network& net) {
  const auto n = net.nodes().size();
  std::size_t missing = 0;
  std::vector<char> seen(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto e : net.out_edges(v)) {
        auto w = net.edge_to_index(e);
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
      }
    }
    missing += n - reached;
  }
  return missing;
}

}  // namespace

Network::Network(std::vector<Node> nodes, std::vector<Edge> edges, std::vector<Zone> zones,
                 double area_km2)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), zones_(std::move(zones)),
      area_km2_(area_km2) {
  if (!(area_km2_ > 0) || !std::isfinite(area_km2_)) {
    throw ValidationError("network area must be > 0 km2");
  }
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& nd = nodes_[i];
    if (!std::isfinite(nd.x) || !std::isfinite(nd.y)) {
      throw ValidationError("node " + std::to_string(nd.id) + " has non-finite coordinates");
    }
    if (!index_.emplace(nd.id, i).second) {
      throw ValidationError("duplicate node id " + std::to_string(nd.id));
    }
  }

  std::unordered_set<int> edge_ids;
  edge_from_.reserve(edges_.size());
  edge_to_.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (!edge_ids.insert(e.id).second) {
      throw ValidationError("duplicate edge id " + std::to_string(e.id));
    }
    for (int end : {e.from, e.to}) {
      if (!index_.contains(end)) {
        throw ValidationError("edge " + std::to_string(e.id) + " references unknown node " +
                              std::to_string(end));
      }
    }
    if (!(e.length_m > 0) || !(e.speed_mps > 0)) {
      throw ValidationError("edge " + std::to_string(e.id) + " needs length > 0 and speed > 0");
    }
    edge_from_.push_back(index_.at(e.from));
    edge_to_.push_back(index_.at(e.to));
    const double straight = euclidean_m(e.from, e.to);
    if (e.length_m < straight * (1 - 1e-9)) {
      std::ostringstream w;
      w << "edge " << e.id << " length " << e.length_m << " m is shorter than the straight line "
        << straight << " m";
      warnings_.push_back(w.str());
    }
  }
  out_list_ = build_csr(nodes_.size(), edge_from_, out_start_);
  in_list_ = build_csr(nodes_.size(), edge_to_, in_start_);

  // Zone membership: the nodes.csv zone_id column and Zone::members must agree.
  if (!zones_.empty()) {
    std::unordered_map<int, std::size_t> zone_pos;
    for (std::size_t z = 0; z < zones_.size(); ++z) {
      if (!zone_pos.emplace(zones_[z].zone_id, z).second) {
        throw ValidationError("duplicate zone id " + std::to_string(zones_[z].zone_id));
      }
      if (zones_[z].population < 0) {
        throw ValidationError("zone " + std::to_string(zones_[z].zone_id) +
                              " has negative population");
      }
    }
    std::unordered_map<int, int> member_of;
    for (auto& z : zones_) {
      for (int m : z.members) {
        if (!index_.contains(m)) {
          throw ValidationError("zone " + std::to_string(z.zone_id) + " references unknown node " +
                                std::to_string(m));
        }
        auto [it, fresh] = member_of.emplace(m, z.zone_id);
        if (!fresh && it->second != z.zone_id) {
          throw ValidationError("node " + std::to_string(m) + " belongs to zones " +
                                std::to_string(it->second) + " and " + std::to_string(z.zone_id));
        }
      }
    }
    for (auto& nd : nodes_) {
      if (nd.zone_id) {
        if (!zone_pos.contains(*nd.zone_id)) {
          throw ValidationError("node " + std::to_string(nd.id) + " references unknown zone " +
                                std::to_string(*nd.zone_id));
        }
        auto it = member_of.find(nd.id);
        if (it != member_of.end() && it->second != *nd.zone_id) {
          throw ValidationError("node " + std::to_string(nd.id) + " belongs to zones " +
                                std::to_string(it->second) + " and " +
                                std::to_string(*nd.zone_id));
        }
        if (it == member_of.end()) {
          zones_[zone_pos[*nd.zone_id]].members.push_back(nd.id);
          member_of.emplace(nd.id, *nd.zone_id);
        }
      } else if (auto it = member_of.find(nd.id); it != member_of.end()) {
        nd.zone_id = it->second;
      }
    }
    for (auto& z : zones_) std::sort(z.members.begin(), z.members.end());
  } else {
    for (const auto& nd : nodes_) {
      if (nd.zone_id) {
        throw ValidationError("node " + std::to_string(nd.id) + " references zone " +
                              std::to_string(*nd.zone_id) + " but no zones were loaded");
      }
    }
  }

  if (nodes_.size() > 1 && count_sccs(*this) > 1) {
    unreachable_pairs_ = count_unreachable(*this);
    warnings_.push_back(std::to_string(unreachable_pairs_) +
                        " ordered node pairs are mutually unreachable");
  }
}

std::size_t Network::index_of(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ArgumentError("unknown node " + std::to_string(id));
  return it->second;
}

std::span<const std::size_t> Network::out_edges(std::size_t index) const {
  return {out_list_.data() + out_start_[index], out_start_[index + 1] - out_start_[index]};
}

std::span<const std::size_t> Network::in_edges(std::size_t index) const {
  return {in_list_.data() + in_start_[index], in_start_[index + 1] - in_start_[index]};
}

const Zone* Network::find_zone(int zone_id) const {
  for (const auto& z : zones_) {
    if (z.zone_id == zone_id) return &z;
  }
  return nullptr;
}

double Network::euclidean_m(int a, int b) const {
  const auto& p = node(a);
  const auto& q = node(b);
  return std::hypot(p.x - q.x, p.y - q.y);
}

Network load_network(const std::filesystem::path& nodes_file,
                     const std::filesystem::path& edges_file,
                     const std::optional<std::filesystem::path>& zones_file,
                     std::optional<double> area_km2) {
  auto nt = csv::read_file(nodes_file);
  const auto c_id = nt.require_column("id");
  const auto c_x = nt.require_column("x");
  const auto c_y = nt.require_column("y");
  const auto c_zone = nt.column("zone_id");
  std::vector<Node> nodes;
  nodes.reserve(nt.rows.size());
  for (std::size_t r = 0; r < nt.rows.size(); ++r) {
    Node nd;
    nd.id = static_cast<int>(csv::to_int(nt, r, c_id));
    nd.x = csv::to_double(nt, r, c_x);
    nd.y = csv::to_double(nt, r, c_y);
    if (c_zone && !nt.rows[r][*c_zone].empty()) {
      nd.zone_id = static_cast<int>(csv::to_int(nt, r, *c_zone));
    }
    nodes.push_back(nd);
  }

  auto et = csv::read_file(edges_file);
  const auto e_id = et.require_column("id");
  const auto e_from = et.require_column("from");
  const auto e_to = et.require_column("to");
  const auto e_len = et.require_column("length_m");
  const auto e_speed = et.require_column("speed_mps");
  std::vector<Edge> edges;
  edges.reserve(et.rows.size());
  for (std::size_t r = 0; r < et.rows.size(); ++r) {
    Edge e;
    e.id = static_cast<int>(csv::to_int(et, r, e_id));
    e.from = static_cast<int>(csv::to_int(et, r, e_from));
    e.to = static_cast<int>(csv::to_int(et, r, e_to));
    e.length_m = csv::to_double(et, r, e_len);
    e.speed_mps = csv::to_double(et, r, e_speed);
    edges.push_back(e);
  }

  std::vector<Zone> zones;
  if (zones_file) {
    auto zt = csv::read_file(*zones_file);
    const auto z_id = zt.require_column("zone_id");
    const auto z_pop = zt.require_column("population");
    for (std::size_t r = 0; r < zt.rows.size(); ++r) {
      Zone z;
      z.zone_id = static_cast<int>(csv::to_int(zt, r, z_id));
      z.population = csv::to_double(zt, r, z_pop);
      for (const char* attr : kZoneAttributes) {
        if (auto c = zt.column(attr); c && !zt.rows[r][*c].empty()) {
          z.attributes[attr] = csv::to_double(zt, r, *c);
        }
      }
      zones.push_back(std::move(z));
    }
  }

  double area = 0;
  if (area_km2) {
    area = *area_km2;
  } else if (!nodes.empty()) {
    double x0 = nodes[0].x, x1 = x0, y0 = nodes[0].y, y1 = y0;
    for (const auto& nd : nodes) {
      x0 = std::min(x0, nd.x);
      x1 = std::max(x1, nd.x);
      y0 = std::min(y0, nd.y);
      y1 = std::max(y1, nd.y);
    }
    area = (x1 - x0) * (y1 - y0) / 1e6;
  }
  const bool assumed = !area_km2 && !(area > 0);
  Network net(std::move(nodes), std::move(edges), std::move(zones), assumed ? 1.0 : area);
  if (assumed) net.add_warning("nodes span no area; 1 km2 assumed");
  return net;
}

void write_network(const Network& net, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const bool zoned = net.has_zones();
  std::string nodes = zoned ? "id,x,y,zone_id\n" : "id,x,y\n";
  for (const auto& nd : net.nodes()) {
    nodes += std::to_string(nd.id) + "," + csv::exact(nd.x) + "," + csv::exact(nd.y);
    if (zoned) nodes += "," + (nd.zone_id ? std::to_string(*nd.zone_id) : std::string());
    nodes += "\n";
  }
  csv::write_atomic(dir / "nodes.csv", nodes);

  std::string edges = "id,from,to,length_m,speed_mps\n";
  for (const auto& e : net.edges()) {
    edges += std::to_string(e.id) + "," + std::to_string(e.from) + "," + std::to_string(e.to) +
             "," + csv::exact(e.length_m) + "," + csv::exact(e.speed_mps) + "\n";
  }
  csv::write_atomic(dir / "edges.csv", edges);

  if (zoned) {
    std::string zones = "zone_id,population";
    for (const char* a : kZoneAttributes) zones += std::string(",") + a;
    zones += "\n";
    for (const auto& z : net.zones()) {
      zones += std::to_string(z.zone_id) + "," + csv::exact(z.population);
      for (const char* a : kZoneAttributes) {
        auto it = z.attributes.find(a);
        zones += "," + (it == z.attributes.end() ? std::string() : csv::exact(it->second));
      }
      zones += "\n";
    }
    csv::write_atomic(dir / "zones.csv", zones);
  }
}

Network generate_grid(int rows, int cols, double spacing_m, double speed_mps, std::uint64_t seed) {
  if (rows < 2 || cols < 2) throw ArgumentError("grid needs at least 2 rows and 2 columns");
  if (!(spacing_m > 0) || !(speed_mps > 0)) {
    throw ArgumentError("grid spacing and speed must be > 0");
  }
  const int zone_cols = (cols + 1) / 2;
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      nodes.push_back({r * cols + c, c * spacing_m, r * spacing_m, (r / 2) * zone_cols + c / 2});
    }
  }
  std::vector<Edge> edges;
  int next_edge = 0;
  auto link = [&](int a, int b) {
    edges.push_back({next_edge++, a, b, spacing_m, speed_mps});
    edges.push_back({next_edge++, b, a, spacing_m, speed_mps});
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = r * cols + c;
      if (c + 1 < cols) link(id, id + 1);
      if (r + 1 < rows) link(id, id + cols);
    }
  }

  // Synthetic demographics; shares are fractions of residents in each group.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pop(200, 2000);
  auto share = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const int zone_rows = (rows + 1) / 2;
  std::vector<Zone> zones;
  for (int zr = 0; zr < zone_rows; ++zr) {
    for (int zc = 0; zc < zone_cols; ++zc) {
      Zone z;
      z.zone_id = zr * zone_cols + zc;
      z.population = pop(rng);
      z.attributes["income"] = share(0.05, 0.35);
      z.attributes["education"] = share(0.10, 0.40);
      z.attributes["employment"] = share(0.02, 0.15);
      z.attributes["young_adults"] = share(0.10, 0.25);
      z.attributes["seniors"] = share(0.10, 0.40);
      z.attributes["single_parents"] = share(0.05, 0.20);
      const double block_km2 = (2 * spacing_m) * (2 * spacing_m) / 1e6;
      z.attributes["pop_density"] = z.population / block_km2;
      zones.push_back(std::move(z));
    }
  }
  const double area = (rows * spacing_m) * (cols * spacing_m) / 1e6;
  return Network(std::move(nodes), std::move(edges), std::move(zones), area);
}

std::optional<int> zone_of(const Network& net, int node_id) {
  return net.node(node_id).zone_id;
}

}  // namespace odt
