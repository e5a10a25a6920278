#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace odt {

struct Node {
  int id = 0;
  double x = 0;  // metres, projected
  double y = 0;
  std::optional<int> zone_id;
};

struct Edge {
  int id = 0;
  int from = 0;
  int to = 0;
  double length_m = 0;
  double speed_mps = 0;

  double travel_time_s() const { return length_m / speed_mps; }
};

/// Census-style zone. Attribute values are keyed by the zones.csv column name.
struct Zone {
  int zone_id = 0;
  std::vector<int> members;
  double population = 0;
  std::map<std::string, double> attributes;
};

/// Attribute columns of zones.csv, in file order.
inline constexpr const char* kZoneAttributes[] = {
    "income", "education", "employment", "young_adults", "seniors", "single_parents", "pop_density"};

/// Immutable road network. Nodes are addressed by id externally and by dense
/// index internally (index order == nodes() order).
class Network {
 public:
  Network() = default;
  /// Validates and indexes. Throws ValidationError on duplicate ids, dangling
  /// edge endpoints, non-positive lengths/speeds/area, or a node claimed by two
  /// zones.
  Network(std::vector<Node> nodes, std::vector<Edge> edges, std::vector<Zone> zones,
          double area_km2);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Zone>& zones() const { return zones_; }
  double area_km2() const { return area_km2_; }
  bool has_zones() const { return !zones_.empty(); }

  bool has_node(int id) const { return index_.contains(id); }
  /// Throws ArgumentError for unknown ids.
  std::size_t index_of(int id) const;
  const Node& node(int id) const { return nodes_[index_of(id)]; }

  /// Edge positions (into edges()) leaving / entering the node at `index`.
  std::span<const std::size_t> out_edges(std::size_t index) const;
  std::span<const std::size_t> in_edges(std::size_t index) const;
  std::size_t edge_from_index(std::size_t e) const { return edge_from_[e]; }
  std::size_t edge_to_index(std::size_t e) const { return edge_to_[e]; }

  const Zone* find_zone(int zone_id) const;

  double euclidean_m(int a, int b) const;

  /// Non-fatal findings from construction (short edges, unreachable pairs).
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }
  /// Ordered node pairs with no directed path between them.
  std::size_t unreachable_pairs() const { return unreachable_pairs_; }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<Zone> zones_;
  double area_km2_ = 0;
  std::unordered_map<int, std::size_t> index_;
  std::vector<std::size_t> edge_from_, edge_to_;
  // CSR adjacency
  std::vector<std::size_t> out_start_, out_list_, in_start_, in_list_;
  std::vector<std::string> warnings_;
  std::size_t unreachable_pairs_ = 0;
};

/// Reads nodes.csv / edges.csv and optionally zones.csv. When `area_km2` is
/// absent the bounding box of the nodes is used.
Network load_network(const std::filesystem::path& nodes_file,
                     const std::filesystem::path& edges_file,
                     const std::optional<std::filesystem::path>& zones_file = std::nullopt,
                     std::optional<double> area_km2 = std::nullopt);

/// Writes nodes.csv, edges.csv and, when zoned, zones.csv into `dir`.
void write_network(const Network& net, const std::filesystem::path& dir);

/// Bidirectional rows x cols grid with `spacing_m` between neighbours. Nodes
/// are grouped into 2x2 blocks, one zone per block, with synthetic
/// demographics drawn from `seed`.
Network generate_grid(int rows, int cols, double spacing_m, double speed_mps,
                      std::uint64_t seed);

/// Zone containing the node, or nullopt on an unzoned network.
std::optional<int> zone_of(const Network& net, int node_id);

}  // namespace odt
