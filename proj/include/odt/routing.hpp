#pragma once

#include <limits>
#include <memory>
#include <unordered_map>
#include <vector>

#include "odt/network.hpp"

namespace odt {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct Path {
  std::vector<int> edges;  // edge ids, in travel order
  std::vector<int> nodes;  // visited node ids, origin first
  double total_length_m = 0;
  double total_time_s = 0;
};

/// Single-origin shortest paths under the distance metric. Among equal-length
/// paths the tree keeps the lexicographically smallest edge-id sequence.
/// Distances and times are accumulated along the chosen path in travel order,
/// so they equal Path totals bit for bit. All vectors are indexed by node
/// index; pred_edge is -1 at the origin and at unreachable nodes.
struct ShortestPathTree {
  std::size_t origin = 0;
  std::vector<double> dist_m;
  std::vector<double> time_s;
  std::vector<long> pred_edge;  // position in Network::edges()
};

ShortestPathTree shortest_path_tree(const Network& net, std::size_t origin_index);

/// Throws NoPathError when `destination` cannot be reached.
Path shortest_path(const Network& net, int origin, int destination);
Path path_from_tree(const Network& net, const ShortestPathTree& tree, std::size_t dest_index);

/// Dense all-pairs tables (n^2 entries each). Meant for desk-scale networks
/// shared read-only across concurrent runs.
class DistanceTable {
 public:
  /// One tree per origin, origins distributed over OpenMP threads.
  static DistanceTable compute(const Network& net);
  /// Reference implementation; identical output to compute().
  static DistanceTable compute_serial(const Network& net);

  std::size_t size() const { return n_; }
  double dist_m(std::size_t from, std::size_t to) const { return dist_[from * n_ + to]; }
  double time_s(std::size_t from, std::size_t to) const { return time_[from * n_ + to]; }
  long pred_edge(std::size_t from, std::size_t to) const { return pred_[from * n_ + to]; }

  friend bool operator==(const DistanceTable&, const DistanceTable&) = default;

 private:
  void store(const ShortestPathTree& tree);

  std::size_t n_ = 0;
  std::vector<double> dist_, time_;
  std::vector<long> pred_;
};

/// Distance/time/path queries by node id. Without a shared table, trees are
/// computed lazily per origin and cached; that cache is not synchronized, so
/// give each concurrent run its own Router.
class Router {
 public:
  explicit Router(const Network& net);
  Router(const Network& net, std::shared_ptr<const DistanceTable> table);

  const Network& network() const { return *net_; }

  double distance_m(int from, int to) const;
  double time_s(int from, int to) const;
  Path path(int from, int to) const;

 private:
  const ShortestPathTree& tree(std::size_t origin) const;

  const Network* net_;
  std::shared_ptr<const DistanceTable> table_;
  mutable std::unordered_map<std::size_t, ShortestPathTree> cache_;
};

}  // namespace odt
