#include "odt/routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include <omp.h>

#include "odt/error.hpp"

namespace odt {

namespace {

// Edge-id sequence from the origin to `v`, in travel order.
void edge_sequence(const Network& net, const std::vector<long>& pred, std::size_t v,
                   std::vector<int>& out) {
  out.clear();
  while (pred[v] >= 0) {
    const auto e = static_cast<std::size_t>(pred[v]);
    out.push_back(net.edges()[e].id);
    v = net.edge_from_index(e);
  }
  std::reverse(out.begin(), out.end());
}

}  // namespace

ShortestPathTree shortest_path_tree(const Network& net, std::size_t origin) {
  const auto n = net.nodes().size();
  const auto& edges = net.edges();
  std::vector<double> dist(n, kUnreachable);
  dist[origin] = 0;

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.emplace(0.0, origin);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (auto e : net.out_edges(v)) {
      const auto w = net.edge_to_index(e);
      const double nd = d + edges[e].length_m;
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }

  // Settle nodes by distance; each picks, among its tight in-edges, the one
  // whose extended edge sequence is lexicographically smallest. Prefixes of
  // lexicographically smallest shortest paths are themselves smallest, so the
  // choices form a tree.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
  });

  ShortestPathTree tree;
  tree.origin = origin;
  tree.dist_m.assign(n, kUnreachable);
  tree.time_s.assign(n, kUnreachable);
  tree.pred_edge.assign(n, -1);
  tree.dist_m[origin] = 0;
  tree.time_s[origin] = 0;

  std::vector<int> best_seq, cand_seq;
  for (auto v : order) {
    if (v == origin || dist[v] == kUnreachable) continue;
    const double tol = 1e-9 * std::max(1.0, dist[v]);
    long best = -1;
    for (auto e : net.in_edges(v)) {
      const auto u = net.edge_from_index(e);
      if (dist[u] == kUnreachable || dist[u] >= dist[v]) continue;
      if (std::abs(dist[u] + edges[e].length_m - dist[v]) > tol) continue;
      if (u != origin && tree.pred_edge[u] < 0) continue;
      edge_sequence(net, tree.pred_edge, u, cand_seq);
      cand_seq.push_back(edges[e].id);
      if (best < 0 || std::lexicographical_compare(cand_seq.begin(), cand_seq.end(),
                                                   best_seq.begin(), best_seq.end())) {
        best = static_cast<long>(e);
        best_seq.swap(cand_seq);
      }
    }
    if (best < 0) continue;
    const auto& edge = edges[static_cast<std::size_t>(best)];
    const auto u = net.edge_from_index(static_cast<std::size_t>(best));
    tree.pred_edge[v] = best;
    tree.dist_m[v] = tree.dist_m[u] + edge.length_m;
    tree.time_s[v] = tree.time_s[u] + edge.travel_time_s();
  }
  return tree;
}

Path path_from_tree(const Network& net, const ShortestPathTree& tree, std::size_t dest) {
  const auto& nodes = net.nodes();
  if (tree.dist_m[dest] == kUnreachable) {
    throw NoPathError("no path from node " + std::to_string(nodes[tree.origin].id) + " to node " +
                      std::to_string(nodes[dest].id));
  }
  Path p;
  std::vector<std::size_t> rev;
  for (auto v = dest; tree.pred_edge[v] >= 0;) {
    rev.push_back(static_cast<std::size_t>(tree.pred_edge[v]));
    v = net.edge_from_index(rev.back());
  }
  p.nodes.push_back(nodes[tree.origin].id);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    const auto& e = net.edges()[*it];
    p.edges.push_back(e.id);
    p.nodes.push_back(e.to);
    p.total_length_m += e.length_m;
    p.total_time_s += e.travel_time_s();
  }
  return p;
}

Path shortest_path(const Network& net, int origin, int destination) {
  const auto o = net.index_of(origin);
  const auto d = net.index_of(destination);
  return path_from_tree(net, shortest_path_tree(net, o), d);
}

void DistanceTable::store(const ShortestPathTree& tree) {
  const auto base = tree.origin * n_;
  std::copy(tree.dist_m.begin(), tree.dist_m.end(), dist_.begin() + static_cast<long>(base));
  std::copy(tree.time_s.begin(), tree.time_s.end(), time_.begin() + static_cast<long>(base));
  std::copy(tree.pred_edge.begin(), tree.pred_edge.end(), pred_.begin() + static_cast<long>(base));
}

DistanceTable DistanceTable::compute_serial(const Network& net) {
  DistanceTable t;
  t.n_ = net.nodes().size();
  t.dist_.resize(t.n_ * t.n_);
  t.time_.resize(t.n_ * t.n_);
  t.pred_.resize(t.n_ * t.n_);
  for (std::size_t o = 0; o < t.n_; ++o) t.store(shortest_path_tree(net, o));
  return t;
}

DistanceTable DistanceTable::compute(const Network& net) {
  DistanceTable t;
  t.n_ = net.nodes().size();
  t.dist_.resize(t.n_ * t.n_);
  t.time_.resize(t.n_ * t.n_);
  t.pred_.resize(t.n_ * t.n_);
  const auto n = static_cast<long>(t.n_);
  // Rows are disjoint, so threads write without synchronization.
#pragma omp parallel for schedule(dynamic, 4)
  for (long o = 0; o < n; ++o) t.store(shortest_path_tree(net, static_cast<std::size_t>(o)));
  return t;
}

Router::Router(const Network& net) : net_(&net) {}

Router::Router(const Network& net, std::shared_ptr<const DistanceTable> table)
    : net_(&net), table_(std::move(table)) {
  if (table_ && table_->size() != net.nodes().size()) {
    throw ArgumentError("distance table does not match the network");
  }
}

const ShortestPathTree& Router::tree(std::size_t origin) const {
  auto it = cache_.find(origin);
  if (it == cache_.end()) it = cache_.emplace(origin, shortest_path_tree(*net_, origin)).first;
  return it->second;
}

double Router::distance_m(int from, int to) const {
  const auto a = net_->index_of(from);
  const auto b = net_->index_of(to);
  if (table_) return table_->dist_m(a, b);
  return tree(a).dist_m[b];
}

double Router::time_s(int from, int to) const {
  const auto a = net_->index_of(from);
  const auto b = net_->index_of(to);
  if (table_) return table_->time_s(a, b);
  return tree(a).time_s[b];
}

Path Router::path(int from, int to) const {
  const auto a = net_->index_of(from);
  const auto b = net_->index_of(to);
  if (!table_) return path_from_tree(*net_, tree(a), b);
  if (table_->dist_m(a, b) == kUnreachable) {
    throw NoPathError("no path from node " + std::to_string(from) + " to node " +
                      std::to_string(to));
  }
  std::vector<std::size_t> rev;
  for (auto v = b; table_->pred_edge(a, v) >= 0;) {
    rev.push_back(static_cast<std::size_t>(table_->pred_edge(a, v)));
    v = net_->edge_from_index(rev.back());
  }
  Path p;
  p.nodes.push_back(from);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    const auto& e = net_->edges()[*it];
    p.edges.push_back(e.id);
    p.nodes.push_back(e.to);
    p.total_length_m += e.length_m;
    p.total_time_s += e.travel_time_s();
  }
  return p;
}

}  // namespace odt
