#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "odt/network.hpp"

namespace odt::test {

/// Fresh empty folder under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("odt_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Random strongly connected directed graph: a ring plus random chords with
/// small integer lengths so equal-length ties are common.
inline Network random_graph(int n, int chords, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, 4), node(0, n - 1);
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i, 0.0, 0.0, std::nullopt});
  std::vector<Edge> edges;
  int id = 0;
  for (int i = 0; i < n; ++i) edges.push_back({id++, i, (i + 1) % n, 100.0 * len(rng), 10.0});
  for (int k = 0; k < chords; ++k) {
    const int a = node(rng), b = node(rng);
    if (a == b) continue;
    edges.push_back({id++, a, b, 100.0 * len(rng), 10.0});
  }
  // Shuffle edge ids so the tie-break is not just insertion order.
  std::vector<int> ids(edges.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].id = ids[i] * 3 + 1;
  return Network(std::move(nodes), std::move(edges), {}, 1.0);
}

}  // namespace odt::test
