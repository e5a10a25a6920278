#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "odt/costing.hpp"
#include "odt/demand.hpp"
#include "odt/emissions.hpp"
#include "odt/engine.hpp"

namespace odt {

struct GridSpec {
  int rows = 10;
  int cols = 10;
  double spacing_m = 500;
  double speed_mps = 11.1;
};

struct NetworkSection {
  std::optional<GridSpec> grid;
  std::optional<std::filesystem::path> nodes, edges, zones;
  std::optional<double> area_km2;
};

struct DemandSection {
  std::optional<std::filesystem::path> requests;
  std::size_t synthetic_count = 0;
  std::vector<double> hourly_profile = std::vector<double>(24, 1.0);
  std::vector<int> levels{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
};

struct SupplySection {
  double alpha = 0;
  std::optional<SupplySchedule> crowdsourced;
  std::optional<SupplySchedule> dedicated;
};

struct AnalysisSection {
  double served_threshold = 0.8;
  std::vector<int> equity_levels{100, 500};
  std::vector<std::string> equity_attributes{std::begin(kZoneAttributes), std::end(kZoneAttributes)};
  bool concentration_ordering = false;
};

struct Config {
  std::filesystem::path source;
  std::string sha256;  // of the config file bytes
  NetworkSection network;
  DemandSection demand;
  SupplySection supply;
  std::vector<SystemType> systems;
  ScenarioPolicy policy;  // system and demand level are set per scenario
  CostParameters costs;
  EmissionFactors emissions;
  AnalysisSection analysis;
  std::uint64_t seed = 1;
  std::filesystem::path output = "odt_out";
};

struct ConfigCheck {
  std::optional<Config> config;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty() && config.has_value(); }
};

/// Parses and checks a JSON scenario file, collecting every problem instead of
/// stopping at the first. Relative paths resolve against the file's folder.
/// Missing optional keys take the default parameter values.
ConfigCheck validate_config(const std::filesystem::path& file);
ConfigCheck validate_config_text(const std::string& text, const std::filesystem::path& source);

/// Hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace odt
