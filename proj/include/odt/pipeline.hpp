#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "odt/config.hpp"
#include "odt/efficiency.hpp"
#include "odt/engine.hpp"
#include "odt/network.hpp"
#include "odt/routing.hpp"

namespace odt {

inline constexpr const char* kToolVersion = "0.1.0";

/// Network, base demand and the shared distance table of one study.
struct StudyInputs {
  Network network;
  DemandSet base_demand;
  std::shared_ptr<const DistanceTable> table;
};

StudyInputs prepare_inputs(const Config& config);

struct ScenarioRun {
  SystemType system = SystemType::crowdsourced_exclusive;
  int level = 100;
  std::size_t requests = 0;
  SimulationResult result;

  std::string name() const;  // <system>_<level>
};

/// Seeds derived from the study seed; equal for every system at a level.
std::uint64_t demand_seed(std::uint64_t seed, int level);
std::uint64_t engine_seed(std::uint64_t seed, int level);

/// Demand at `level` percent, as every system of the study sees it.
DemandSet level_demand(const Config& config, const StudyInputs& inputs, int level);
/// One scenario of the study, optionally observed through `hooks`.
ScenarioRun run_scenario_at(const Config& config, const StudyInputs& inputs, SystemType system,
                            int level, const RunHooks* hooks = nullptr);

/// Every (system, level) scenario, spread over up to `jobs` OpenMP threads
/// (0 = runtime default). Output order is system-major, level-minor.
std::vector<ScenarioRun> run_sweep(const Config& config, const StudyInputs& inputs, int jobs = 0);
/// Reference implementation on the calling thread; same result.
std::vector<ScenarioRun> run_sweep_serial(const Config& config, const StudyInputs& inputs);

/// GC curves, including "+surge<s>" variants for systems with a crowdsourced
/// part.
std::vector<GcCurve> gc_curves(const Config& config, const StudyInputs& inputs,
                               const std::vector<ScenarioRun>& runs);

/// Relative path -> file body for every study output except the manifest.
std::map<std::string, std::string> render_outputs(const Config& config, const StudyInputs& inputs,
                                                  const std::vector<ScenarioRun>& runs,
                                                  std::vector<std::string>& warnings);

std::string manifest_json(const Config& config, const std::map<std::string, std::string>& files);

/// Writes into a sibling temporary folder, adds manifest.json and renames it
/// to `dir`. An existing `dir` is replaced only when it holds a manifest.json.
void write_outputs(const std::filesystem::path& dir, const Config& config,
                   const std::map<std::string, std::string>& files);

}  // namespace odt
