// odt-lab: scenario validation, sweeps and reports.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "odt/config.hpp"
#include "odt/csv.hpp"
#include "odt/error.hpp"
#include "odt/pipeline.hpp"
#include "odt/report.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void print_check(const odt::ConfigCheck& check) {
  for (const auto& w : check.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : check.errors) std::cerr << "error: " << e << "\n";
}

int cmd_validate(const std::string& path) {
  const auto check = odt::validate_config(path);
  print_check(check);
  if (!check.ok()) return kExitValidation;
  const auto& c = *check.config;
  std::cout << path << ": ok (" << c.systems.size() << " systems, " << c.demand.levels.size()
            << " demand levels, seed " << c.seed << ")\n";
  return 0;
}

int cmd_run(const std::string& path, int jobs, const std::string& out, const std::string& seed_flag,
            bool sweep) {
  auto check = odt::validate_config(path);
  if (sweep && check.config && check.config->systems.size() < 2) {
    check.errors.push_back("system.types: sweep compares at least two systems");
  }
  print_check(check);
  if (!check.ok()) return kExitValidation;
  auto config = std::move(*check.config);

  // Seed precedence: --seed, then ODT_LAB_SEED, then the config file.
  std::string seed_text = seed_flag;
  if (seed_text.empty()) {
    if (const char* env = std::getenv("ODT_LAB_SEED")) seed_text = env;
  }
  if (!seed_text.empty()) {
    try {
      std::size_t used = 0;
      config.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size() || seed_text.front() == '-') throw std::invalid_argument(seed_text);
    } catch (const std::exception&) {
      std::cerr << "error: seed must be a nonnegative integer, got '" << seed_text << "'\n";
      return kExitValidation;
    }
  }
  if (!out.empty()) config.output = out;

  odt::StudyInputs inputs;
  try {
    inputs = odt::prepare_inputs(config);
  } catch (const odt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const odt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  for (const auto& w : inputs.network.warnings()) std::cerr << "warning: " << w << "\n";

  try {
    const auto runs = odt::run_sweep(config, inputs, jobs);
    std::vector<std::string> warnings;
    const auto files = odt::render_outputs(config, inputs, runs, warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    odt::write_outputs(config.output, config, files);
    std::cout << "wrote " << files.size() + 1 << " files to " << config.output.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_report(const std::string& dir, bool show_params, const std::string& long_out) {
  try {
    if (show_params) std::cout << odt::show_params() << "\n";
    if (!dir.empty()) std::cout << odt::report_summary(dir);
    if (!long_out.empty()) {
      odt::csv::write_atomic(long_out, odt::long_format(dir));
      std::cout << "\nlong-format table written to " << long_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"On-demand transit scenario simulator and analysis toolkit"};
  app.set_version_flag("--version", odt::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir, seed, report_dir, long_out;
  int jobs = 0;
  bool show_params = false;

  auto* validate = app.add_subcommand("validate", "Check a scenario config");
  validate->add_option("config", config_path, "Scenario JSON")->required();

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Scenario JSON")->required();
    sub->add_option("--jobs,-j", jobs, "Concurrent scenario runs (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out,-o", out_dir, "Output folder (overrides the config)");
    sub->add_option("--seed", seed, "Seed (overrides ODT_LAB_SEED and the config)");
  };
  auto* run = app.add_subcommand("run", "Simulate every configured system and demand level");
  add_run_options(run);
  auto* sweep = app.add_subcommand("sweep", "Comparative run of two or more systems on shared seeds");
  add_run_options(sweep);

  auto* report = app.add_subcommand("report", "Summarize an output folder");
  report->add_option("dir", report_dir, "Output folder");
  report->add_flag("--show-params", show_params, "Print the default parameters");
  report->add_option("--long", long_out, "Also write a long-format CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (*validate) return cmd_validate(config_path);
  if (*run) return cmd_run(config_path, jobs, out_dir, seed, false);
  if (*sweep) return cmd_run(config_path, jobs, out_dir, seed, true);
  if (report_dir.empty() && !show_params) {
    std::cerr << "error: report needs an output folder or --show-params\n";
    return kExitValidation;
  }
  return cmd_report(report_dir, show_params, long_out);
}
