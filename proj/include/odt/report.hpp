#pragma once

#include <filesystem>
#include <string>

namespace odt {

/// Text summary of a study folder. Values are quoted from the CSVs as
/// written. Throws Error naming a missing file.
std::string report_summary(const std::filesystem::path& dir);

/// Default cost and emission parameters.
std::string show_params();

/// gc_curve, costs and emissions merged into one long table:
/// file,scenario,system,demand_level,variant,measure,value
std::string long_format(const std::filesystem::path& dir);

}  // namespace odt
