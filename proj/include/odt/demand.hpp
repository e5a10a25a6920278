#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "odt/network.hpp"

namespace odt {

inline constexpr double kHorizonS = 86400.0;

struct RideRequest {
  int id = 0;
  double time_s = 0;  // seconds from midnight, [0, 86400)
  int origin = 0;
  int destination = 0;
};

struct DemandSet {
  std::vector<RideRequest> requests;
  int level_pct = 100;
  std::size_t base_count = 0;
};

/// Vehicles in service during each hour of the day.
struct SupplySchedule {
  std::array<int, 24> vehicles{};
  double alpha = 0;
};

/// Round-half-up on nonnegative values.
std::int64_t round_half_up(double v);

/// Demand at `level_pct` percent of `base` (50..500 in steps of 50). Below 100
/// the result is a seeded uniform subsample; above 100 it is the base plus
/// bootstrap copies whose times are jittered by up to 10 minutes and whose
/// origin/destination pair is redrawn from the base pairs of the same hour.
/// The count is exactly round_half_up(base * level / 100).
DemandSet scale_demand(const DemandSet& base, int level_pct, std::uint64_t seed);

/// Hourly counts scaled by (1 + alpha * demand_change_pct / 100), rounded half
/// up; hours that had vehicles keep at least one.
SupplySchedule scale_supply(const SupplySchedule& base, double demand_change_pct, double alpha);

/// Riders per km2 per day.
double demand_density(double requests_per_day, double area_km2);

/// Request times follow the 24 hourly weights (uniform within an hour); O/D
/// pairs are uniform over ordered pairs of distinct nodes.
DemandSet generate_synthetic_demand(const Network& net, std::size_t count,
                                    std::span<const double> hourly_profile, std::uint64_t seed);

// requests.csv: id,time_s,origin,destination
DemandSet read_requests(const std::filesystem::path& file);
void write_requests(const DemandSet& demand, const std::filesystem::path& file);
/// Checks every request against the network and horizon; throws ValidationError.
void validate_demand(const DemandSet& demand, const Network& net);

// supply.csv: hour,vehicles
SupplySchedule read_supply(const std::filesystem::path& file);
void write_supply(const SupplySchedule& supply, const std::filesystem::path& file);

}  // namespace odt
