#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>

#include "odt/demand.hpp"
#include "odt/error.hpp"
#include "support.hpp"

using namespace odt;

namespace {

DemandSet base_set(std::size_t n, std::uint64_t seed = 5) {
  const auto net = generate_grid(5, 5, 500, 11.1, 1);
  return generate_synthetic_demand(net, n, std::vector<double>(24, 1.0), seed);
}

std::set<std::tuple<int, double, int, int>> as_set(const DemandSet& d) {
  std::set<std::tuple<int, double, int, int>> s;
  for (const auto& r : d.requests) s.emplace(r.id, r.time_s, r.origin, r.destination);
  return s;
}

}  // namespace

TEST_CASE("scale_demand sizes and identity") {
  const auto base = base_set(177);
  const auto same = scale_demand(base, 100, 9);
  CHECK(as_set(same) == as_set(base));
  CHECK(scale_demand(base, 500, 9).requests.size() == 885);

  const auto half = scale_demand(base, 50, 9);
  CHECK(half.requests.size() == 89);
  const auto all = as_set(base);
  for (const auto& r : half.requests) CHECK(all.contains({r.id, r.time_s, r.origin, r.destination}));
  CHECK(as_set(scale_demand(base, 50, 9)) == as_set(half));

  for (int level = 50; level <= 500; level += 50) {
    const auto d = scale_demand(base, level, 3);
    CHECK(d.requests.size() == static_cast<std::size_t>(round_half_up(177.0 * level / 100.0)));
    CHECK(d.level_pct == level);
    std::set<int> ids;
    for (const auto& r : d.requests) {
      CHECK(r.origin != r.destination);
      CHECK(r.time_s >= 0.0);
      CHECK(r.time_s < kHorizonS);
      ids.insert(r.id);
    }
    CHECK(ids.size() == d.requests.size());
  }
}

TEST_CASE("scale_demand argument checks") {
  CHECK_THROWS_AS(scale_demand(DemandSet{}, 200, 1), ArgumentError);
  const auto base = base_set(10);
  CHECK_THROWS_AS(scale_demand(base, 75, 1), ArgumentError);
  CHECK_THROWS_AS(scale_demand(base, 550, 1), ArgumentError);
}

TEST_CASE("upscaled copies reuse base origin-destination pairs") {
  const auto base = base_set(177);
  std::set<std::pair<int, int>> every;
  for (const auto& r : base.requests) every.insert({r.origin, r.destination});
  const auto big = scale_demand(base, 300, 4);
  for (const auto& r : big.requests) CHECK(every.contains({r.origin, r.destination}));
}

TEST_CASE("scale_supply follows the supply-demand slope") {
  SupplySchedule base;
  for (int h = 0; h < 24; ++h) base.vehicles[static_cast<std::size_t>(h)] = h % 5;
  CHECK(scale_supply(base, 250, 0).vehicles == base.vehicles);
  CHECK(scale_supply(base, 0, 1).vehicles == base.vehicles);
  CHECK(scale_supply(base, 0, 0.5).vehicles == base.vehicles);
  const auto doubled = scale_supply(base, 100, 1);
  for (int h = 0; h < 24; ++h) CHECK(doubled.vehicles[h] == 2 * base.vehicles[h]);

  SupplySchedule four;
  four.vehicles.fill(4);
  CHECK(scale_supply(four, 200, 0.5).vehicles[0] == 8);
  // 1 vehicle at -50% with slope 1 -> 0.5 rounds half up to 1; never below 1.
  SupplySchedule one;
  one.vehicles.fill(1);
  CHECK(scale_supply(one, -50, 1).vehicles[3] == 1);
  CHECK_THROWS_AS(scale_supply(base, 100, 0.7), ArgumentError);
}

TEST_CASE("demand density") {
  CHECK(std::round(demand_density(885, 262.4) * 100) / 100 == doctest::Approx(3.37));
  CHECK(std::round(demand_density(354, 262.4) * 100) / 100 == doctest::Approx(1.35));
  CHECK(demand_density(0, 10) == 0.0);
  CHECK_THROWS_AS(demand_density(5, 0), ArgumentError);
}

TEST_CASE("synthetic demand") {
  const auto net = generate_grid(5, 5, 500, 11.1, 1);
  const std::vector<double> flat(24, 1.0);
  CHECK(generate_synthetic_demand(net, 0, flat, 1).requests.empty());
  CHECK(as_set(generate_synthetic_demand(net, 50, flat, 7)) ==
        as_set(generate_synthetic_demand(net, 50, flat, 7)));

  std::vector<double> bad(24, 0.0);
  CHECK_THROWS_AS(generate_synthetic_demand(net, 10, bad, 1), ArgumentError);
  CHECK_THROWS_AS(generate_synthetic_demand(net, 10, std::vector<double>(23, 1.0), 1), ArgumentError);

  const auto one = generate_synthetic_demand(net, 177, flat, 1);
  std::set<int> hours;
  for (const auto& r : one.requests) hours.insert(static_cast<int>(r.time_s / 3600));
  CHECK(hours.size() == 24);
}

TEST_CASE("flat-profile hours pass a chi-square uniformity check") {
  // 95% critical value for 23 degrees of freedom.
  constexpr double kCritical = 35.172;
  const auto net = generate_grid(5, 5, 500, 11.1, 1);
  const std::vector<double> flat(24, 1.0);
  std::array<double, 24> pooled{};
  int rejected = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::array<double, 24> counts{};
    for (const auto& r : generate_synthetic_demand(net, 177, flat, seed).requests) {
      counts[static_cast<std::size_t>(r.time_s / 3600)] += 1;
    }
    double chi = 0;
    for (int h = 0; h < 24; ++h) {
      const double e = 177.0 / 24.0;
      chi += (counts[h] - e) * (counts[h] - e) / e;
      pooled[h] += counts[h];
    }
    rejected += chi > kCritical;
  }
  double chi = 0;
  for (double c : pooled) chi += (c - 17700.0 / 24) * (c - 17700.0 / 24) / (17700.0 / 24);
  CHECK(chi < kCritical);
  // About 5 of 100 seeds reject by chance alone.
  CHECK(rejected <= 12);
}

TEST_CASE("requests and supply files round-trip") {
  const auto dir = test::scratch_dir("demand_io");
  const auto d = base_set(30);
  write_requests(d, dir / "requests.csv");
  const auto back = read_requests(dir / "requests.csv");
  CHECK(as_set(back) == as_set(d));

  SupplySchedule s;
  for (int h = 0; h < 24; ++h) s.vehicles[static_cast<std::size_t>(h)] = h;
  write_supply(s, dir / "supply.csv");
  CHECK(read_supply(dir / "supply.csv").vehicles == s.vehicles);
}

TEST_CASE("demand validation catches bad requests") {
  const auto net = generate_grid(3, 3, 500, 11.1, 1);
  DemandSet d;
  d.requests = {{1, 10, 0, 0}};
  CHECK_THROWS_AS(validate_demand(d, net), ValidationError);
  d.requests = {{1, 86400, 0, 1}};
  CHECK_THROWS_AS(validate_demand(d, net), ValidationError);
  d.requests = {{1, 10, 0, 77}};
  CHECK_THROWS_AS(validate_demand(d, net), ValidationError);
  d.requests = {{1, 10, 0, 1}};
  CHECK_NOTHROW(validate_demand(d, net));
}
