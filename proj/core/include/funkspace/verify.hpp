#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace funkspace::verify {

struct SuiteOptions {
  /// "euclid", "hyperbolic" or "all".
  std::string suite = "all";
  int trials = 100;
  std::uint64_t seed = 42;
  std::vector<int> dims = {2, 3};
};

/// Outcome of one seeded property. Asserted properties fail the suite when
/// `failures` is nonzero; the others are observations.
struct PropertyResult {
  std::string name;
  std::string group;
  bool asserted = true;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  /// Largest violation seen (or largest error, for equalities).
  double worst = 0.0;
  double tolerance = 0.0;
  nlohmann::json details = nlohmann::json::object();
  /// Inputs of the first failure, or of a searched-for configuration.
  nlohmann::json witness = nullptr;
  double wall_seconds = 0.0;

  bool passed() const { return !asserted || failures == 0; }
  nlohmann::json to_json(bool include_timing = false) const;
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<int> dims;
  std::vector<PropertyResult> properties;
  double wall_seconds = 0.0;

  bool passed() const;
  const PropertyResult* find(std::string_view name) const;
  /// Wall time is left out by default so reports are byte-stable.
  nlohmann::json to_json(bool include_timing = false) const;
};

/// Property names in run order for a suite.
std::vector<std::string> property_names(std::string_view suite);

/// Runs a single property. Trial counts scale with `options.trials`; each
/// trial draws from its own stream seeded by (seed, property, trial).
PropertyResult run_property(std::string_view name, const SuiteOptions& options);

/// Throws InvalidArgument for an unknown suite, trials < 1 or unsupported dims.
SuiteReport run_suite(const SuiteOptions& options);

}  // namespace funkspace::verify
