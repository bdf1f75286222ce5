#pragma once

// Desk-scale acceptance suite. Each criterion is self-contained and
// deterministic for a fixed configuration.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace jacring::cli {

struct HarnessConfig {
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool within_time_limit = true;
  double seconds = 0;
  double limit_seconds = 0;
  nlohmann::json details;
};

constexpr int kCriterionCount = 13;

std::string criterion_name(int id);
double criterion_limit(int id);
// Runs one criterion; library errors are caught and reported as a failure.
CriterionResult run_criterion(int id, const HarnessConfig& cfg);

nlohmann::json to_json(const CriterionResult& r, bool with_timing);

}  // namespace jacring::cli
