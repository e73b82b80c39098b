#pragma once

// The acceptance suite: eleven numbered checks, each returning a verdict with
// its measured data so a failure can be read off the report.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ehm::verify {

enum class Status { pass, fail, indeterminate };

std::string to_string(Status s);

struct CriterionResult {
  int id = 0;
  std::string title;
  Status status = Status::fail;
  std::string summary;
  nlohmann::json data;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 20240607;
};

inline constexpr int kCriterionCount = 11;

/// Runs one check; DomainError / NumericalError escaping a check are turned
/// into a failed result carrying the message.
CriterionResult run_criterion(int id, const SuiteOptions& options);

/// Runs `ids` (all when empty) in order, calling `progress` after each.
std::vector<CriterionResult> run_suite(const SuiteOptions& options, const std::vector<int>& ids = {},
                                       const std::function<void(const CriterionResult&)>& progress = {});

/// "[PASS] 3 winding factorization: ..." style line.
std::string format_line(const CriterionResult& r);

/// Serializes one result, data included.
nlohmann::json to_json(const CriterionResult& r);

}  // namespace ehm::verify
