#pragma once

#include "sgb/report.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sgb {

struct AcceptanceOptions {
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
  /// Scratch directory for the determinism criterion.
  std::string scratch_dir = "acceptance_scratch";
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  double seconds = 0.0;
  json details = json::object();
};

inline constexpr int kCriterionCount = 8;

/// Runs one acceptance criterion (1..8).
CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

/// Runs all criteria in order; `on_result` (optional) sees each as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "criterion 3 PASS bismut_vs_fd: ..." (runtime appended when requested).
std::string format_result_line(const CriterionResult& r, bool with_time);

}  // namespace sgb
