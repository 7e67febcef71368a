#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectra/report.hpp"

namespace spectra {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceConfig {
  std::uint64_t seed = kDefaultSeed;
  double membership_tol = 1e-9;
  double period_tol = 1e-6;
  int oracle_n = 256;
  int loop_n = 32;
  int n_nodes = 64;
};

inline constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id, const AcceptanceConfig& cfg = {});

/// Runs the listed criteria (all nine when ids is empty) in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg = {},
                                            const std::vector<int>& ids = {});

/// "PASS [3] name (1.23 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace spectra
