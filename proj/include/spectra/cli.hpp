#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "spectra/report.hpp"

namespace spectra {

struct RunConfig {
  double membership_tol = kDefaultMembershipTol;
  double quadrature_tol = 1e-8;
  double period_tol = 1e-6;
  double closedness_tol = 1e-5;
  int n = 256;
  int loop_n = 32;
  int n_nodes = 64;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;

  /// Throws InvalidArgument unless every tolerance and size is positive.
  void validate() const;
};

/// Reads any subset of the RunConfig fields from a JSON object.
RunConfig load_config(const std::string& path, RunConfig base = {});

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// Parses "re,im" or "re".
cplx parse_complex(const std::string& text);

/// args excludes the program name. Artifacts go to out (and to
/// config.out_dir when set); errors go to err as JSON.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spectra
