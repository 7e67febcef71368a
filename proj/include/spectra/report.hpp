#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectra/resolvent_traces.hpp"
#include "spectra/self_similar.hpp"
#include "spectra/symbol_spectrum.hpp"

namespace spectra {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr std::uint64_t kDefaultSeed = 0xD1EDA;

/// {"schema_version": "1", "seed": ...} followed by the fields of body.
json with_header(const json& body, std::uint64_t seed);

json membership_json(const MembershipResult& r);
json period_json(const std::string& loop, Functional f, const PeriodReport& p);
json independence_json(const std::vector<std::string>& loops, const IndependenceReport& r);

void write_csv_header(std::ostream& out, std::uint64_t seed);
void write_raster_csv(std::ostream& out, const std::vector<RasterCell>& cells, std::uint64_t seed);
void write_residual_csv(std::ostream& out, const ResidualMatrix& r, std::uint64_t seed);
/// One line per point: "index -> image".
void write_level_matrix(std::ostream& out, const LevelMatrix& m);
void write_eigen_csv(std::ostream& out, int level, double z1, double z2, double z3,
                     const std::vector<double>& eigs, std::uint64_t seed);

/// Number of eigenvalues within tol of each entry (eigs sorted ascending).
std::vector<int> multiplicity_hints(const std::vector<double>& eigs, double tol = 1e-9);

struct ErratumSettings {
  int n = 256;           // truncation size for the oracle values
  double step = 1e-5;    // central-difference step
  int n_nodes = 64;
};

/// Adjudication of the published trace formulas against direct algebra and
/// the finite oracle. The "checks" object carries the pass/fail flags used
/// by the acceptance suite.
json erratum_report(const ErratumSettings& s = {});

}  // namespace spectra
