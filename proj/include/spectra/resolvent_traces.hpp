#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spectra/group.hpp"
#include "spectra/loop.hpp"
#include "spectra/symbol_spectrum.hpp"

namespace spectra {

/// Where the θ-integrand of a 1-form coefficient comes from.
///
/// PaperFormula uses the published closed-form integrand whenever one is
/// displayed and falls back to the per-mode oracle otherwise. Adjudicated
/// keeps a published integrand only where the finite oracle confirms it.
enum class CoefficientSource { Adjudicated, PaperFormula };

enum class IntegrandOrigin { PaperDisplayed, OracleDefined };

const char* to_string(CoefficientSource s) noexcept;
const char* to_string(IntegrandOrigin o) noexcept;

/// Whether a closed-form integrand is published for this coefficient.
bool paper_formula_displayed(Functional f, Word w) noexcept;

/// Whether the published integrand agrees with the finite oracle. The
/// Tr(R⁻¹τ) and φ̃⊗tr(R⁻¹) integrands do not; the erratum report and the
/// unit tests re-derive this table from the oracle.
bool paper_formula_confirmed(Functional f, Word w) noexcept;

IntegrandOrigin integrand_origin(Functional f, Word w, CoefficientSource src) noexcept;

/// Published θ-integrands of Tr(R⁻¹·w) (generic case z0 ≠ ±z3); the
/// coefficient is their mean over [0, 2π]. Throws Error(OnSpectrum) when G±
/// vanishes at θ.
cplx integrand_tr(const PencilPoint& z, Word w, double theta);

/// Published integrands for the degenerate case z0 = ±z3, z3 ≠ 0 (e and τ
/// share one form, a and t the other). With Adjudicated the τ numerator is
/// z3 and the t numerator is z1·cosθ + z2, matching the oracle.
/// Throws NotDegenerate or OnSpectrum.
cplx integrand_tr_degenerate(const PencilPoint& z, Word w, double theta,
                             CoefficientSource src = CoefficientSource::PaperFormula);

/// Multiplier of mean_θ(integrand) in the degenerate case. The published e/τ
/// prefactor −1/π amounts to −2; the oracle-consistent value is 1.
double degenerate_weight(Word w, CoefficientSource src) noexcept;

/// Integrand of φ̃⊗tr(R⁻¹·w). Words e and a have published forms; t and τ
/// are always oracle-defined.
cplx integrand_phitr(const PencilPoint& z, Word w, double theta,
                     CoefficientSource src = CoefficientSource::Adjudicated);

cplx coefficient_integrand(const PencilPoint& z, Functional f, Word w, double theta,
                           CoefficientSource src);

struct TraceRequest {
  PencilPoint z;
  Functional functional = Functional::CanonicalTrace;
  Word word = Word::e;
  int n_nodes = 64;
  CoefficientSource source = CoefficientSource::Adjudicated;
};

struct QuadratureResult {
  cplx value;
  int nodes;     // node count of the returned value
  double change; // |I(nodes) − I(nodes/2)|
};

inline constexpr int kMaxQuadratureNodes = 1 << 14;

/// Mean of a 2π-periodic function over n uniform nodes θ_j = 2πj/n.
cplx trapezoid_mean(const std::function<cplx(double)>& f, int n);

/// Uniform-node mean with node doubling from n_nodes until two successive
/// results agree to ~1e−13. Throws NonConvergent if they still differ by more
/// than 1e−8 at kMaxQuadratureNodes.
QuadratureResult adaptive_mean(const std::function<cplx(double)>& f, int n_nodes);

/// The coefficient of dz_word in the functional's 1-form at z.
cplx trace_quadrature(const TraceRequest& req);

std::array<cplx, 4> trace_coefficients(const PencilPoint& z, Functional f, int n_nodes = 64,
                                       CoefficientSource src = CoefficientSource::Adjudicated);

/// Degenerate-case coefficient: degenerate_weight · mean(integrand_tr_degenerate).
cplx degenerate_quadrature(const PencilPoint& z, Word w, int n_nodes,
                           CoefficientSource src = CoefficientSource::PaperFormula);

/// (1/8π)∫ log(G⁻_θ G⁺_θ) dθ with the logarithm continued along θ. The θ = 0
/// branch is principal, or the branch nearest `anchor` when given.
cplx potential_tr(const PencilPoint& z, int n_nodes = 64, std::optional<cplx> anchor = {});

/// Principal log(G⁻_0 G⁺_0); pass as anchor to keep nearby potentials on one branch.
cplx potential_anchor(const PencilPoint& z);

inline constexpr double kDefaultStep = 1e-5;

/// Central difference in the real direction of one coordinate.
cplx central_difference(const std::function<cplx(const PencilPoint&)>& fn,
                        const PencilPoint& z, int coord, double step = kDefaultStep);

std::array<cplx, 4> potential_gradient(const PencilPoint& z, int n_nodes = 64,
                                       double step = kDefaultStep);

using ResidualMatrix = std::array<std::array<double, 4>, 4>;

/// Entry (i, j) = |∂_i c_j − ∂_j c_i| for the functional's coefficients c.
ResidualMatrix closedness_residual(const PencilPoint& z, Functional f,
                                   double step = kDefaultStep, int n_nodes = 64,
                                   CoefficientSource src = CoefficientSource::Adjudicated);

struct PeriodReport {
  cplx value;
  cplx quantum;
  std::int64_t nearest_multiple = 0;
  double residual = 0.0;
};

/// πi/2 for Tr, πi for φ̃⊗tr.
cplx period_quantum(Functional f) noexcept;
PeriodReport make_period_report(cplx value, Functional f);

/// ∮ Σ_w c_w(z) dz_w by the trapezoid rule in s, doubling the step count from
/// loop.steps until successive values agree to 1e−6.
PeriodReport loop_period(const LoopPath& loop, Functional f, int n_nodes = 64,
                         CoefficientSource src = CoefficientSource::Adjudicated);

struct IndependenceReport {
  std::array<std::vector<cplx>, 2> periods;                 // row 0 Tr, row 1 φ̃⊗tr
  std::array<std::vector<std::int64_t>, 2> multiples;       // in quantum units
  std::array<std::vector<double>, 2> residuals;
  int rank = 0;
};

IndependenceReport class_independence(const std::vector<LoopPath>& loops, int n_nodes = 64);

/// Rank over ℚ of an integer matrix (fraction-free elimination).
int integer_rank(std::vector<std::vector<std::int64_t>> rows);

}  // namespace spectra
