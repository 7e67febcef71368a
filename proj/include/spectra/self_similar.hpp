#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "spectra/group.hpp"

namespace spectra {

/// How τ acts on the y-coordinate of the product tree: a plain swap of the
/// first letter, or a swap that also applies τ below every vertex.
enum class TauRealization { Swap, SwapWithRestriction };

/// Letters 0..3 stand for (x1,y1), (x2,y1), (x1,y2), (x2,y2): letter = i + 2j
/// with the x-index fastest. Public word I/O is 1-based.
using Letter = std::uint8_t;

struct WreathElement {
  std::array<Letter, 4> perm{0, 1, 2, 3};
  std::array<GroupElement, 4> restrictions{};

  friend bool operator==(const WreathElement&, const WreathElement&) = default;
};

/// a = σ on x, t = (a, t) on x, τ = σ on y (or σ(τ, τ)).
WreathElement generator_wreath(Word w, TauRealization tau = TauRealization::Swap);

/// Wreath decomposition of an arbitrary element, by multiplying out its
/// normal form (powers of at by repeated squaring).
WreathElement wreath_of(const GroupElement& g, TauRealization tau = TauRealization::Swap);

/// g·h: perm = g.perm ∘ h.perm, restriction at x = g|_{h(x)} · h|_x.
WreathElement wreath_mul(const WreathElement& g, const WreathElement& h);

/// True when g fixes every word of length ≤ depth.
bool acts_trivially(const GroupElement& g, int depth, TauRealization tau = TauRealization::Swap);

/// Applies g to a word over {1, 2, 3, 4}. Throws InvalidArgument on other letters.
std::vector<int> act_on_word(const GroupElement& g, const std::vector<int>& word,
                             TauRealization tau = TauRealization::Swap);

/// Action of g on the 4ⁿ words of length n; index of a word has its first
/// letter most significant.
struct LevelMatrix {
  int level = 0;
  std::vector<std::uint32_t> perm;

  std::size_t size() const noexcept { return perm.size(); }
  bool is_identity() const;
  /// (this ∘ other)(i) = this(other(i)).
  LevelMatrix compose(const LevelMatrix& other) const;
  friend bool operator==(const LevelMatrix&, const LevelMatrix&) = default;
};

inline constexpr int kMaxLevel = 6;
inline constexpr int kMaxMatrixLevel = 10;

/// Throws InvalidArgument for n < 0 and LevelTooLarge above kMaxMatrixLevel.
LevelMatrix level_matrix(const GroupElement& g, int n, TauRealization tau = TauRealization::Swap);

/// Order of a level permutation (lcm of cycle lengths).
std::uint64_t permutation_order(const LevelMatrix& m);

/// Ascending eigenvalues of z1·M(a) + z2·M(t) + z3·M(τ) at level n.
/// Throws LevelTooLarge for n > kMaxLevel.
std::vector<double> pencil_level_eigs(double z1, double z2, double z3, int n,
                                      TauRealization tau = TauRealization::Swap);

struct EigenViolation {
  double lambda;
  double margin;
};

struct EigenValidation {
  std::vector<EigenViolation> violations;
  double max_margin = 0.0;
  std::vector<double> eigenvalues;
};

/// Checks that every level-n eigenvalue λ gives a spectral point (−λ, z1, z2, z3).
EigenValidation validate_eigs_in_spectrum(double z1, double z2, double z3, int n, double tol);

/// Real slice {λ : (−λ, z1, z2, z3) spectral} as a union of closed intervals
/// λ = ±z3 ± r, r ∈ [||z1|−|z2||, |z1|+|z2|], merged and sorted.
std::vector<std::array<double, 2>> spectrum_slice(double z1, double z2, double z3);

/// max over the slice of the distance to the nearest eigenvalue.
double coverage_gap(double z1, double z2, double z3, int n);
double coverage_gap(const std::vector<std::array<double, 2>>& slice,
                    const std::vector<double>& eigenvalues);

}  // namespace spectra
