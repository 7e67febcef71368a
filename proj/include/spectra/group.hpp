#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace spectra {

using cplx = std::complex<double>;

/// Element of D∞h = <a, t, τ | a² = t² = τ² = 1, aτ = τa, tτ = τt> in the
/// normal form τ^tau_flag · t^t_flag · (at)^k.
struct GroupElement {
  std::int64_t k = 0;
  bool t_flag = false;
  bool tau_flag = false;

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// The four pencil generators, indexed like the pencil coordinates z0..z3.
enum class Word : int { e = 0, a = 1, t = 2, tau = 3 };

inline constexpr Word kWords[4] = {Word::e, Word::a, Word::t, Word::tau};

enum class Functional { CanonicalTrace, PhiTensorTrace };

namespace gen {
inline constexpr GroupElement e{0, false, false};
inline constexpr GroupElement a{-1, true, false};  // a = t·(at)^-1
inline constexpr GroupElement t{0, true, false};
inline constexpr GroupElement tau{0, false, true};
inline constexpr GroupElement u{1, false, false};  // at
}  // namespace gen

GroupElement to_element(Word w) noexcept;
const char* to_string(Word w) noexcept;
Word parse_word(std::string_view s);
const char* to_string(Functional f) noexcept;
Functional parse_functional(std::string_view s);

/// Normal form of g·h. Throws Error(Overflow) if the exponent leaves int64.
GroupElement mul(const GroupElement& g, const GroupElement& h);
GroupElement inv(const GroupElement& g);
GroupElement power(const GroupElement& g, std::int64_t n);

inline GroupElement operator*(const GroupElement& g, const GroupElement& h) {
  return mul(g, h);
}

/// Parses whitespace-separated words over {a, t, T, e}; T is τ. The product of
/// all letters is returned, e.g. "aTt a" = a·τ·t·a.
GroupElement parse_element(std::string_view text);
std::string to_string(const GroupElement& g);

/// Finitely supported element of the group algebra ℂ[D∞h].
class AlgebraElement {
 public:
  static constexpr double kPruneBelow = 1e-15;

  AlgebraElement() = default;
  explicit AlgebraElement(const GroupElement& g, cplx c = 1.0);

  cplx coeff(const GroupElement& g) const;
  const std::map<GroupElement, cplx>& terms() const noexcept { return terms_; }
  std::size_t support_size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Adds c·g, dropping the entry if the result falls below kPruneBelow.
  AlgebraElement& add(const GroupElement& g, cplx c);

  AlgebraElement& operator+=(const AlgebraElement& other);
  friend AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs);
  friend AlgebraElement operator*(cplx c, const AlgebraElement& f);

 private:
  std::map<GroupElement, cplx> terms_;
};

AlgebraElement algebra_mul(const AlgebraElement& f, const AlgebraElement& g);
AlgebraElement algebra_star(const AlgebraElement& f);

/// Coefficient of the identity.
cplx canonical_trace(const AlgebraElement& f);

/// φ̃⊗tr on ℂ[D∞h]: minus the identity coefficient plus the τ coefficient.
/// Central but not positive.
cplx phi_trace(const AlgebraElement& f);

cplx apply_functional(Functional kind, const AlgebraElement& f);

}  // namespace spectra
