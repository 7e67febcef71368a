#pragma once

#include <array>
#include <complex>
#include <vector>

#include "spectra/group.hpp"

namespace spectra {

/// Coefficients of the pencil R(z) = z0·e + z1·a + z2·t + z3·τ.
struct PencilPoint {
  std::array<cplx, 4> z{};

  PencilPoint() = default;
  PencilPoint(cplx z0, cplx z1, cplx z2, cplx z3) : z{z0, z1, z2, z3} {}

  cplx& operator[](std::size_t i) { return z[i]; }
  const cplx& operator[](std::size_t i) const { return z[i]; }

  /// max(1, max|z_i|²): makes |G±| dimensionless under z → cz.
  double scale() const;
  double max_abs() const;
  PencilPoint scaled(cplx c) const;
  bool is_finite() const;
};

enum class Sign { minus, plus };
const char* to_string(Sign s) noexcept;

struct GValues {
  cplx minus;
  cplx plus;
  cplx operator[](Sign s) const { return s == Sign::minus ? minus : plus; }
};

/// G∓_x(z) = (z0 ∓ z3)² − z1² − z2² − 2 z1 z2 x.
GValues g_values(const PencilPoint& z, cplx x);

struct SignedRoot {
  Sign sign;
  cplx x;
};

/// Roots x of G±_x(z) = 0, minus sign first. Requires z1·z2 ≠ 0.
std::array<SignedRoot, 2> solve_x(const PencilPoint& z);

struct Witness {
  Sign sign;
  cplx x;
  bool degenerate = false;  // G± independent of x; x is a placeholder
};

struct MembershipResult {
  bool in_spectrum = false;
  std::vector<Witness> witnesses;
  double margin = 0.0;
};

inline constexpr double kDefaultMembershipTol = 1e-9;

/// min over x ∈ [−1, 1] and both signs of |G±_x(z)| / scale.
double symbol_margin(const PencilPoint& z);

/// Closed-form membership in the joint spectrum: z is spectral iff one of the
/// G±_x(z) vanishes for some x ∈ [−1, 1]. Only in-range roots are reported as
/// witnesses, so in_spectrum == !witnesses.empty().
MembershipResult membership(const PencilPoint& z, double tol = kDefaultMembershipTol);

/// Membership for the D∞ pencil z0 + z1·a + z2·t (z3 = 0); both sign families
/// coincide so at most one witness per root is reported.
MembershipResult dinfty_membership(cplx z0, cplx z1, cplx z2,
                                   double tol = kDefaultMembershipTol);

struct SlicePlane {
  int u_axis = 0;
  int v_axis = 1;
  PencilPoint base;  // supplies the two fixed coordinates
};

struct SliceGrid {
  int n_u = 2;
  int n_v = 2;
  double u_min = -1.0, u_max = 1.0;
  double v_min = -1.0, v_max = 1.0;
};

struct RasterCell {
  double u;
  double v;
  double margin;
  bool in_spectrum;
};

/// Row-major (v outer, u inner) evaluation of membership over a real
/// affine 2-plane.
std::vector<RasterCell> slice_raster(const SlicePlane& plane, const SliceGrid& grid,
                                     double tol = kDefaultMembershipTol);

}  // namespace spectra
