#include "spectra/symbol_spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "spectra/error.hpp"
#include "spectra/parallel.hpp"

namespace spectra {

namespace {

// Below this (relative to scale) the two root families collide and G± is
// effectively independent of x.
constexpr double kDegenerateProduct = 1e-12;

// G_x = A − B·x with B = 2 z1 z2.
struct AffineSymbol {
  cplx A;
  cplx B;
};

AffineSymbol affine_symbol(const PencilPoint& z, Sign s) {
  const cplx c = s == Sign::minus ? z[0] - z[3] : z[0] + z[3];
  return {c * c - z[1] * z[1] - z[2] * z[2], 2.0 * z[1] * z[2]};
}

// min over real x in [−1, 1] of |A − B x|.
double min_abs_on_segment(const AffineSymbol& g) {
  const double b2 = std::norm(g.B);
  double x = 0.0;
  if (b2 > 0.0) x = std::clamp(std::real(g.A * std::conj(g.B)) / b2, -1.0, 1.0);
  return std::abs(g.A - g.B * x);
}

}  // namespace

double PencilPoint::max_abs() const {
  double m = 0.0;
  for (const auto& c : z) m = std::max(m, std::abs(c));
  return m;
}

double PencilPoint::scale() const {
  const double m = max_abs();
  return std::max(1.0, m * m);
}

PencilPoint PencilPoint::scaled(cplx c) const {
  return {c * z[0], c * z[1], c * z[2], c * z[3]};
}

bool PencilPoint::is_finite() const {
  return std::all_of(z.begin(), z.end(), [](const cplx& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

const char* to_string(Sign s) noexcept { return s == Sign::minus ? "-" : "+"; }

GValues g_values(const PencilPoint& z, cplx x) {
  const auto m = affine_symbol(z, Sign::minus);
  const auto p = affine_symbol(z, Sign::plus);
  return {m.A - m.B * x, p.A - p.B * x};
}

std::array<SignedRoot, 2> solve_x(const PencilPoint& z) {
  const cplx b = 2.0 * z[1] * z[2];
  if (b == cplx{}) {
    throw Error(ErrorKind::DegeneratePencil, "z1·z2 = 0: G± does not depend on x");
  }
  return {SignedRoot{Sign::minus, affine_symbol(z, Sign::minus).A / b},
          SignedRoot{Sign::plus, affine_symbol(z, Sign::plus).A / b}};
}

double symbol_margin(const PencilPoint& z) {
  const double m = std::min(min_abs_on_segment(affine_symbol(z, Sign::minus)),
                            min_abs_on_segment(affine_symbol(z, Sign::plus)));
  return m / z.scale();
}

MembershipResult membership(const PencilPoint& z, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "membership tol must be > 0");
  MembershipResult r;
  r.margin = symbol_margin(z);
  const double scale = z.scale();
  const cplx product = z[1] * z[2];

  if (std::abs(product) < kDegenerateProduct * scale) {
    for (Sign s : {Sign::minus, Sign::plus}) {
      if (min_abs_on_segment(affine_symbol(z, s)) <= tol * scale) {
        r.witnesses.push_back({s, cplx{}, true});
      }
    }
  } else {
    for (const auto& root : solve_x(z)) {
      // |x| = 1 counts as spectral: the union over x ∈ [−1, 1] is closed.
      if (std::abs(root.x.imag()) <= tol && std::abs(root.x.real()) <= 1.0 + tol) {
        r.witnesses.push_back({root.sign, root.x, false});
      }
    }
  }
  r.in_spectrum = !r.witnesses.empty();
  return r;
}

MembershipResult dinfty_membership(cplx z0, cplx z1, cplx z2, double tol) {
  MembershipResult r = membership(PencilPoint{z0, z1, z2, 0.0}, tol);
  // With z3 = 0 the two families are the same surface.
  if (r.witnesses.size() == 2) r.witnesses.resize(1);
  return r;
}

std::vector<RasterCell> slice_raster(const SlicePlane& plane, const SliceGrid& grid,
                                     double tol) {
  if (plane.u_axis == plane.v_axis) {
    throw Error(ErrorKind::InvalidPlane, "slice axes must differ");
  }
  for (int ax : {plane.u_axis, plane.v_axis}) {
    if (ax < 0 || ax > 3) throw Error(ErrorKind::InvalidPlane, "slice axis out of range");
  }
  if (grid.n_u < 2 || grid.n_v < 2) {
    throw Error(ErrorKind::InvalidArgument, "slice grid needs at least 2×2 cells");
  }
  std::vector<RasterCell> cells(static_cast<std::size_t>(grid.n_u) * grid.n_v);
  const double du = (grid.u_max - grid.u_min) / (grid.n_u - 1);
  const double dv = (grid.v_max - grid.v_min) / (grid.n_v - 1);
  parallel_for(cells.size(), [&](std::size_t idx) {
    const int iv = static_cast<int>(idx / grid.n_u);
    const int iu = static_cast<int>(idx % grid.n_u);
    const double u = grid.u_min + iu * du;
    const double v = grid.v_min + iv * dv;
    PencilPoint z = plane.base;
    z[plane.u_axis] = u;
    z[plane.v_axis] = v;
    const auto m = membership(z, tol);
    cells[idx] = {u, v, m.margin, m.in_spectrum};
  });
  return cells;
}

}  // namespace spectra
