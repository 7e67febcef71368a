#pragma once

#include <functional>
#include <random>
#include <string>

#include "spectra/symbol_spectrum.hpp"

namespace spectra {

/// Closed path s ∈ [0, 1] → ℂ⁴ together with its derivative dz/ds.
struct LoopPath {
  std::string name;
  std::function<PencilPoint(double)> point;
  std::function<PencilPoint(double)> velocity;
  int steps = 512;
};

/// z(s) = center + radius·e^{2πi·winding·s}·(sign_u·e_u + sign_v·e_v).
LoopPath circle_loop(std::string name, const PencilPoint& center, double radius,
                     int u_axis, int v_axis, double sign_u = 1.0, double sign_v = 1.0,
                     int winding = 1);

/// z0 − z3 circles the origin once, z0 + z3 stays at 3.
LoopPath loop_L1();
/// z0 + z3 circles the origin once, z0 − z3 stays at 3.
LoopPath loop_L2();

/// A loop in the z1 = z2 = 0 plane described by two independent circles
/// u(s) = z0 − z3 and v(s) = z0 + z3.
struct PlaneLoopSpec {
  cplx u_center;
  double u_radius;
  int u_turns;
  cplx v_center;
  double v_radius;
  int v_turns;

  /// Number of times u (resp. v) winds around 0.
  int u_winding() const;
  int v_winding() const;
};

LoopPath plane_loop(const PlaneLoopSpec& spec, std::string name = "plane");

/// Random plane loop whose circles stay at least 0.1 away from the origin.
PlaneLoopSpec random_plane_loop(std::mt19937_64& rng);

}  // namespace spectra
