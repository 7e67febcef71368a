#include "spectra/loop.hpp"

#include <cmath>
#include <numbers>

#include "spectra/error.hpp"

namespace spectra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI{0.0, 1.0};

int winding_of(cplx center, double radius, int turns) {
  return std::abs(center) < radius ? turns : 0;
}

}  // namespace

LoopPath circle_loop(std::string name, const PencilPoint& center, double radius,
                     int u_axis, int v_axis, double sign_u, double sign_v, int winding) {
  if (u_axis < 0 || u_axis > 3 || v_axis < 0 || v_axis > 3 || u_axis == v_axis) {
    throw Error(ErrorKind::InvalidArgument, "circle loop needs two distinct axes in 0..3");
  }
  LoopPath loop;
  loop.name = std::move(name);
  loop.point = [=](double s) {
    const cplx e = radius * std::exp(kI * (kTwoPi * winding * s));
    PencilPoint z = center;
    z[u_axis] += sign_u * e;
    z[v_axis] += sign_v * e;
    return z;
  };
  loop.velocity = [=](double s) {
    const cplx de = radius * kI * (kTwoPi * winding) * std::exp(kI * (kTwoPi * winding * s));
    PencilPoint dz;
    dz[u_axis] = sign_u * de;
    dz[v_axis] = sign_v * de;
    return dz;
  };
  return loop;
}

LoopPath loop_L1() {
  return circle_loop("L1", PencilPoint{1.5, 0.0, 0.0, 1.5}, 0.5, 0, 3, 1.0, -1.0);
}

LoopPath loop_L2() {
  return circle_loop("L2", PencilPoint{1.5, 0.0, 0.0, -1.5}, 0.5, 0, 3, 1.0, 1.0);
}

int PlaneLoopSpec::u_winding() const { return winding_of(u_center, u_radius, u_turns); }
int PlaneLoopSpec::v_winding() const { return winding_of(v_center, v_radius, v_turns); }

LoopPath plane_loop(const PlaneLoopSpec& spec, std::string name) {
  LoopPath loop;
  loop.name = std::move(name);
  auto uv = [spec](double s) {
    return std::pair{spec.u_center + spec.u_radius * std::exp(kI * (kTwoPi * spec.u_turns * s)),
                     spec.v_center + spec.v_radius * std::exp(kI * (kTwoPi * spec.v_turns * s))};
  };
  auto duv = [spec](double s) {
    return std::pair{spec.u_radius * kI * (kTwoPi * spec.u_turns) *
                         std::exp(kI * (kTwoPi * spec.u_turns * s)),
                     spec.v_radius * kI * (kTwoPi * spec.v_turns) *
                         std::exp(kI * (kTwoPi * spec.v_turns * s))};
  };
  // z0 = (u + v)/2, z3 = (v − u)/2.
  loop.point = [uv](double s) {
    const auto [u, v] = uv(s);
    return PencilPoint{0.5 * (u + v), 0.0, 0.0, 0.5 * (v - u)};
  };
  loop.velocity = [duv](double s) {
    const auto [du, dv] = duv(s);
    return PencilPoint{0.5 * (du + dv), 0.0, 0.0, 0.5 * (dv - du)};
  };
  return loop;
}

PlaneLoopSpec random_plane_loop(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::uniform_real_distribution<double> radius(0.2, 1.5);
  std::uniform_int_distribution<int> coin(0, 1);
  auto circle = [&](cplx& c, double& r, int& turns) {
    do {
      c = cplx{center(rng), center(rng)};
      r = radius(rng);
    } while (std::abs(std::abs(c) - r) < 0.1);
    turns = coin(rng) ? 1 : -1;
  };
  PlaneLoopSpec spec{};
  circle(spec.u_center, spec.u_radius, spec.u_turns);
  circle(spec.v_center, spec.v_radius, spec.v_turns);
  return spec;
}

}  // namespace spectra
