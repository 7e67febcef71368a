#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "spectra/error.hpp"
#include "spectra/finite_oracle.hpp"
#include "spectra/resolvent_traces.hpp"

using namespace spectra;

namespace {

constexpr double kPi = std::numbers::pi;
const PencilPoint kP(1.0, 8.0, 4.0, 2.0);

cplx oracle_mean(const PencilPoint& z, Functional f, Word w) {
  return adaptive_mean([&](double th) { return mode_integrand(z, f, w, th); }, 64).value;
}

cplx paper(const PencilPoint& z, Functional f, Word w) {
  return trace_quadrature({z, f, w, 64, CoefficientSource::PaperFormula});
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

PencilPoint random_resolvent(std::mt19937_64& rng, double box, double min_margin) {
  std::uniform_real_distribution<double> d(-box, box);
  for (;;) {
    const PencilPoint z(d(rng), d(rng), d(rng), d(rng));
    if (symbol_margin(z) > min_margin) return z;
  }
}

}  // namespace

TEST_CASE("published Tr integrands") {
  for (Word w : kWords) {
    const cplx v = integrand_tr(PencilPoint(1, 0, 0, 0), w, 0.4);
    CHECK(std::abs(v - (w == Word::e ? 1.0 : 0.0)) < 1e-15);
  }
  for (double th : {0.0, 1.0, 2.5}) {
    const double c = std::cos(th);
    CHECK(std::abs(integrand_tr(kP, Word::e, th) + (83 + 64 * c) / ((79 + 64 * c) * (71 + 64 * c))) < 1e-15);
  }
  CHECK(std::abs(integrand_tr(PencilPoint(2, 0, 0, 1), Word::tau, 0.3) - 1.0 / 3.0) < 1e-15);
  CHECK(kind_of([] { integrand_tr(PencilPoint(0, 1, 1, 2), Word::e, 0.0); }) == ErrorKind::OnSpectrum);
}

TEST_CASE("published phi-trace integrands") {
  for (double th : {0.0, 1.0, 2.5}) {
    const double c = std::cos(th);
    CHECK(std::abs(integrand_phitr(kP, Word::a, th) - (8 + 4 * c) / -(79 + 64 * c)) < 1e-15);
  }
  CHECK(std::abs(integrand_phitr(PencilPoint(1, 0, 0, 0), Word::e, 0.0) + 1.0) < 1e-15);
  // The published e-integrand gives −1/3 at (2,0,0,1); algebra gives −1.
  CHECK(std::abs(integrand_phitr(PencilPoint(2, 0, 0, 1), Word::e, 0.0, CoefficientSource::PaperFormula) +
                 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(integrand_phitr(PencilPoint(2, 0, 0, 1), Word::e, 0.0) + 1.0) < 1e-14);
}

TEST_CASE("adjudication table is re-derived from the oracle") {
  const std::vector<PencilPoint> pts{kP, PencilPoint(2, 0, 0, 1), PencilPoint(3, 0.5, -0.25, 1),
                                     PencilPoint(cplx(1, 1), 0.5, 0.3, 0.2)};
  for (Functional f : {Functional::CanonicalTrace, Functional::PhiTensorTrace}) {
    for (Word w : kWords) {
      if (!paper_formula_displayed(f, w)) {
        CHECK(integrand_origin(f, w, CoefficientSource::PaperFormula) == IntegrandOrigin::OracleDefined);
        continue;
      }
      double diff = 0.0;
      for (const auto& z : pts) diff = std::max(diff, std::abs(paper(z, f, w) - oracle_mean(z, f, w)));
      CAPTURE(to_string(f));
      CAPTURE(to_string(w));
      CHECK((diff < 1e-10) == paper_formula_confirmed(f, w));
    }
  }
  CHECK(integrand_origin(Functional::CanonicalTrace, Word::tau, CoefficientSource::Adjudicated) ==
        IntegrandOrigin::OracleDefined);
  CHECK(integrand_origin(Functional::CanonicalTrace, Word::e, CoefficientSource::Adjudicated) ==
        IntegrandOrigin::PaperDisplayed);
}

TEST_CASE("trace quadrature examples") {
  CHECK(std::abs(trace_quadrature({PencilPoint(1, 0, 0, 0)}) - 1.0) < 1e-15);
  const double tr_e = 0.5 / std::sqrt(2145.0) - 1.5 / std::sqrt(945.0);
  CHECK(std::abs(trace_quadrature({kP, Functional::CanonicalTrace, Word::e}) - tr_e) < 1e-13);
  const double phi_a = -(1.0 / 16.0 + 49.0 / (16.0 * std::sqrt(2145.0)));
  CHECK(std::abs(trace_quadrature({kP, Functional::PhiTensorTrace, Word::a}) - phi_a) < 1e-13);
  CHECK(std::abs(trace_quadrature({kP, Functional::PhiTensorTrace, Word::e}) + 1.0 / std::sqrt(2145.0)) <
        1e-13);
  CHECK(std::abs(trace_quadrature({PencilPoint(2, 0, 0, 1), Functional::CanonicalTrace, Word::tau}) +
                 1.0 / 3.0) < 1e-14);
  CHECK(kind_of([] { trace_quadrature({kP, Functional::CanonicalTrace, Word::e, 5}); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("quadrature errors shrink geometrically under doubling") {
  // G± vanish at cos θ = −1.1875: slow enough to watch the decay.
  const PencilPoint z(0.5, 2.0, 1.0, 0.0);
  REQUIRE_FALSE(membership(z).in_spectrum);
  auto f = [&](double th) { return integrand_tr(z, Word::a, th); };
  const cplx exact = adaptive_mean(f, 64).value;
  double prev = std::abs(trapezoid_mean(f, 16) - exact);
  for (int n = 32; n <= 512; n *= 2) {
    const double err = std::abs(trapezoid_mean(f, n) - exact);
    if (prev < 1e-13) break;
    CHECK(err < 0.5 * prev);
    prev = err;
  }
}

TEST_CASE("degenerate integrands") {
  // (1,1,0,1): (1+0)(2−1)/((4−1)·1) = 1/3 for every θ.
  for (double th : {0.0, 1.3, 2.9}) {
    CHECK(std::abs(integrand_tr_degenerate(PencilPoint(1, 1, 0, 1), Word::a, th) - 1.0 / 3.0) < 1e-15);
  }
  // Published a and t forms coincide; the adjudicated t form does not.
  const PencilPoint z(1, 0.1, 0.1, 1);
  for (double th : {0.0, 1.0, 2.0}) {
    CHECK(integrand_tr_degenerate(z, Word::t, th) == integrand_tr_degenerate(z, Word::a, th));
  }
  CHECK(kind_of([&] { integrand_tr_degenerate(z, Word::a, kPi); }) == ErrorKind::OnSpectrum);
  CHECK(kind_of([] { integrand_tr_degenerate(kP, Word::e, 0.0); }) == ErrorKind::NotDegenerate);
  CHECK(kind_of([] { integrand_tr_degenerate(PencilPoint(0, 1, 0, 0), Word::e, 0.0); }) ==
        ErrorKind::NotDegenerate);

  // R = 1 + a/2 + τ: tr R⁻¹ = ½(tr (a/2)⁻¹ + tr (2 + a/2)⁻¹) = 1/3.75.
  const PencilPoint q(1, 0.5, 0, 1);
  CHECK(std::abs(degenerate_quadrature(q, Word::e, 64, CoefficientSource::Adjudicated) - 1.0 / 3.75) < 1e-14);
  CHECK(std::abs(degenerate_quadrature(q, Word::e, 64) + 2.0 / 3.75) < 1e-14);
  CHECK(degenerate_weight(Word::e, CoefficientSource::PaperFormula) == -2.0);
  CHECK(degenerate_weight(Word::a, CoefficientSource::PaperFormula) == 1.0);
}

TEST_CASE("degenerate consistency with the oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  int tested = 0;
  while (tested < 10) {
    const cplx z0(d(rng), d(rng));
    const double sign = tested % 2 == 0 ? 1.0 : -1.0;
    const PencilPoint z(z0, cplx(d(rng), d(rng)), cplx(d(rng), d(rng)), sign * z0);
    if (std::abs(z0) < 0.3 || symbol_margin(z) < 0.05) continue;
    ++tested;
    for (Word w : kWords) {
      const cplx fixed = degenerate_quadrature(z, w, 64, CoefficientSource::Adjudicated);
      CHECK(std::abs(fixed - oracle_mean(z, Functional::CanonicalTrace, w)) < 1e-10);
    }
  }
}

TEST_CASE("potential examples and gradient") {
  CHECK(std::abs(potential_tr(PencilPoint(1, 0, 0, 0))) < 1e-15);
  CHECK(std::abs(potential_tr(PencilPoint(2, 0, 0, 1)) - 0.5 * std::log(3.0)) < 1e-14);
  const auto grad = potential_gradient(kP);
  const auto coef = trace_coefficients(kP, Functional::CanonicalTrace);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(grad[i] - coef[i]) < 1e-8);
  CHECK(kind_of([] { potential_tr(PencilPoint(0, 1, 1, 2)); }) == ErrorKind::OnSpectrum);
}

TEST_CASE("exactness at random resolvent points") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 20; ++i) {
    const PencilPoint z = random_resolvent(rng, 3.0, 0.1);
    const auto grad = potential_gradient(z);
    const auto coef = trace_coefficients(z, Functional::CanonicalTrace);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(grad[k] - coef[k]) < 1e-6);
  }
}

TEST_CASE("closedness at p") {
  for (Functional f : {Functional::CanonicalTrace, Functional::PhiTensorTrace}) {
    const ResidualMatrix r = closedness_residual(kP, f);
    for (const auto& row : r) {
      for (double v : row) CHECK(v <= 1e-6);
    }
  }
  const ResidualMatrix bad =
      closedness_residual(kP, Functional::PhiTensorTrace, kDefaultStep, 64, CoefficientSource::PaperFormula);
  const double first = 14872.0 / (45045.0 * std::sqrt(105.0)) - 7896.0 / (45045.0 * std::sqrt(2145.0));
  const double second = 752.0 / (2145.0 * std::sqrt(2145.0));
  CHECK(bad[0][1] == doctest::Approx(first - second).epsilon(1e-5));
  CHECK(bad[1][0] == bad[0][1]);
}

TEST_CASE("closedness at random resolvent points") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 8; ++i) {
    const PencilPoint z = random_resolvent(rng, 2.0, 0.1);
    for (Functional f : {Functional::CanonicalTrace, Functional::PhiTensorTrace}) {
      double worst = 0.0;
      for (const auto& row : closedness_residual(z, f)) {
        for (double v : row) worst = std::max(worst, v);
      }
      CHECK(worst <= 1e-5);
    }
  }
}

TEST_CASE("loop periods") {
  const auto l1_tr = loop_period(loop_L1(), Functional::CanonicalTrace);
  CHECK(l1_tr.nearest_multiple == 2);
  CHECK(l1_tr.residual <= 1e-6);
  CHECK(std::abs(l1_tr.value - cplx(0, kPi)) <= 1e-6);
  const auto l1_phi = loop_period(loop_L1(), Functional::PhiTensorTrace);
  CHECK(l1_phi.nearest_multiple == -2);
  CHECK(std::abs(l1_phi.value - cplx(0, -2 * kPi)) <= 1e-6);
  const auto l2_phi = loop_period(loop_L2(), Functional::PhiTensorTrace);
  CHECK(l2_phi.nearest_multiple == 0);
  CHECK(std::abs(l2_phi.value) <= 1e-6);
  CHECK(loop_period(loop_L2(), Functional::CanonicalTrace).nearest_multiple == 2);

  const LoopPath bad = circle_loop("bad", PencilPoint(1, 0, 0, 0), 1.0, 3, 1, 1.0, 0.0);
  CHECK(kind_of([&] { loop_period(bad, Functional::CanonicalTrace); }) == ErrorKind::LoopHitsSpectrum);
}

TEST_CASE("period report bookkeeping") {
  const PeriodReport r = make_period_report(cplx(0.001, 3.0 * kPi / 2), Functional::CanonicalTrace);
  CHECK(r.nearest_multiple == 3);
  CHECK(r.residual == doctest::Approx(0.001));
  CHECK(period_quantum(Functional::PhiTensorTrace) == cplx(0, kPi));
}

TEST_CASE("period quantization on random plane loops") {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 4; ++i) {
    const PlaneLoopSpec spec = random_plane_loop(rng);
    LoopPath loop = plane_loop(spec);
    loop.steps = 256;
    const auto tr = loop_period(loop, Functional::CanonicalTrace);
    const auto phi = loop_period(loop, Functional::PhiTensorTrace);
    CHECK(tr.residual <= 1e-6);
    CHECK(phi.residual <= 1e-6);
    CHECK(tr.nearest_multiple == 2 * (spec.u_winding() + spec.v_winding()));
    CHECK(phi.nearest_multiple == -2 * spec.u_winding());
  }
}

TEST_CASE("class independence") {
  const auto both = class_independence({loop_L1(), loop_L2()});
  CHECK(both.rank == 2);
  CHECK(both.multiples[0] == std::vector<std::int64_t>{2, 2});
  CHECK(both.multiples[1] == std::vector<std::int64_t>{-2, 0});
  CHECK(class_independence({loop_L1(), loop_L1()}).rank == 1);
  CHECK(class_independence({loop_L2()}).rank == 1);
}

TEST_CASE("integer rank") {
  CHECK(integer_rank({{2, 2}, {-2, 0}}) == 2);
  CHECK(integer_rank({{2, 2}, {-2, -2}}) == 1);
  CHECK(integer_rank({{0, 0}, {0, 0}}) == 0);
  CHECK(integer_rank({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}}) == 2);
  CHECK(integer_rank({{0, 3}, {5, 0}}) == 2);
  CHECK(integer_rank({}) == 0);
}
