#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "spectra/error.hpp"
#include "spectra/group.hpp"

using namespace spectra;

namespace {

GroupElement el(std::int64_t k, bool t, bool tau) { return GroupElement{k, t, tau}; }

// Elements as 2×2 integer matrices acting on ℤ ⊕ ℤ/2-sign: (at)^k ↦ translation
// by k, t ↦ reflection x ↦ −x, τ tracked as a separate sign. Independent of the
// normal-form code path.
struct Affine {
  int sign;          // ±1 linear part
  std::int64_t off;  // translation
  int tau;           // 0/1
};

Affine affine_of(const GroupElement& g) {
  // τ^ε t^δ u^k acts as x ↦ (−1)^δ (x + k)
  return {g.t_flag ? -1 : 1, g.t_flag ? -g.k : g.k, g.tau_flag ? 1 : 0};
}

Affine compose(const Affine& f, const Affine& g) {
  return {f.sign * g.sign, f.sign * g.off + f.off, f.tau ^ g.tau};
}

bool same(const Affine& f, const Affine& g) {
  return f.sign == g.sign && f.off == g.off && f.tau == g.tau;
}

GroupElement random_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(-20, 20), bit(0, 1);
  return el(k(rng), bit(rng) == 1, bit(rng) == 1);
}

AlgebraElement random_algebra(std::mt19937_64& rng, int terms) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  AlgebraElement f;
  for (int i = 0; i < terms; ++i) f.add(random_element(rng), cplx(c(rng), c(rng)));
  return f;
}

bool close(const AlgebraElement& f, const AlgebraElement& g, double tol = 1e-12) {
  const AlgebraElement d = f - g;
  for (const auto& [k, v] : d.terms()) {
    if (std::abs(v) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("mul examples") {
  CHECK(mul(gen::t, gen::t) == gen::e);
  CHECK(mul(el(1, false, false), gen::t) == el(-1, true, false));
  CHECK(mul(el(2, false, true), el(3, false, true)) == el(5, false, false));
}

TEST_CASE("generator relations") {
  for (const auto& g : {gen::a, gen::t, gen::tau}) CHECK(g * g == gen::e);
  CHECK(gen::a * gen::tau == gen::tau * gen::a);
  CHECK(gen::t * gen::tau == gen::tau * gen::t);
  CHECK(gen::a * gen::t == gen::u);
  CHECK(gen::t * gen::u * gen::t == inv(gen::u));
}

TEST_CASE("inv examples") {
  CHECK(inv(gen::e) == gen::e);
  CHECK(inv(el(5, false, false)) == el(-5, false, false));
  const GroupElement g = el(3, true, true);
  CHECK(inv(g) == g);
  CHECK(g * g == gen::e);
}

TEST_CASE("multiplication agrees with the affine model") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const GroupElement g = random_element(rng);
    const GroupElement h = random_element(rng);
    CHECK(same(affine_of(g * h), compose(affine_of(g), affine_of(h))));
  }
}

TEST_CASE("group laws on random elements") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const GroupElement g = random_element(rng);
    const GroupElement h = random_element(rng);
    const GroupElement f = random_element(rng);
    CHECK((g * h) * f == g * (h * f));
    CHECK(inv(g * h) == inv(h) * inv(g));
    CHECK(g * inv(g) == gen::e);
    CHECK(gen::tau * g == g * gen::tau);
  }
}

TEST_CASE("power and overflow") {
  CHECK(power(gen::u, 5) == el(5, false, false));
  CHECK(power(gen::u, -3) == el(-3, false, false));
  CHECK(power(gen::a, 7) == gen::a);
  const GroupElement big = el(std::numeric_limits<std::int64_t>::max(), false, false);
  CHECK_THROWS_AS(mul(big, gen::u), Error);
  try {
    mul(big, gen::u);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("element parser") {
  CHECK(parse_element("aTt a") == gen::a * gen::tau * gen::t * gen::a);
  CHECK(parse_element("e") == gen::e);
  CHECK(parse_element("at") == gen::u);
  CHECK_THROWS_AS(parse_element("ax"), Error);
  CHECK_THROWS_AS(parse_element("   "), Error);
  CHECK(parse_word("tau") == Word::tau);
  CHECK(parse_functional("phitr") == Functional::PhiTensorTrace);
}

TEST_CASE("algebra product examples") {
  const AlgebraElement a(gen::a), t(gen::t), e(gen::e), tau(gen::tau);
  CHECK(close(algebra_mul(e, a), a));
  CHECK(close(algebra_mul(tau, tau), e));
  const AlgebraElement s = a + t;
  const AlgebraElement sq = algebra_mul(s, s);
  // Hand expansion: a² + at + ta + t² = 2e + at + ta.
  AlgebraElement expected = AlgebraElement(gen::e, 2.0) + AlgebraElement(gen::a * gen::t) +
                            AlgebraElement(gen::t * gen::a);
  CHECK(close(sq, expected));
  CHECK(canonical_trace(sq) == cplx(2.0));
  CHECK(sq.support_size() == 3);
}

TEST_CASE("star examples and involution") {
  CHECK(algebra_star(AlgebraElement(gen::e, cplx(2, 3))).coeff(gen::e) == cplx(2, -3));
  const AlgebraElement s = algebra_star(AlgebraElement(gen::u, cplx(0, 1)));
  CHECK(s.coeff(el(-1, false, false)) == cplx(0, -1));
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const AlgebraElement f = random_algebra(rng, 5);
    const AlgebraElement g = random_algebra(rng, 4);
    CHECK(close(algebra_star(algebra_star(f)), f));
    CHECK(close(algebra_star(algebra_mul(f, g)), algebra_mul(algebra_star(g), algebra_star(f))));
  }
}

TEST_CASE("pruning keeps supports free of zeros") {
  AlgebraElement f(gen::a, 1.0);
  f.add(gen::a, -1.0);
  CHECK(f.is_zero());
  f.add(gen::t, 1e-16);
  CHECK(f.is_zero());
}

TEST_CASE("functional values") {
  CHECK(canonical_trace(AlgebraElement(gen::e)) == cplx(1.0));
  CHECK(canonical_trace(AlgebraElement(gen::a)) == cplx(0.0));
  CHECK(phi_trace(AlgebraElement(gen::e)) == cplx(-1.0));
  CHECK(phi_trace(AlgebraElement(gen::tau)) == cplx(1.0));
  CHECK(phi_trace(AlgebraElement(gen::a)) == cplx(0.0));
  CHECK(apply_functional(Functional::PhiTensorTrace, AlgebraElement(gen::e)) == cplx(-1.0));
}

TEST_CASE("centrality, positivity and the sign witness") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const AlgebraElement f = random_algebra(rng, 6);
    const AlgebraElement g = random_algebra(rng, 6);
    CHECK(std::abs(canonical_trace(algebra_mul(f, g)) - canonical_trace(algebra_mul(g, f))) < 1e-12);
    CHECK(std::abs(phi_trace(algebra_mul(f, g)) - phi_trace(algebra_mul(g, f))) < 1e-12);
    const cplx pos = canonical_trace(algebra_mul(algebra_star(f), f));
    CHECK(pos.real() >= 0.0);
    CHECK(std::abs(pos.imag()) < 1e-12);
  }
  // φ̃⊗tr(e* e) = −1 < 0: not positive.
  const AlgebraElement e(gen::e);
  CHECK(phi_trace(algebra_mul(algebra_star(e), e)).real() < 0.0);
}
