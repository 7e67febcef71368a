#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spectra/error.hpp"
#include "spectra/self_similar.hpp"
#include "spectra/symbol_spectrum.hpp"

using namespace spectra;

namespace {

// Recursive action straight from the generator definitions, 0-based letters
// i + 2j: a flips i, τ flips j, t keeps the letter and acts by a (i = 0) or t
// (i = 1) on the tail.
void act_generator(char g, std::vector<int>& w, std::size_t from, TauRealization tau) {
  if (from >= w.size()) return;
  switch (g) {
    case 'a':
      w[from] ^= 1;
      break;
    case 'T':
      w[from] ^= 2;
      if (tau == TauRealization::SwapWithRestriction) act_generator('T', w, from + 1, tau);
      break;
    case 't':
      act_generator((w[from] & 1) == 0 ? 'a' : 't', w, from + 1, tau);
      break;
  }
}

// Letters are applied right to left.
std::vector<int> act_string(const std::string& word, std::vector<int> w,
                            TauRealization tau = TauRealization::Swap) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) act_generator(*it, w, 0, tau);
  return w;
}

std::string random_string(std::mt19937_64& rng, int len) {
  static const char letters[] = {'a', 't', 'T'};
  std::uniform_int_distribution<int> d(0, 2);
  std::string s;
  for (int i = 0; i < len; ++i) s += letters[d(rng)];
  return s;
}

std::vector<int> index_to_word(std::uint32_t idx, int n) {
  std::vector<int> w(n);
  for (int i = n - 1; i >= 0; --i) {
    w[i] = static_cast<int>(idx & 3U);
    idx >>= 2U;
  }
  return w;
}

std::uint32_t word_to_index(const std::vector<int>& w) {
  std::uint32_t idx = 0;
  for (int l : w) idx = idx * 4 + static_cast<std::uint32_t>(l);
  return idx;
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

}  // namespace

TEST_CASE("generator wreath examples") {
  const auto a = generator_wreath(Word::a);
  CHECK(a.perm == std::array<Letter, 4>{1, 0, 3, 2});
  const auto t = generator_wreath(Word::t);
  CHECK(t.perm == std::array<Letter, 4>{0, 1, 2, 3});
  CHECK(t.restrictions == std::array<GroupElement, 4>{gen::a, gen::t, gen::a, gen::t});
  const auto tau = generator_wreath(Word::tau);
  CHECK(tau.perm == std::array<Letter, 4>{2, 3, 0, 1});
  CHECK(tau.restrictions[0] == gen::e);
  CHECK(generator_wreath(Word::tau, TauRealization::SwapWithRestriction).restrictions[3] == gen::tau);
}

TEST_CASE("wreath products") {
  const auto a = generator_wreath(Word::a);
  const auto t = generator_wreath(Word::t);
  const auto tau = generator_wreath(Word::tau);
  CHECK(wreath_mul(a, a) == WreathElement{});
  // τa = (0 3)(1 2)
  CHECK(wreath_mul(tau, a).perm == std::array<Letter, 4>{3, 2, 1, 0});
  const auto tt = wreath_mul(t, t);
  CHECK(tt.perm == std::array<Letter, 4>{0, 1, 2, 3});
  CHECK(tt.restrictions == std::array<GroupElement, 4>{gen::e, gen::e, gen::e, gen::e});
  CHECK(acts_trivially(gen::t * gen::t, 5));
  CHECK(acts_trivially(gen::t, 1));
  CHECK_FALSE(acts_trivially(gen::t, 2));
  CHECK(wreath_of(gen::u) == wreath_mul(a, t));
  CHECK(wreath_of(inv(gen::u)) == wreath_mul(t, a));
}

TEST_CASE("act_on_word examples") {
  CHECK(act_on_word(gen::a, {1, 3, 2}) == std::vector<int>{2, 3, 2});
  CHECK(act_on_word(gen::tau, {1, 3}) == std::vector<int>{3, 3});
  CHECK(act_on_word(gen::t, {1, 1}) == std::vector<int>{1, 2});
  CHECK(act_on_word(gen::tau, {1, 3}, TauRealization::SwapWithRestriction) == std::vector<int>{3, 1});
  CHECK(act_on_word(gen::e, {}).empty());
  CHECK(kind_of([] { act_on_word(gen::a, {1, 5}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { act_on_word(gen::a, {0}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("action agrees with the recursive model") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> len(0, 12), letter(0, 3), depth(1, 6);
  for (TauRealization tau : {TauRealization::Swap, TauRealization::SwapWithRestriction}) {
    for (int i = 0; i < 300; ++i) {
      const std::string s = random_string(rng, len(rng));
      std::vector<int> w(depth(rng));
      for (int& l : w) l = letter(rng);
      std::vector<int> w1(w.size());
      for (std::size_t k = 0; k < w.size(); ++k) w1[k] = w[k] + 1;
      std::vector<int> got = act_on_word(parse_element(s.empty() ? "e" : s), w1, tau);
      for (int& l : got) --l;
      CHECK(got == act_string(s, w, tau));
    }
  }
}

TEST_CASE("level matrix examples") {
  CHECK(level_matrix(gen::e, 0).perm == std::vector<std::uint32_t>{0});
  CHECK(level_matrix(gen::a, 1).perm == std::vector<std::uint32_t>{1, 0, 3, 2});
  CHECK(level_matrix(gen::t, 1).is_identity());
  const std::vector<std::uint32_t> t2{1, 0, 3, 2, 4, 5, 6, 7, 9, 8, 11, 10, 12, 13, 14, 15};
  CHECK(level_matrix(gen::t, 2).perm == t2);
  CHECK(level_matrix(gen::tau, 2).perm[0] == 8);
  for (int n = 0; n <= 4; ++n) {
    const auto m = level_matrix(gen::u, n);
    for (std::uint32_t i = 0; i < m.size(); ++i) {
      CHECK(m.perm[i] == word_to_index(act_string("at", index_to_word(i, n))));
    }
  }
  CHECK(kind_of([] { level_matrix(gen::a, 11); }) == ErrorKind::LevelTooLarge);
  CHECK(kind_of([] { level_matrix(gen::a, -1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("level matrices form a homomorphism") {
  std::mt19937_64 rng(52);
  std::uniform_int_distribution<int> len(1, 10), level(1, 4);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g = parse_element(random_string(rng, len(rng)));
    const GroupElement h = parse_element(random_string(rng, len(rng)));
    const int n = level(rng);
    CHECK(level_matrix(g * h, n) == level_matrix(g, n).compose(level_matrix(h, n)));
    CHECK(level_matrix(inv(g), n).compose(level_matrix(g, n)).is_identity());
  }
}

TEST_CASE("relations hold on the tree") {
  for (TauRealization tau : {TauRealization::Swap, TauRealization::SwapWithRestriction}) {
    for (int n = 1; n <= 4; ++n) {
      for (const auto& g : {gen::a, gen::t, gen::tau}) {
        CHECK(level_matrix(g * g, n, tau).is_identity());
      }
      const auto a = level_matrix(gen::a, n, tau), t = level_matrix(gen::t, n, tau),
                 s = level_matrix(gen::tau, n, tau);
      CHECK(a.compose(s) == s.compose(a));
      CHECK(t.compose(s) == s.compose(t));
    }
  }
}

TEST_CASE("at has growing order") {
  for (int n = 1; n <= 6; ++n) {
    const std::uint64_t order = permutation_order(level_matrix(gen::u, n));
    CHECK(order == (std::uint64_t{1} << n));
  }
}

TEST_CASE("level eigenvalue examples") {
  const auto e1 = pencil_level_eigs(1, 1, 1, 1);
  REQUIRE(e1.size() == 4);
  const std::vector<double> want{-1, 1, 1, 3};
  for (std::size_t i = 0; i < 4; ++i) CHECK(e1[i] == doctest::Approx(want[i]));

  const auto e3 = pencil_level_eigs(1, 0, 0, 3);
  REQUIRE(e3.size() == 64);
  for (double l : e3) CHECK(std::abs(std::abs(l) - 1.0) < 1e-12);
  CHECK(e3[31] == doctest::Approx(-1.0));
  CHECK(e3[32] == doctest::Approx(1.0));

  for (double l : pencil_level_eigs(1, 1, 0.5, 4)) CHECK(std::abs(l) <= 2.5 + 1e-12);
  CHECK(kind_of([] { pencil_level_eigs(1, 1, 1, 7); }) == ErrorKind::LevelTooLarge);
}

TEST_CASE("level eigenvalues lie in the spectrum") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 5; ++i) {
    const double z1 = d(rng), z2 = d(rng), z3 = d(rng);
    for (int n = 1; n <= 4; ++n) {
      const auto v = validate_eigs_in_spectrum(z1, z2, z3, n, 1e-9);
      CHECK(v.violations.empty());
      CHECK(v.eigenvalues.size() == (std::size_t{1} << (2 * n)));
    }
  }
}

TEST_CASE("spectrum slice and coverage") {
  const auto slice = spectrum_slice(1, 1, 0.5);
  REQUIRE(slice.size() == 1);
  CHECK(slice[0][0] == doctest::Approx(-2.5));
  CHECK(slice[0][1] == doctest::Approx(2.5));
  const auto pts = spectrum_slice(1, 0, 0);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][0] == pts[0][1]);
  CHECK(coverage_gap(1, 0, 0, 3) == doctest::Approx(0.0));

  CHECK(coverage_gap({{0.0, 1.0}}, {0.0, 1.0}) == doctest::Approx(0.5));
  CHECK(coverage_gap({{0.0, 1.0}}, {2.0}) == doctest::Approx(2.0));

  const std::vector<double> measured{0.585786, 0.283227, 0.151537, 0.0805694};
  double prev = 1e9;
  for (int n = 2; n <= 5; ++n) {
    const double gap = coverage_gap(1, 1, 0.5, n);
    CHECK(gap == doctest::Approx(measured[n - 2]).epsilon(1e-5));
    CHECK(gap < prev);
    prev = gap;
  }
}
