#include "spectra/group.hpp"

#include <cctype>
#include <limits>

#include "spectra/error.hpp"

namespace spectra {

namespace {

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(x, y, &r)) {
    throw Error(ErrorKind::Overflow, "exponent of (at) overflows int64");
  }
  return r;
}

std::int64_t checked_neg(std::int64_t x) {
  if (x == std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorKind::Overflow, "exponent of (at) overflows int64");
  }
  return -x;
}

}  // namespace

GroupElement to_element(Word w) noexcept {
  switch (w) {
    case Word::e: return gen::e;
    case Word::a: return gen::a;
    case Word::t: return gen::t;
    case Word::tau: return gen::tau;
  }
  return gen::e;
}

const char* to_string(Word w) noexcept {
  switch (w) {
    case Word::e: return "e";
    case Word::a: return "a";
    case Word::t: return "t";
    case Word::tau: return "tau";
  }
  return "?";
}

Word parse_word(std::string_view s) {
  if (s == "e") return Word::e;
  if (s == "a") return Word::a;
  if (s == "t") return Word::t;
  if (s == "tau" || s == "T") return Word::tau;
  throw Error(ErrorKind::Parse, "unknown word '" + std::string(s) + "'");
}

const char* to_string(Functional f) noexcept {
  return f == Functional::CanonicalTrace ? "Tr" : "PhiTr";
}

Functional parse_functional(std::string_view s) {
  if (s == "tr" || s == "Tr") return Functional::CanonicalTrace;
  if (s == "phitr" || s == "PhiTr") return Functional::PhiTensorTrace;
  throw Error(ErrorKind::Parse, "unknown functional '" + std::string(s) + "'");
}

// With u = at:  t u^k t = u^-k, so u^k1 · t^d2 = t^d2 · u^(±k1).
GroupElement mul(const GroupElement& g, const GroupElement& h) {
  GroupElement r;
  r.tau_flag = g.tau_flag != h.tau_flag;
  r.t_flag = g.t_flag != h.t_flag;
  r.k = checked_add(h.t_flag ? checked_neg(g.k) : g.k, h.k);
  return r;
}

GroupElement inv(const GroupElement& g) {
  // Reflections t(at)^k are involutions; rotations invert their exponent.
  if (g.t_flag) return g;
  return GroupElement{checked_neg(g.k), false, g.tau_flag};
}

GroupElement power(const GroupElement& g, std::int64_t n) {
  GroupElement base = n < 0 ? inv(g) : g;
  std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1u
                          : static_cast<std::uint64_t>(n);
  GroupElement acc = gen::e;
  while (m != 0) {
    if (m & 1u) acc = mul(acc, base);
    m >>= 1u;
    if (m != 0) base = mul(base, base);
  }
  return acc;
}

GroupElement parse_element(std::string_view text) {
  GroupElement acc = gen::e;
  bool any = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    switch (c) {
      case 'a': acc = mul(acc, gen::a); break;
      case 't': acc = mul(acc, gen::t); break;
      case 'T': acc = mul(acc, gen::tau); break;
      case 'e': break;
      default:
        throw Error(ErrorKind::Parse,
                    std::string("unexpected letter '") + c + "' in group word");
    }
    any = true;
  }
  if (!any) throw Error(ErrorKind::Parse, "empty group word");
  return acc;
}

std::string to_string(const GroupElement& g) {
  std::string s;
  if (g.tau_flag) s += "T";
  if (g.t_flag) s += "t";
  if (g.k != 0) s += "(at)^" + std::to_string(g.k);
  return s.empty() ? "e" : s;
}

AlgebraElement::AlgebraElement(const GroupElement& g, cplx c) { add(g, c); }

cplx AlgebraElement::coeff(const GroupElement& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? cplx{} : it->second;
}

AlgebraElement& AlgebraElement::add(const GroupElement& g, cplx c) {
  auto [it, inserted] = terms_.try_emplace(g, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneBelow) terms_.erase(it);
  return *this;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  for (const auto& [g, c] : other.terms_) add(g, c);
  return *this;
}

AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) {
  for (const auto& [g, c] : rhs.terms_) lhs.add(g, -c);
  return lhs;
}

AlgebraElement operator*(cplx c, const AlgebraElement& f) {
  AlgebraElement r;
  for (const auto& [g, v] : f.terms_) r.add(g, c * v);
  return r;
}

AlgebraElement algebra_mul(const AlgebraElement& f, const AlgebraElement& g) {
  AlgebraElement r;
  for (const auto& [x, cx] : f.terms()) {
    for (const auto& [y, cy] : g.terms()) r.add(mul(x, y), cx * cy);
  }
  return r;
}

AlgebraElement algebra_star(const AlgebraElement& f) {
  AlgebraElement r;
  for (const auto& [g, c] : f.terms()) r.add(inv(g), std::conj(c));
  return r;
}

cplx canonical_trace(const AlgebraElement& f) { return f.coeff(gen::e); }

cplx phi_trace(const AlgebraElement& f) {
  return -f.coeff(gen::e) + f.coeff(gen::tau);
}

cplx apply_functional(Functional kind, const AlgebraElement& f) {
  return kind == Functional::CanonicalTrace ? canonical_trace(f) : phi_trace(f);
}

}  // namespace spectra
