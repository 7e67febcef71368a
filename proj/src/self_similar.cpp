#include "spectra/self_similar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "spectra/error.hpp"
#include "spectra/symbol_spectrum.hpp"

namespace spectra {

namespace {

WreathElement identity_wreath() { return {}; }

WreathElement wreath_power(WreathElement base, std::uint64_t m) {
  WreathElement acc = identity_wreath();
  while (m > 0) {
    if (m & 1U) acc = wreath_mul(acc, base);
    base = wreath_mul(base, base);
    m >>= 1U;
  }
  return acc;
}

void check_level(int n, int cap) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be >= 0");
  if (n > cap) {
    throw Error(ErrorKind::LevelTooLarge,
                "level " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  }
}

std::size_t level_size(int n) { return std::size_t{1} << (2 * n); }

}  // namespace

WreathElement generator_wreath(Word w, TauRealization tau) {
  WreathElement g;
  switch (w) {
    case Word::e:
      break;
    case Word::a:
      g.perm = {1, 0, 3, 2};
      break;
    case Word::t:
      g.restrictions = {gen::a, gen::t, gen::a, gen::t};
      break;
    case Word::tau:
      g.perm = {2, 3, 0, 1};
      if (tau == TauRealization::SwapWithRestriction) g.restrictions.fill(gen::tau);
      break;
  }
  return g;
}

WreathElement wreath_mul(const WreathElement& g, const WreathElement& h) {
  WreathElement r;
  for (std::size_t x = 0; x < 4; ++x) {
    const Letter hx = h.perm[x];
    r.perm[x] = g.perm[hx];
    r.restrictions[x] = mul(g.restrictions[hx], h.restrictions[x]);
  }
  return r;
}

WreathElement wreath_of(const GroupElement& g, TauRealization tau) {
  WreathElement r = identity_wreath();
  if (g.tau_flag) r = generator_wreath(Word::tau, tau);
  if (g.t_flag) r = wreath_mul(r, generator_wreath(Word::t, tau));
  if (g.k != 0) {
    const WreathElement a = generator_wreath(Word::a, tau);
    const WreathElement t = generator_wreath(Word::t, tau);
    // (at)^k for k > 0, (ta)^|k| otherwise
    const WreathElement base = g.k > 0 ? wreath_mul(a, t) : wreath_mul(t, a);
    const std::uint64_t m = g.k > 0 ? static_cast<std::uint64_t>(g.k)
                                    : static_cast<std::uint64_t>(-(g.k + 1)) + 1;
    r = wreath_mul(r, wreath_power(base, m));
  }
  return r;
}

std::vector<int> act_on_word(const GroupElement& g, const std::vector<int>& word,
                             TauRealization tau) {
  std::vector<int> out;
  out.reserve(word.size());
  GroupElement cur = g;
  for (int letter : word) {
    if (letter < 1 || letter > 4) {
      throw Error(ErrorKind::InvalidArgument, "tree letters are 1..4, got " + std::to_string(letter));
    }
    const WreathElement w = wreath_of(cur, tau);
    const auto x = static_cast<std::size_t>(letter - 1);
    out.push_back(w.perm[x] + 1);
    cur = w.restrictions[x];
  }
  return out;
}

bool LevelMatrix::is_identity() const {
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] != i) return false;
  }
  return true;
}

LevelMatrix LevelMatrix::compose(const LevelMatrix& other) const {
  if (other.level != level) throw Error(ErrorKind::InvalidArgument, "level mismatch in compose");
  LevelMatrix r{level, std::vector<std::uint32_t>(perm.size())};
  for (std::size_t i = 0; i < perm.size(); ++i) r.perm[i] = perm[other.perm[i]];
  return r;
}

LevelMatrix level_matrix(const GroupElement& g, int n, TauRealization tau) {
  check_level(n, kMaxMatrixLevel);
  LevelMatrix m{n, std::vector<std::uint32_t>(level_size(n))};
  std::vector<int> word(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < m.perm.size(); ++idx) {
    std::size_t rest = idx;
    for (int pos = n - 1; pos >= 0; --pos) {
      word[static_cast<std::size_t>(pos)] = static_cast<int>(rest % 4) + 1;
      rest /= 4;
    }
    std::uint32_t image = 0;
    for (int letter : act_on_word(g, word, tau)) image = image * 4 + static_cast<std::uint32_t>(letter - 1);
    m.perm[idx] = image;
  }
  return m;
}

bool acts_trivially(const GroupElement& g, int depth, TauRealization tau) {
  return level_matrix(g, depth, tau).is_identity();
}

std::uint64_t permutation_order(const LevelMatrix& m) {
  std::vector<bool> seen(m.perm.size(), false);
  std::uint64_t order = 1;
  for (std::size_t i = 0; i < m.perm.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = m.perm[j]) {
      seen[j] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

std::vector<double> pencil_level_eigs(double z1, double z2, double z3, int n, TauRealization tau) {
  check_level(n, kMaxLevel);
  const std::size_t dim = level_size(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::pair<GroupElement, double> terms[] = {{gen::a, z1}, {gen::t, z2}, {gen::tau, z3}};
  for (const auto& [g, c] : terms) {
    if (c == 0.0) continue;
    const LevelMatrix p = level_matrix(g, n, tau);
    // M e_i = e_{p(i)}
    for (std::size_t i = 0; i < dim; ++i) {
      m(static_cast<Eigen::Index>(p.perm[i]), static_cast<Eigen::Index>(i)) += c;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NonConvergent, "symmetric eigensolver did not converge");
  }
  std::vector<double> eig(es.eigenvalues().data(), es.eigenvalues().data() + dim);
  std::sort(eig.begin(), eig.end());
  return eig;
}

EigenValidation validate_eigs_in_spectrum(double z1, double z2, double z3, int n, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be > 0");
  EigenValidation v;
  v.eigenvalues = pencil_level_eigs(z1, z2, z3, n);
  for (double lambda : v.eigenvalues) {
    const MembershipResult r = membership(PencilPoint(-lambda, z1, z2, z3), tol);
    v.max_margin = std::max(v.max_margin, r.margin);
    if (!r.in_spectrum) v.violations.push_back({lambda, r.margin});
  }
  return v;
}

std::vector<std::array<double, 2>> spectrum_slice(double z1, double z2, double z3) {
  const double r_lo = std::abs(std::abs(z1) - std::abs(z2));
  const double r_hi = std::abs(z1) + std::abs(z2);
  std::vector<std::array<double, 2>> iv;
  for (double c : {z3, -z3}) {
    iv.push_back({c + r_lo, c + r_hi});
    iv.push_back({c - r_hi, c - r_lo});
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::array<double, 2>> merged;
  for (const auto& i : iv) {
    if (!merged.empty() && i[0] <= merged.back()[1]) {
      merged.back()[1] = std::max(merged.back()[1], i[1]);
    } else {
      merged.push_back(i);
    }
  }
  return merged;
}

double coverage_gap(const std::vector<std::array<double, 2>>& slice,
                    const std::vector<double>& eigenvalues) {
  if (eigenvalues.empty()) throw Error(ErrorKind::InvalidArgument, "no eigenvalues");
  std::vector<double> eig = eigenvalues;
  std::sort(eig.begin(), eig.end());
  auto dist = [&](double x) {
    const auto it = std::lower_bound(eig.begin(), eig.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != eig.end()) d = *it - x;
    if (it != eig.begin()) d = std::min(d, x - *(it - 1));
    return d;
  };
  // The distance is piecewise linear; its maxima on an interval sit at the
  // endpoints or at midpoints of consecutive eigenvalues.
  double gap = 0.0;
  for (const auto& [lo, hi] : slice) {
    gap = std::max({gap, dist(lo), dist(hi)});
    for (std::size_t i = 0; i + 1 < eig.size(); ++i) {
      const double mid = 0.5 * (eig[i] + eig[i + 1]);
      if (mid > lo && mid < hi) gap = std::max(gap, dist(mid));
    }
  }
  return gap;
}

double coverage_gap(double z1, double z2, double z3, int n) {
  return coverage_gap(spectrum_slice(z1, z2, z3), pencil_level_eigs(z1, z2, z3, n));
}

}  // namespace spectra
