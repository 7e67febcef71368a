#include "spectra/resolvent_traces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spectra/error.hpp"
#include "spectra/finite_oracle.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOnSpectrum = 1e-12;  // |G±| / scale below this is spectral
constexpr double kDegenerateGap = 1e-12;
constexpr int kMaxLoopSteps = 1 << 15;

// Quantities shared by the published integrands at (z, θ).
struct Symbols {
  cplx c;      // cos θ
  cplx q;      // z1² + z2² + 2 z1 z2 cos θ
  cplx gminus;
  cplx gplus;
};

Symbols symbols(const PencilPoint& z, double theta) {
  Symbols s;
  s.c = std::cos(theta);
  s.q = z[1] * z[1] + z[2] * z[2] + 2.0 * z[1] * z[2] * s.c;
  const auto g = g_values(z, s.c);
  s.gminus = g.minus;
  s.gplus = g.plus;
  return s;
}

void require_nonzero(cplx v, const PencilPoint& z, const char* what) {
  if (std::abs(v) < kOnSpectrum * z.scale()) {
    throw Error(ErrorKind::OnSpectrum, std::string(what) + " vanishes: point is on the spectrum");
  }
}

cplx paper_phitr(const PencilPoint& z, Word w, double theta) {
  const Symbols s = symbols(z, theta);
  require_nonzero(s.gminus, z, "G-");
  switch (w) {
    case Word::e: {
      require_nonzero(s.gplus, z, "G+");
      return (z[3] - z[0]) * (z[0] * z[0] - z[3] * z[3] - s.q) / (s.gminus * s.gplus);
    }
    case Word::a:
      return (z[1] + z[2] * s.c) / s.gminus;
    default:
      throw Error(ErrorKind::NotDisplayed, "no published φ̃⊗tr integrand for this word");
  }
}

}  // namespace

const char* to_string(CoefficientSource s) noexcept {
  return s == CoefficientSource::Adjudicated ? "adjudicated" : "paper-formula";
}

const char* to_string(IntegrandOrigin o) noexcept {
  return o == IntegrandOrigin::PaperDisplayed ? "paper-displayed" : "oracle-defined";
}

bool paper_formula_displayed(Functional f, Word w) noexcept {
  if (f == Functional::CanonicalTrace) return true;
  return w == Word::e || w == Word::a;
}

bool paper_formula_confirmed(Functional f, Word w) noexcept {
  if (f == Functional::CanonicalTrace) return w != Word::tau;
  return w == Word::a;
}

IntegrandOrigin integrand_origin(Functional f, Word w, CoefficientSource src) noexcept {
  const bool use_paper = src == CoefficientSource::PaperFormula ? paper_formula_displayed(f, w)
                                                                : paper_formula_confirmed(f, w);
  return use_paper ? IntegrandOrigin::PaperDisplayed : IntegrandOrigin::OracleDefined;
}

cplx integrand_tr(const PencilPoint& z, Word w, double theta) {
  const Symbols s = symbols(z, theta);
  require_nonzero(s.gminus, z, "G-");
  require_nonzero(s.gplus, z, "G+");
  const cplx den = s.gminus * s.gplus;
  const cplx z0sq = z[0] * z[0];
  const cplx z3sq = z[3] * z[3];
  switch (w) {
    case Word::e: return z[0] * (z0sq - z3sq - s.q) / den;
    case Word::a: return -(z[1] + z[2] * s.c) * (z0sq + z3sq - s.q) / den;
    case Word::t: return -(z[1] * s.c + z[2]) * (z0sq + z3sq - s.q) / den;
    case Word::tau: return z[3] * (z0sq - z3sq - s.q) / den;
  }
  return {};
}

cplx integrand_tr_degenerate(const PencilPoint& z, Word w, double theta, CoefficientSource src) {
  const double tol = kDegenerateGap * std::max(1.0, z.max_abs());
  if (std::abs(z[3]) <= tol ||
      (std::abs(z[0] - z[3]) > tol && std::abs(z[0] + z[3]) > tol)) {
    throw Error(ErrorKind::NotDegenerate, "degenerate integrands need z0 = ±z3 with z3 ≠ 0");
  }
  const Symbols s = symbols(z, theta);
  const cplx outer = 4.0 * z[0] * z[0] - s.q;
  require_nonzero(outer, z, "4z0² − q");
  const bool adjudicated = src == CoefficientSource::Adjudicated;
  switch (w) {
    case Word::e: return z[0] / outer;
    case Word::tau: return (adjudicated ? z[3] : z[0]) / outer;
    case Word::a:
    case Word::t: {
      require_nonzero(s.q, z, "q");
      const cplx lead = (adjudicated && w == Word::t) ? z[1] * s.c + z[2] : z[1] + z[2] * s.c;
      return lead * (2.0 * z[0] * z[0] - s.q) / (outer * s.q);
    }
  }
  return {};
}

double degenerate_weight(Word w, CoefficientSource src) noexcept {
  if (src == CoefficientSource::PaperFormula && (w == Word::e || w == Word::tau)) return -2.0;
  return 1.0;
}

cplx integrand_phitr(const PencilPoint& z, Word w, double theta, CoefficientSource src) {
  if (integrand_origin(Functional::PhiTensorTrace, w, src) == IntegrandOrigin::PaperDisplayed) {
    return paper_phitr(z, w, theta);
  }
  return mode_integrand(z, Functional::PhiTensorTrace, w, theta);
}

cplx coefficient_integrand(const PencilPoint& z, Functional f, Word w, double theta,
                           CoefficientSource src) {
  if (f == Functional::PhiTensorTrace) return integrand_phitr(z, w, theta, src);
  if (integrand_origin(f, w, src) == IntegrandOrigin::PaperDisplayed) {
    return integrand_tr(z, w, theta);
  }
  return mode_integrand(z, f, w, theta);
}

cplx trapezoid_mean(const std::function<cplx(double)>& f, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one node");
  cplx acc{};
  for (int j = 0; j < n; ++j) acc += f(2.0 * kPi * j / n);
  return acc / static_cast<double>(n);
}

QuadratureResult adaptive_mean(const std::function<cplx(double)>& f, int n_nodes) {
  if (n_nodes < 4 || n_nodes % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "n_nodes must be even and >= 4");
  }
  cplx sum{};
  for (int j = 0; j < n_nodes; ++j) sum += f(2.0 * kPi * j / n_nodes);
  cplx prev = sum / static_cast<double>(n_nodes);
  for (int m = 2 * n_nodes;; m *= 2) {
    for (int j = 1; j < m; j += 2) sum += f(2.0 * kPi * j / m);
    const cplx cur = sum / static_cast<double>(m);
    const double change = std::abs(cur - prev);
    if (change <= 1e-13 * std::max(1.0, std::abs(cur))) return {cur, m, change};
    if (m >= kMaxQuadratureNodes) {
      if (change <= 1e-8) return {cur, m, change};
      throw Error(ErrorKind::NonConvergent,
                  "quadrature still changes by " + std::to_string(change) + " at " +
                      std::to_string(m) + " nodes");
    }
    prev = cur;
  }
}

cplx trace_quadrature(const TraceRequest& req) {
  auto f = [&](double theta) {
    return coefficient_integrand(req.z, req.functional, req.word, theta, req.source);
  };
  return adaptive_mean(f, req.n_nodes).value;
}

std::array<cplx, 4> trace_coefficients(const PencilPoint& z, Functional f, int n_nodes,
                                       CoefficientSource src) {
  std::array<cplx, 4> c{};
  for (Word w : kWords) {
    c[static_cast<std::size_t>(w)] = trace_quadrature({z, f, w, n_nodes, src});
  }
  return c;
}

cplx degenerate_quadrature(const PencilPoint& z, Word w, int n_nodes, CoefficientSource src) {
  auto f = [&](double theta) { return integrand_tr_degenerate(z, w, theta, src); };
  return degenerate_weight(w, src) * adaptive_mean(f, n_nodes).value;
}

cplx potential_anchor(const PencilPoint& z) {
  const auto g = g_values(z, 1.0);
  return std::log(g.minus * g.plus);
}

namespace {

// Mean of the continued log over n nodes; nullopt on a phase jump >= π/2.
std::optional<cplx> unwrapped_log_mean(const PencilPoint& z, int n, std::optional<cplx> anchor) {
  auto log_at = [&](double theta) {
    const auto g = g_values(z, std::cos(theta));
    require_nonzero(g.minus, z, "G-");
    require_nonzero(g.plus, z, "G+");
    return std::log(g.minus * g.plus);
  };
  cplx first = log_at(0.0);
  if (anchor) {
    const double turns = std::round((anchor->imag() - first.imag()) / (2.0 * kPi));
    first += cplx{0.0, 2.0 * kPi * turns};
  }
  cplx prev = first;
  cplx acc = first;
  for (int j = 1; j <= n; ++j) {
    cplx cur = log_at(2.0 * kPi * j / n);
    const double step = std::remainder(cur.imag() - prev.imag(), 2.0 * kPi);
    if (std::abs(step) >= kPi / 2) return std::nullopt;
    cur = cplx{cur.real(), prev.imag() + step};
    if (j < n) acc += cur;
    prev = cur;
  }
  // The symbol retraces its path as θ runs over [π, 2π], so the continued
  // log must close up.
  if (std::abs(prev.imag() - first.imag()) > 1.0) return std::nullopt;
  return acc / static_cast<double>(n);
}

}  // namespace

cplx potential_tr(const PencilPoint& z, int n_nodes, std::optional<cplx> anchor) {
  if (n_nodes < 4 || n_nodes % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "n_nodes must be even and >= 4");
  }
  std::optional<cplx> prev;
  for (int m = n_nodes; m <= kMaxQuadratureNodes; m *= 2) {
    const auto cur = unwrapped_log_mean(z, m, anchor);
    if (!cur) {
      prev.reset();
      continue;  // phase jump: refine
    }
    if (prev) {
      const double change = std::abs(*cur - *prev);
      if (change <= 1e-13 * std::max(1.0, std::abs(*cur)) ||
          (m >= kMaxQuadratureNodes && change <= 1e-8)) {
        return 0.25 * *cur;
      }
    }
    prev = cur;
  }
  if (!prev) throw Error(ErrorKind::BranchJump, "log(G-G+) phase jumps at every node count");
  throw Error(ErrorKind::NonConvergent, "potential quadrature did not converge");
}

cplx central_difference(const std::function<cplx(const PencilPoint&)>& fn, const PencilPoint& z,
                        int coord, double step) {
  PencilPoint hi = z;
  PencilPoint lo = z;
  hi[static_cast<std::size_t>(coord)] += step;
  lo[static_cast<std::size_t>(coord)] -= step;
  return (fn(hi) - fn(lo)) / (2.0 * step);
}

std::array<cplx, 4> potential_gradient(const PencilPoint& z, int n_nodes, double step) {
  const cplx anchor = potential_anchor(z);
  auto fn = [&](const PencilPoint& p) { return potential_tr(p, n_nodes, anchor); };
  std::array<cplx, 4> grad{};
  for (int i = 0; i < 4; ++i) grad[static_cast<std::size_t>(i)] = central_difference(fn, z, i, step);
  return grad;
}

ResidualMatrix closedness_residual(const PencilPoint& z, Functional f, double step, int n_nodes,
                                   CoefficientSource src) {
  // d[i][j] = ∂_i c_j
  std::array<std::array<cplx, 4>, 4> d{};
  for (int i = 0; i < 4; ++i) {
    PencilPoint hi = z;
    PencilPoint lo = z;
    hi[static_cast<std::size_t>(i)] += step;
    lo[static_cast<std::size_t>(i)] -= step;
    const auto ch = trace_coefficients(hi, f, n_nodes, src);
    const auto cl = trace_coefficients(lo, f, n_nodes, src);
    for (int j = 0; j < 4; ++j) {
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          (ch[static_cast<std::size_t>(j)] - cl[static_cast<std::size_t>(j)]) / (2.0 * step);
    }
  }
  ResidualMatrix r{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = std::abs(d[i][j] - d[j][i]);
  }
  return r;
}

cplx period_quantum(Functional f) noexcept {
  return f == Functional::CanonicalTrace ? cplx{0.0, kPi / 2} : cplx{0.0, kPi};
}

PeriodReport make_period_report(cplx value, Functional f) {
  PeriodReport r;
  r.value = value;
  r.quantum = period_quantum(f);
  r.nearest_multiple = std::llround(std::real(value / r.quantum));
  r.residual = std::abs(value - static_cast<double>(r.nearest_multiple) * r.quantum);
  return r;
}

namespace {

cplx loop_sum(const LoopPath& loop, Functional f, int n_nodes, CoefficientSource src, int m,
              int offset, int stride) {
  cplx acc{};
  for (int j = offset; j < m; j += stride) {
    const double s = static_cast<double>(j) / m;
    const PencilPoint z = loop.point(s);
    if (membership(z).in_spectrum) {
      throw Error(ErrorKind::LoopHitsSpectrum,
                  "loop '" + loop.name + "' meets the spectrum at s=" + std::to_string(s));
    }
    const PencilPoint v = loop.velocity(s);
    for (Word w : kWords) {
      const cplx dz = v[static_cast<std::size_t>(w)];
      if (dz == cplx{}) continue;
      try {
        acc += trace_quadrature({z, f, w, n_nodes, src}) * dz;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OnSpectrum) throw;
        throw Error(ErrorKind::LoopHitsSpectrum,
                    "loop '" + loop.name + "' meets the spectrum at s=" + std::to_string(s));
      }
    }
  }
  return acc;
}

}  // namespace

PeriodReport loop_period(const LoopPath& loop, Functional f, int n_nodes, CoefficientSource src) {
  if (loop.steps < 4) throw Error(ErrorKind::InvalidArgument, "loop needs at least 4 steps");
  cplx sum = loop_sum(loop, f, n_nodes, src, loop.steps, 0, 1);
  cplx value = sum / static_cast<double>(loop.steps);
  for (int m = 2 * loop.steps; m <= kMaxLoopSteps; m *= 2) {
    sum += loop_sum(loop, f, n_nodes, src, m, 1, 2);
    const cplx refined = sum / static_cast<double>(m);
    if (std::abs(refined - value) <= 1e-6) return make_period_report(refined, f);
    value = refined;
  }
  throw Error(ErrorKind::NonConvergent, "loop period did not converge under step doubling");
}

IndependenceReport class_independence(const std::vector<LoopPath>& loops, int n_nodes) {
  if (loops.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one loop");
  IndependenceReport rep;
  for (std::size_t row = 0; row < 2; ++row) {
    const Functional f = row == 0 ? Functional::CanonicalTrace : Functional::PhiTensorTrace;
    for (const auto& loop : loops) {
      const auto p = loop_period(loop, f, n_nodes);
      rep.periods[row].push_back(p.value);
      rep.multiples[row].push_back(p.nearest_multiple);
      rep.residuals[row].push_back(p.residual);
    }
  }
  rep.rank = integer_rank({rep.multiples[0], rep.multiples[1]});
  return rep;
}

int integer_rank(std::vector<std::vector<std::int64_t>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows.size(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[pivot_row]);
    for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const std::int64_t a = rows[pivot_row][col];
      const std::int64_t b = rows[r][col];
      std::int64_t g = 0;
      for (std::size_t c = 0; c < cols; ++c) {
        rows[r][c] = a * rows[r][c] - b * rows[pivot_row][c];
        g = std::gcd(g, rows[r][c]);
      }
      if (g > 1) {
        for (auto& v : rows[r]) v /= g;
      }
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

}  // namespace spectra
