#include "spectra/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "spectra/error.hpp"
#include "spectra/finite_oracle.hpp"
#include "spectra/loop.hpp"
#include "spectra/parallel.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances pinned by the criteria.
constexpr int kRandomPoints = 10000;
constexpr double kOracleThreshold = 1e-3;
constexpr double kBoundaryBand = 5e-3;
constexpr double kWitnessSingular = 1e-6;
constexpr double kPointMarginFloor = 0.5;
constexpr double kMarginStability = 0.01;
constexpr double kGradientTol = 1e-6;
constexpr int kGradientPoints = 20;
constexpr double kGradientMinMargin = 0.1;
constexpr double kTraceTol = 1e-8;
constexpr int kRandomLoops = 10;
constexpr int kWordPairs = 200;
constexpr int kMaxWordLength = 6;
constexpr int kMaxSuiteLevel = 4;
constexpr double kNestingTol = 1e-9;
constexpr int kEigenSamples = 50;
constexpr double kEigenTol = 1e-8;
constexpr double kGapCeiling = 0.5;
constexpr double kLevel5Seconds = 30.0;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

PencilPoint random_real_point(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  PencilPoint z;
  for (std::size_t i = 0; i < 4; ++i) z[i] = d(rng);
  return z;
}

Outcome criterion_membership(const AcceptanceConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<PencilPoint> pts;
  pts.reserve(kRandomPoints);
  for (int i = 0; i < kRandomPoints; ++i) pts.push_back(random_real_point(rng, -2.0, 2.0));

  std::vector<char> closed(pts.size()), oracle(pts.size()), band(pts.size());
  // For spectral points: smallest singular value of the symbol at the
  // witness angle θ = acos x, relative to the point's size.
  std::vector<double> at_witness(pts.size(), 0.0);
  parallel_for(pts.size(), [&](std::size_t i) {
    const MembershipResult m = membership(pts[i], cfg.membership_tol);
    closed[i] = m.in_spectrum;
    band[i] = m.margin < kBoundaryBand;
    oracle[i] = membership_margin(pts[i], cfg.oracle_n) < kOracleThreshold;
    if (m.in_spectrum) {
      const Witness& w = m.witnesses.front();
      const double theta = w.degenerate ? 0.0 : std::acos(std::clamp(w.x.real(), -1.0, 1.0));
      Eigen::JacobiSVD<Matrix4c> svd(symbol_block(pts[i], theta));
      at_witness[i] = svd.singularValues()(3) / std::max(1.0, pts[i].max_abs());
    }
  });
  int outside = 0, inside = 0, spectral = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    spectral += closed[i];
    if (closed[i] == oracle[i]) continue;
    (band[i] ? inside : outside)++;
  }
  const double witness_sv = *std::max_element(at_witness.begin(), at_witness.end());
  return {outside == 0 && witness_sv <= kWitnessSingular,
          "spectral=" + std::to_string(spectral) + " mismatches outside band=" +
              std::to_string(outside) + " inside band=" + std::to_string(inside) +
              " max symbol sv at witness angles=" + fmt(witness_sv)};
}

Outcome criterion_resolvent_point(const AcceptanceConfig& cfg) {
  const PencilPoint p(1.0, 8.0, 4.0, 2.0);
  const bool member = membership(p, cfg.membership_tol).in_spectrum;
  const double m1 = membership_margin(p, cfg.oracle_n);
  const double m2 = membership_margin(p, 2 * cfg.oracle_n);
  const double drift = std::abs(m2 - m1) / m1;
  return {!member && m1 >= kPointMarginFloor && drift <= kMarginStability,
          "in_spectrum=" + std::string(member ? "true" : "false") + " margin(N)=" + fmt(m1) +
              " margin(2N)=" + fmt(m2) + " drift=" + fmt(drift)};
}

double gradient_error(const PencilPoint& z, int n_nodes) {
  const auto grad = potential_gradient(z, n_nodes);
  const auto coef = trace_coefficients(z, Functional::CanonicalTrace, n_nodes);
  double err = 0.0;
  for (std::size_t i = 0; i < 4; ++i) err = std::max(err, std::abs(grad[i] - coef[i]));
  return err;
}

Outcome criterion_exactness(const AcceptanceConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 3);
  std::vector<PencilPoint> pts{PencilPoint(1.0, 8.0, 4.0, 2.0)};
  while (static_cast<int>(pts.size()) < kGradientPoints + 1) {
    const PencilPoint z = random_real_point(rng, -3.0, 3.0);
    if (symbol_margin(z) > kGradientMinMargin) pts.push_back(z);
  }
  std::vector<double> err(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { err[i] = gradient_error(pts[i], cfg.n_nodes); });
  const double worst = *std::max_element(err.begin(), err.end());
  return {worst <= kGradientTol, "p error=" + fmt(err[0]) + " worst over " +
                                     std::to_string(pts.size()) + " points=" + fmt(worst)};
}

Outcome criterion_trace_values(const AcceptanceConfig& cfg) {
  const PencilPoint p(1.0, 8.0, 4.0, 2.0);
  const double tr_e = 0.5 / std::sqrt(2145.0) - 1.5 / std::sqrt(945.0);
  const double phi_a = -(1.0 / 16.0 + 49.0 / (16.0 * std::sqrt(2145.0)));
  const cplx q_tr = trace_quadrature({p, Functional::CanonicalTrace, Word::e, cfg.n_nodes});
  const cplx q_phi = trace_quadrature({p, Functional::PhiTensorTrace, Word::a, cfg.n_nodes});
  const PencilFactorization fact(p, cfg.oracle_n);
  const cplx o_tr = fact.trace(Functional::CanonicalTrace, Word::e);
  const cplx o_phi = fact.trace(Functional::PhiTensorTrace, Word::a);
  const double err = std::max({std::abs(q_tr - o_tr), std::abs(q_tr - tr_e), std::abs(o_tr - tr_e),
                               std::abs(q_phi - o_phi), std::abs(q_phi - phi_a),
                               std::abs(o_phi - phi_a)});
  return {err <= kTraceTol, "Tr(e)=" + fmt(q_tr.real()) + " PhiTr(a)=" + fmt(q_phi.real()) +
                                " max error=" + fmt(err)};
}

Outcome criterion_erratum(const AcceptanceConfig& cfg) {
  ErratumSettings s;
  s.n = cfg.oracle_n;
  s.n_nodes = cfg.n_nodes;
  const json rep = erratum_report(s);
  const json& checks = rep.at("checks");
  std::string failed;
  for (const auto& [k, v] : checks.items()) {
    if (!v.get<bool>()) failed += (failed.empty() ? "" : ",") + k;
  }
  const auto& mp = rep.at("mixed_partials");
  return {checks.at("all").get<bool>(),
          "oracle partials " + fmt(mp.at("oracle_d_z1_phitr_Rinv").at("re").get<double>()) + " / " +
              fmt(mp.at("oracle_d_z0_phitr_Rinv_a").at("re").get<double>()) + " paper-formula " +
              fmt(mp.at("paper_formula_d_z1_phitr_Rinv").at("re").get<double>()) +
              (failed.empty() ? "" : " failed: " + failed)};
}

Outcome criterion_independence(const AcceptanceConfig& cfg) {
  const std::vector<LoopPath> loops{loop_L1(), loop_L2()};
  const IndependenceReport rep = class_independence(loops, cfg.n_nodes);
  const std::array<std::vector<std::int64_t>, 2> expected{{{2, 2}, {-2, 0}}};
  bool ok = rep.rank == 2 && rep.multiples == expected;
  double worst = 0.0;
  for (const auto& row : rep.residuals) {
    for (double r : row) worst = std::max(worst, r);
  }
  double oracle_worst = 0.0;
  for (std::size_t row = 0; row < 2; ++row) {
    const Functional f = row == 0 ? Functional::CanonicalTrace : Functional::PhiTensorTrace;
    for (std::size_t j = 0; j < loops.size(); ++j) {
      const cplx v = oracle_period(loops[j], f, cfg.loop_n, loops[j].steps);
      oracle_worst = std::max(
          oracle_worst, std::abs(v - static_cast<double>(expected[row][j]) * period_quantum(f)));
    }
  }
  ok = ok && worst <= cfg.period_tol && oracle_worst <= cfg.period_tol;
  std::ostringstream os;
  os << "matrix [[" << rep.multiples[0][0] << "," << rep.multiples[0][1] << "],["
     << rep.multiples[1][0] << "," << rep.multiples[1][1] << "]] rank " << rep.rank
     << " residual " << fmt(worst) << " oracle residual " << fmt(oracle_worst);
  return {ok, os.str()};
}

Outcome criterion_quantization(const AcceptanceConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 7);
  double worst_tr = 0.0, worst_phi = 0.0;
  int wrong_class = 0;
  for (int i = 0; i < kRandomLoops; ++i) {
    const PlaneLoopSpec spec = random_plane_loop(rng);
    const LoopPath loop = plane_loop(spec, "random" + std::to_string(i));
    const PeriodReport tr = loop_period(loop, Functional::CanonicalTrace, cfg.n_nodes);
    const PeriodReport phi = loop_period(loop, Functional::PhiTensorTrace, cfg.n_nodes);
    worst_tr = std::max(worst_tr, tr.residual);
    worst_phi = std::max(worst_phi, phi.residual);
    if (tr.nearest_multiple != 2 * (spec.u_winding() + spec.v_winding()) ||
        phi.nearest_multiple != -2 * spec.u_winding()) {
      ++wrong_class;
    }
  }
  return {worst_tr <= cfg.period_tol && worst_phi <= cfg.period_tol && wrong_class == 0,
          "Tr residual " + fmt(worst_tr) + " PhiTr residual " + fmt(worst_phi) +
              " winding mismatches " + std::to_string(wrong_class)};
}

GroupElement random_word(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, kMaxWordLength);
  std::uniform_int_distribution<int> letter(0, 2);
  const GroupElement gens[] = {gen::a, gen::t, gen::tau};
  GroupElement g = gen::e;
  for (int i = len(rng); i > 0; --i) g = g * gens[letter(rng)];
  return g;
}

// Every entry of sub has a distinct partner in super within tol (both sorted).
bool multiset_included(const std::vector<double>& sub, const std::vector<double>& super, double tol) {
  std::size_t j = 0;
  for (double x : sub) {
    while (j < super.size() && super[j] < x - tol) ++j;
    if (j == super.size() || super[j] > x + tol) return false;
    ++j;
  }
  return true;
}

Outcome criterion_self_similar(const AcceptanceConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 8);
  int hom_fail = 0;
  for (int i = 0; i < kWordPairs; ++i) {
    const GroupElement g = random_word(rng);
    const GroupElement h = random_word(rng);
    for (int n = 1; n <= kMaxSuiteLevel; ++n) {
      if (level_matrix(g * h, n) != level_matrix(g, n).compose(level_matrix(h, n))) ++hom_fail;
    }
  }
  int inv_fail = 0, comm_fail = 0;
  for (int n = 1; n <= kMaxSuiteLevel; ++n) {
    const LevelMatrix a = level_matrix(gen::a, n);
    const LevelMatrix t = level_matrix(gen::t, n);
    const LevelMatrix tau = level_matrix(gen::tau, n);
    for (const auto* m : {&a, &t, &tau}) inv_fail += !m->compose(*m).is_identity();
    comm_fail += a.compose(tau) != tau.compose(a);
    comm_fail += t.compose(tau) != tau.compose(t);
  }
  int nest_fail = 0;
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int s = 0; s < 5; ++s) {
    const double z1 = d(rng), z2 = d(rng), z3 = d(rng);
    std::vector<double> prev = pencil_level_eigs(z1, z2, z3, 1);
    for (int n = 2; n <= kMaxSuiteLevel; ++n) {
      std::vector<double> cur = pencil_level_eigs(z1, z2, z3, n);
      nest_fail += !multiset_included(prev, cur, kNestingTol);
      prev = std::move(cur);
    }
  }
  // Faithfulness proxy: every nontrivial element of word length ≤ n moves
  // some level-n vertex (n ≥ 2; t fixes the first level).
  int faith_fail = 0;
  for (int n = 2; n <= kMaxSuiteLevel; ++n) {
    std::set<GroupElement> ball{gen::e}, frontier{gen::e};
    for (int len = 0; len < n; ++len) {
      std::set<GroupElement> next;
      for (const auto& g : frontier) {
        for (const auto& s : {gen::a, gen::t, gen::tau}) {
          const GroupElement gs = g * s;
          if (ball.insert(gs).second) next.insert(gs);
        }
      }
      frontier = std::move(next);
    }
    for (const auto& g : ball) {
      if (g != gen::e && acts_trivially(g, n)) ++faith_fail;
    }
    if (permutation_order(level_matrix(gen::u, n)) <= (std::uint64_t{1} << (n - 1))) ++faith_fail;
  }
  const bool ok = hom_fail + inv_fail + comm_fail + nest_fail + faith_fail == 0;
  return {ok, "homomorphism " + std::to_string(hom_fail) + " involution " + std::to_string(inv_fail) +
                  " commutation " + std::to_string(comm_fail) + " nesting " +
                  std::to_string(nest_fail) + " faithfulness " + std::to_string(faith_fail) +
                  " failures"};
}

Outcome criterion_weak_equivalence(const AcceptanceConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 9);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  int violations = 0;
  for (int i = 0; i < kEigenSamples; ++i) {
    const double z1 = d(rng), z2 = d(rng), z3 = d(rng);
    for (int n = 1; n <= kMaxSuiteLevel; ++n) {
      violations += static_cast<int>(validate_eigs_in_spectrum(z1, z2, z3, n, kEigenTol).violations.size());
    }
  }
  std::vector<double> gaps;
  double level5_seconds = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    gaps.push_back(coverage_gap(1.0, 1.0, 0.5, n));
    if (n == 5) {
      level5_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && gaps[i] < gaps[i - 1];
  std::string g;
  for (double v : gaps) g += (g.empty() ? "" : ",") + fmt(v);
  return {violations == 0 && decreasing && gaps.back() < kGapCeiling && level5_seconds < kLevel5Seconds,
          "violations " + std::to_string(violations) + " gaps(n=2..5) " + g + " level-5 solve " +
              fmt(level5_seconds) + " s"};
}

const char* criterion_name(int id) {
  switch (id) {
    case 1: return "spectrum formula vs oracle";
    case 2: return "resolvent point p";
    case 3: return "exactness of Tr(omega)";
    case 4: return "trace values at p";
    case 5: return "erratum adjudication";
    case 6: return "two cohomology classes";
    case 7: return "period quantization";
    case 8: return "self-similar consistency";
    case 9: return "weak-equivalence witness";
    default: return "unknown";
  }
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceConfig& cfg) {
  static const std::function<Outcome(const AcceptanceConfig&)> table[] = {
      criterion_membership, criterion_resolvent_point, criterion_exactness,
      criterion_trace_values, criterion_erratum, criterion_independence,
      criterion_quantization, criterion_self_similar, criterion_weak_equivalence};
  if (id < 1 || id > kCriterionCount) {
    throw Error(ErrorKind::InvalidArgument, "no criterion " + std::to_string(id));
  }
  CriterionResult r{id, criterion_name(id), false, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = table[id - 1](cfg);
    r.passed = o.passed;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg, const std::vector<int>& ids) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
  }
  std::vector<CriterionResult> out;
  for (int id : todo) out.push_back(run_criterion(id, cfg));
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << std::fixed
     << r.seconds << " s): " << r.detail;
  return os.str();
}

}  // namespace spectra
