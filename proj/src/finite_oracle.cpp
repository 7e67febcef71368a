#include "spectra/finite_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "spectra/error.hpp"

namespace spectra {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Anti-diagonal block partner: 0↔2, 1↔3.
constexpr int partner_block(int b) { return b ^ 2; }

void check_size(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "truncation size N must be >= 2");
}

// Triplets of the pencil with coefficient vector c (c_w multiplies word w).
std::vector<Eigen::Triplet<cplx>> pencil_triplets(const PencilPoint& c, int n) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(16) * n);
  auto at = [n](int block, int site) { return block * n + site; };
  for (int m = 0; m < n; ++m) {
    const int next = (m + 1) % n;
    for (int b = 0; b < 4; ++b) {
      if (c[0] != cplx{}) trip.emplace_back(at(b, m), at(b, m), c[0]);
      if (c[3] != cplx{}) trip.emplace_back(at(b, m), at(partner_block(b), m), c[3]);
    }
    // Blocks (0,1) and (2,3) carry z1·S + z2; (1,0) and (3,2) carry z1·Sᵀ + z2.
    for (int upper : {0, 2}) {
      const int lower = upper + 1;
      if (c[1] != cplx{}) {
        trip.emplace_back(at(upper, next), at(lower, m), c[1]);  // S e_m = e_{m+1}
        trip.emplace_back(at(lower, m), at(upper, next), c[1]);  // Sᵀ
      }
      if (c[2] != cplx{}) {
        trip.emplace_back(at(upper, m), at(lower, m), c[2]);
        trip.emplace_back(at(lower, m), at(upper, m), c[2]);
      }
    }
  }
  return trip;
}

SparseMatrixC build_sparse(const PencilPoint& c, int n) {
  SparseMatrixC mat(4 * n, 4 * n);
  const auto trip = pencil_triplets(c, n);
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

PencilPoint unit_point(Word w) {
  PencilPoint p;
  p[static_cast<std::size_t>(w)] = 1.0;
  return p;
}

double wrap_to_pi(double x) {
  return std::remainder(x, 2.0 * kPi);
}

}  // namespace

CirculantPencil::CirculantPencil(const PencilPoint& z, int n)
    : z_(z), n_(n) {
  check_size(n);
  matrix_ = build_sparse(z, n);
}

CirculantPencil pencil_matrix(const PencilPoint& z, int n) { return CirculantPencil(z, n); }

SparseMatrixC word_matrix(Word w, int n) {
  check_size(n);
  return build_sparse(unit_point(w), n);
}

Matrix4c symbol_block(const PencilPoint& z, double theta) {
  const cplx e = std::exp(kI * theta);
  const cplx up = z[1] * e + z[2];
  const cplx down = z[1] * std::conj(e) + z[2];
  Matrix4c m;
  m << z[0], up,   z[3], 0.0,
       down, z[0], 0.0,  z[3],
       z[3], 0.0,  z[0], up,
       0.0,  z[3], down, z[0];
  return m;
}

Matrix4c word_symbol(Word w, double theta) { return symbol_block(unit_point(w), theta); }

cplx block_functional(Functional f, const Matrix4c& m) {
  const cplx diag = m.trace();
  if (f == Functional::CanonicalTrace) return 0.25 * diag;
  const cplx anti = m(0, 2) + m(1, 3) + m(2, 0) + m(3, 1);
  return -0.25 * diag + 0.25 * anti;
}

cplx mode_integrand(const PencilPoint& z, Functional f, Word w, double theta) {
  const Matrix4c s = symbol_block(z, theta);
  Eigen::PartialPivLU<Matrix4c> lu(s);
  const double floor = 1e-14 * std::max(1.0, z.max_abs());
  if (!(std::abs(lu.determinant()) > 0.0) || lu.rcond() < 1e-14 ||
      lu.matrixLU().diagonal().cwiseAbs().minCoeff() < floor) {
    throw Error(ErrorKind::OnSpectrum, "Fourier mode of the pencil is singular");
  }
  return block_functional(f, lu.solve(word_symbol(w, theta)));
}

double membership_margin(const PencilPoint& z, int n) {
  check_size(n);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * kPi * k / n;
    Eigen::JacobiSVD<Matrix4c> svd(symbol_block(z, theta));
    best = std::min(best, svd.singularValues()(3));
  }
  return best;
}

double membership_margin_dense(const PencilPoint& z, int n) {
  const Eigen::MatrixXcd m = pencil_matrix(z, n).dense();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().minCoeff();
}

PencilFactorization::PencilFactorization(const PencilPoint& z, int n) : n_(n) {
  check_size(n);
  lu_.compute(pencil_matrix(z, n).dense());
  const double floor = kPivotFloor * std::max(1.0, z.max_abs());
  if (lu_.matrixLU().diagonal().cwiseAbs().minCoeff() < floor) {
    throw Error(ErrorKind::SingularTruncation, "LU pivot below floor: pencil is singular at this N");
  }
}

const Eigen::MatrixXcd& PencilFactorization::inverse() const {
  if (!inverse_) inverse_ = lu_.inverse();
  return *inverse_;
}

cplx PencilFactorization::trace(Functional f, Word w) const {
  const Eigen::MatrixXcd& inv = inverse();
  const SparseMatrixC wm = word_matrix(w, n_);
  // (P⁻¹W)_{ij} = Σ_r P⁻¹_{ir} W_{rj}; W has one nonzero per column.
  cplx diag{};
  cplx anti{};
  for (int j = 0; j < wm.outerSize(); ++j) {
    const int block = j / n_;
    const int site = j % n_;
    const int anti_row = partner_block(block) * n_ + site;
    for (SparseMatrixC::InnerIterator it(wm, j); it; ++it) {
      diag += inv(j, it.row()) * it.value();
      anti += inv(anti_row, it.row()) * it.value();
    }
  }
  const double norm = 1.0 / (4.0 * n_);
  if (f == Functional::CanonicalTrace) return norm * diag;
  return norm * (anti - diag);
}

cplx PencilFactorization::log_det() const {
  const auto d = lu_.matrixLU().diagonal();
  cplx acc{};
  for (Eigen::Index i = 0; i < d.size(); ++i) acc += std::log(d(i));
  if (lu_.permutationP().determinant() < 0) acc += cplx{0.0, kPi};
  return acc;
}

cplx oracle_trace(const PencilPoint& z, Word w, int n) {
  return PencilFactorization(z, n).trace(Functional::CanonicalTrace, w);
}

cplx oracle_phitr(const PencilPoint& z, Word w, int n) {
  return PencilFactorization(z, n).trace(Functional::PhiTensorTrace, w);
}

namespace {

constexpr int kMaxLoopSteps = 1 << 15;

std::optional<PencilFactorization> factor_on_loop(const LoopPath& loop, double s, int n) {
  try {
    return PencilFactorization(loop.point(s), n);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularTruncation) {
      throw Error(ErrorKind::LoopHitsSpectrum,
                  "loop '" + loop.name + "' meets the finite spectrum at s=" + std::to_string(s));
    }
    throw;
  }
}

cplx logdet_period(const LoopPath& loop, int n, int steps) {
  for (int m = steps; m <= kMaxLoopSteps; m *= 2) {
    bool jumped = false;
    double total_arg = 0.0;
    double total_abs = 0.0;
    cplx prev = factor_on_loop(loop, 0.0, n)->log_det();
    const cplx start = prev;
    for (int j = 1; j <= m; ++j) {
      const cplx cur = factor_on_loop(loop, static_cast<double>(j) / m, n)->log_det();
      const double darg = wrap_to_pi(cur.imag() - prev.imag());
      if (std::abs(darg) >= kPi / 2) {
        jumped = true;
        break;
      }
      total_arg += darg;
      prev = cur;
    }
    if (!jumped) {
      total_abs = prev.real() - start.real();
      return cplx{total_abs, total_arg} / (4.0 * n);
    }
  }
  throw Error(ErrorKind::BranchJump, "log det phase jumps by >= π/2 even at maximum step count");
}

cplx trapezoid_sum(const LoopPath& loop, int n, int m, int offset, int stride) {
  cplx acc{};
  for (int j = offset; j < m; j += stride) {
    const double s = static_cast<double>(j) / m;
    const PencilPoint v = loop.velocity(s);
    const auto fact = factor_on_loop(loop, s, n);
    for (Word w : kWords) {
      const cplx dz = v[static_cast<std::size_t>(w)];
      if (dz != cplx{}) acc += fact->trace(Functional::PhiTensorTrace, w) * dz;
    }
  }
  return acc;
}

cplx phitr_period(const LoopPath& loop, int n, int steps) {
  cplx sum = trapezoid_sum(loop, n, steps, 0, 1);
  cplx value = sum / static_cast<double>(steps);
  for (int m = 2 * steps; m <= kMaxLoopSteps; m *= 2) {
    sum += trapezoid_sum(loop, n, m, 1, 2);  // only the new odd nodes
    const cplx refined = sum / static_cast<double>(m);
    if (std::abs(refined - value) <= 1e-6) return refined;
    value = refined;
  }
  throw Error(ErrorKind::NonConvergent, "oracle period did not converge under step doubling");
}

}  // namespace

cplx oracle_period(const LoopPath& loop, Functional f, int n, int steps) {
  if (steps < 4) throw Error(ErrorKind::InvalidArgument, "loop needs at least 4 steps");
  return f == Functional::CanonicalTrace ? logdet_period(loop, n, steps)
                                         : phitr_period(loop, n, steps);
}

}  // namespace spectra
