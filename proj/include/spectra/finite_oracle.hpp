#pragma once

#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "spectra/group.hpp"
#include "spectra/loop.hpp"
#include "spectra/symbol_spectrum.hpp"

namespace spectra {

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using SparseMatrixC = Eigen::SparseMatrix<cplx>;

/// Finite model of the pencil: the bilateral shift T is replaced by the
/// N-cyclic shift, so the 4N×4N matrix has the block pattern
///
///   [ z0        z1 S + z2   z3         0        ]
///   [ z1 Sᵀ+z2  z0          0          z3       ]
///   [ z3        0           z0         z1 S+z2  ]
///   [ 0         z3          z1 Sᵀ+z2   z0       ]
///
/// with index (block b, site m) ↦ b·N + m and S e_m = e_{m+1 mod N}.
class CirculantPencil {
 public:
  CirculantPencil(const PencilPoint& z, int n);

  int n() const noexcept { return n_; }
  int dim() const noexcept { return 4 * n_; }
  const PencilPoint& point() const noexcept { return z_; }
  const SparseMatrixC& matrix() const noexcept { return matrix_; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

 private:
  PencilPoint z_;
  int n_;
  SparseMatrixC matrix_;
};

CirculantPencil pencil_matrix(const PencilPoint& z, int n);

/// Image of a generator in the finite model: the pencil at the unit vector of
/// that coordinate. One nonzero per column.
SparseMatrixC word_matrix(Word w, int n);

/// Fourier mode of the circulant pencil at S ↦ e^{iθ}.
Matrix4c symbol_block(const PencilPoint& z, double theta);
Matrix4c word_symbol(Word w, double theta);

/// Block-trace weights of a functional on a 4×4 block matrix:
/// Tr = ¼ Σ diag, φ̃⊗tr = −¼ Σ diag + ¼ (m02 + m13 + m20 + m31).
cplx block_functional(Functional f, const Matrix4c& m);

/// Per-mode integrand f(θ) with oracle_trace(z, w, N) = mean_k f(2πk/N).
/// Throws Error(OnSpectrum) if the mode is singular.
cplx mode_integrand(const PencilPoint& z, Functional f, Word w, double theta);

/// Smallest singular value of pencil_matrix(z, N), computed mode by mode
/// (the DFT block-diagonalises the circulant pencil exactly). Homogeneous of
/// degree one in z.
double membership_margin(const PencilPoint& z, int n);

/// Same quantity from a dense SVD of the full 4N×4N matrix. Cubic in N; used
/// to validate the mode decomposition at small N.
double membership_margin_dense(const PencilPoint& z, int n);

/// Dense LU (partial pivoting) of the finite pencil; immutable after
/// construction and reusable across words and functionals.
class PencilFactorization {
 public:
  static constexpr double kPivotFloor = 1e-12;

  /// Throws Error(SingularTruncation) if a pivot falls below kPivotFloor
  /// (relative to max(1, max|z_i|)).
  PencilFactorization(const PencilPoint& z, int n);

  int n() const noexcept { return n_; }

  /// Normalised functional of P⁻¹·W_word.
  cplx trace(Functional f, Word w) const;

  /// log det P; the imaginary part is only meaningful modulo 2π.
  cplx log_det() const;

 private:
  const Eigen::MatrixXcd& inverse() const;

  int n_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  mutable std::optional<Eigen::MatrixXcd> inverse_;
};

cplx oracle_trace(const PencilPoint& z, Word w, int n);
cplx oracle_phitr(const PencilPoint& z, Word w, int n);

/// Period of a functional's 1-form around a loop, from the finite model.
/// Tr: continuously tracked increment of log det P / (4N). φ̃⊗tr: trapezoid
/// rule in s over the oracle_phitr coefficients.
cplx oracle_period(const LoopPath& loop, Functional f, int n, int steps);

}  // namespace spectra
