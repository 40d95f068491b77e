#pragma once

#include <Eigen/Dense>

#include <optional>
#include <utility>

namespace gausschan {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerances shared by every certification and synthesis routine.
///
/// `eig_tol` is relative (scaled by a problem-dependent magnitude at the
/// call site), `residual_tol` bounds matrix identities, and `reg_eps` is the
/// base of the singular-Y shift `reg_eps * (1 + ||Y||_2)`.
struct ToleranceConfig {
  double eig_tol = 1e-9;
  double residual_tol = 1e-8;
  double reg_eps = 1e-10;

  /// Throws Structural unless all fields are strictly positive and finite.
  void validate() const;
};

/// Hermitian matrix `re + i*im` held as two real matrices.
///
/// Construction symmetrizes `re` and antisymmetrizes `im` when they are
/// within `residual_tol` of the required symmetry class and rejects them
/// otherwise.
class HermitianPair {
 public:
  HermitianPair(const Matrix& re, const Matrix& im, const ToleranceConfig& cfg = {});

  const Matrix& re() const noexcept { return re_; }
  const Matrix& im() const noexcept { return im_; }
  Eigen::Index n() const noexcept { return re_.rows(); }

  /// The real symmetric 2n x 2n matrix [[re, -im], [im, re]]; its spectrum is
  /// the spectrum of re + i*im with every eigenvalue doubled.
  Matrix real_embedding() const;

  /// (re, -im): the entrywise transpose of the Hermitian matrix.
  HermitianPair transposed() const;

 private:
  HermitianPair() = default;
  Matrix re_;
  Matrix im_;
};

/// Orthogonal r and pairs d_vals with r^T k r = [[0, D], [-D, 0]] (plus one
/// trailing zero row/column when zero_dim == 1).
struct SkewCanonicalForm {
  Matrix r;
  Vector d_vals;  // descending, nonnegative, length floor(n/2)
  int zero_dim = 0;

  /// The block form [[0, D], [-D, 0]] padded to n x n.
  Matrix block_form() const;
};

struct PinvRank {
  Matrix pinv;
  Eigen::Index rank = 0;
};

/// Returns a copy symmetrized as (a + a^T)/2, or throws Structural when a is
/// not square or further than residual_tol * max(1, ||a||_F) from symmetric.
Matrix ingest_symmetric(const Matrix& a, const ToleranceConfig& cfg, const char* what = "matrix");

/// Skew-symmetric counterpart of ingest_symmetric.
Matrix ingest_skew(const Matrix& a, const ToleranceConfig& cfg, const char* what = "matrix");

/// Smallest eigenvalue of the Hermitian matrix re + i*im.
double psd_min_eig(const HermitianPair& h, const ToleranceConfig& cfg = {});

/// Smallest eigenvalue of a real symmetric matrix (no ingestion checks).
double sym_min_eig(const Matrix& a);

/// Spectral norm.
double norm2(const Matrix& a);

/// Symmetric PSD square root. Eigenvalues in [-eig_tol*||a||, 0) are clamped
/// to zero; anything more negative raises NotPSD.
Matrix sqrt_psd(const Matrix& a, const ToleranceConfig& cfg = {});

/// Real canonical form of a skew-symmetric matrix, computed from the
/// symmetric eigendecomposition of -k*k with eigenvectors grouped in 2-planes.
SkewCanonicalForm skew_canonical(const Matrix& k, const ToleranceConfig& cfg = {});

/// Moore-Penrose inverse and numerical rank; singular values at or below
/// eig_tol * sigma_max are treated as zero.
PinvRank pinv_rank(const Matrix& a, const ToleranceConfig& cfg = {});

/// Same, with the cut-off given as an absolute threshold.
PinvRank pinv_rank_abs(const Matrix& a, double threshold);

}  // namespace gausschan
