#pragma once

#include <cstdint>
#include <vector>

#include "gausschan/numerics.hpp"

namespace gausschan {

/// Block structure of a symplectic form J = J_{2d_1} + ... + J_{2d_k}
/// (direct sum), each J_{2d} = [[0, I_d], [-I_d, 0]].
///
/// Coordinates are "blocked" within each subsystem: the d_i position
/// coordinates come first, then the d_i momenta.
class SymplecticForm {
 public:
  explicit SymplecticForm(std::vector<int> blocks);
  static SymplecticForm single(int modes) { return SymplecticForm({modes}); }

  const std::vector<int>& blocks() const noexcept { return blocks_; }
  int modes() const noexcept { return modes_; }
  Eigen::Index dim() const noexcept { return 2 * static_cast<Eigen::Index>(modes_); }
  bool is_single_block() const noexcept { return blocks_.size() == 1; }

  friend bool operator==(const SymplecticForm&, const SymplecticForm&) = default;

 private:
  std::vector<int> blocks_;
  int modes_ = 0;
};

Matrix form_matrix(const SymplecticForm& form);

/// ||l^T J l - J||_F.
double symplectic_residual(const Matrix& l, const SymplecticForm& form);

/// Scale-aware acceptance threshold used wherever a matrix must be
/// form-symplectic: residual_tol * max(1, ||l||_2^2).
bool is_symplectic(const Matrix& l, const SymplecticForm& form, const ToleranceConfig& cfg = {});

/// J^T l^T J; throws NotSymplectic when l fails is_symplectic.
Matrix symplectic_inverse(const Matrix& l, const SymplecticForm& form, const ToleranceConfig& cfg = {});

struct OrthosymplecticBlocks {
  Matrix a;
  Matrix b;
};

/// Splits a 2d x 2d orthosymplectic matrix (single-block form) as
/// [[A, B], [-B, A]] with A^T A + B^T B = I and A^T B symmetric.
/// Throws NotOrthogonal, NotSymplectic or BlockStructureViolated.
OrthosymplecticBlocks orthosymplectic_blocks(const Matrix& l, const ToleranceConfig& cfg = {});

/// Index map sigma with P(sigma[j], j) = 1 for the permutation returned by
/// form_permutation; P^T A P == A(sigma, sigma).
std::vector<Eigen::Index> form_permutation_index(const SymplecticForm& src, const SymplecticForm& dst);

/// 0/1 permutation matrix P with form_matrix(dst) == P^T form_matrix(src) P.
/// Coordinates are matched by (mode, quadrature) label, modes numbered
/// consecutively across blocks.
Matrix form_permutation(const SymplecticForm& src, const SymplecticForm& dst);

/// P^T a P, computed by reindexing (bitwise exact).
Matrix permute_congruence(const Matrix& a, const std::vector<Eigen::Index>& sigma);

/// Inverse of permute_congruence: P a P^T.
Matrix unpermute_congruence(const Matrix& a, const std::vector<Eigen::Index>& sigma);

/// The 2x4 matrix [[cos t, 0, -sin t, 0], [0, cos t, 0, sin t]].
Matrix qtheta(double theta);

/// For a symmetric 0 <= a <= I (d x d), a 2d x 4d matrix Q with Q Q^T = I and
/// Q J_{4d} Q^T = [[0, a], [-a, 0]]. Throws NotContraction.
Matrix contraction_embed(const Matrix& a, const ToleranceConfig& cfg = {});

/// Completes k u-columns and k v-columns forming a symplectic set under the
/// single-block form [n] to a full symplectic matrix with column order
/// u_1..u_n v_1..v_n. The given columns are copied bitwise into slots
/// 0..k-1 and n..n+k-1. Throws NotSymplecticSet or ExtensionFailed.
Matrix symplectic_extend(const Matrix& u_cols, const Matrix& v_cols, const SymplecticForm& form,
                         const ToleranceConfig& cfg = {});

/// exp(J h) for symmetric h.
Matrix symplectic_from_generator(const SymplecticForm& form, const Matrix& h);

/// exp(J H) with H random symmetric, ||J H||_2 drawn uniformly in [0.5, 2].
Matrix random_symplectic(const SymplecticForm& form, std::uint64_t seed);

/// Random 2d x 2d orthosymplectic [[A, B], [-B, A]] (single-block form [d]),
/// realified from a Haar-distributed d x d unitary A + iB.
Matrix random_orthosymplectic(int modes, std::uint64_t seed);

/// Gaussian unitary W(u) Gamma(l), global phase not tracked.
struct GaussianUnitary {
  Vector u;
  Matrix l;
  SymplecticForm form;

  /// Checks dimensions and that l is form-symplectic.
  static GaussianUnitary make(Vector u, Matrix l, SymplecticForm form, const ToleranceConfig& cfg = {});
  static GaussianUnitary identity(const SymplecticForm& form);
};

/// g1 after g2: (u1 + l1 u2, l1 l2).
GaussianUnitary gu_compose(const GaussianUnitary& g1, const GaussianUnitary& g2);

/// (-l^{-1} u, l^{-1}).
GaussianUnitary gu_inverse(const GaussianUnitary& g, const ToleranceConfig& cfg = {});

}  // namespace gausschan
