#pragma once

#include <cstdint>
#include <optional>

#include "gausschan/gaussian_state.hpp"

namespace gausschan {

/// Gaussian channel parameters acting as m -> X^T m + w, S -> X^T S X + Y on
/// a single-block form [d]. Holding a ChannelParams does not imply the
/// parameters are a valid channel; see validity().
struct ChannelParams {
  Matrix x;
  Matrix y;
  Vector w;
  SymplecticForm form;

  /// Checks dimensions and symmetrizes y (Structural error if y is not
  /// symmetric within residual_tol).
  static ChannelParams make(Matrix x, Matrix y, Vector w, SymplecticForm form, const ToleranceConfig& cfg = {});
  static ChannelParams identity(int modes);
  /// Reversible channel of the Gaussian unitary with symplectic matrix
  /// `x` and no displacement (Y = 0).
  static ChannelParams unitary(const Matrix& x);

  int modes() const noexcept { return form.modes(); }
};

struct ValidityReport {
  double min_eig_minus = 0.0;  // Y - i(J - X^T J X)
  double min_eig_plus = 0.0;   // Y + i(J - X^T J X)
  double y_min_eig = 0.0;
  double scale = 1.0;          // 1 + ||Y||_2 + ||X||_2^2
  bool valid = false;
};

/// J - X^T J X, antisymmetrized.
Matrix symplectic_defect(const Matrix& x, const SymplecticForm& form);

ValidityReport validity(const ChannelParams& ch, const ToleranceConfig& cfg = {});

/// Output state (X^T m + w, X^T S X + Y). Throws InvalidChannel.
GaussianState apply(const ChannelParams& ch, const GaussianState& st, const ToleranceConfig& cfg = {});

/// Psi*(W(z)) = exp(log_coeff_re + i coeff_phase) W(arg).
struct DualWeyl {
  double log_coeff_re = 0.0;
  double coeff_phase = 0.0;
  Vector arg;
};

DualWeyl dual_weyl(const ChannelParams& ch, const Vector& z);

/// `first` followed by `second`: (X1 X2, X2^T Y1 X2 + Y2, X2^T w1 + w2).
ChannelParams compose(const ChannelParams& first, const ChannelParams& second);

/// Y + i(J - X^T J X) >= 0 within eig_tol * (1 + ||Y|| + ||X||^2).
bool fd0_member(const Matrix& x, const Matrix& y, const SymplecticForm& form, const ToleranceConfig& cfg = {});

enum class FdVerdict { Falsified, NotFalsified };

struct FdSampleResult {
  FdVerdict verdict = FdVerdict::NotFalsified;
  std::optional<Matrix> witness;          // admissible S with X^T S X + Y outside CM(d)
  std::optional<std::size_t> witness_index;
  std::size_t samples = 0;
};

/// Monte-Carlo falsification of Y in F_d(X). Sample i uses
/// random_state(form, derive_seed(seed, i)); the reported witness is the
/// lowest failing index, so the result does not depend on `workers`.
FdSampleResult fd_member_sample(const Matrix& x, const Matrix& y, const SymplecticForm& form, std::size_t n_samples,
                                std::uint64_t seed, const ToleranceConfig& cfg = {}, unsigned workers = 1);

/// Sufficient condition for Y in F_d(X) for every X: Y itself in CM(d).
bool fd_sufficient(const Matrix& y, const SymplecticForm& form, const ToleranceConfig& cfg = {});

/// rank(Y) - rank(Y - Sigma Y^+ Sigma^T), Sigma = J - X^T J X. An upper
/// bound on environment modes only (the attenuator evaluates to 2).
int env_mode_bound(const ChannelParams& ch, const ToleranceConfig& cfg = {});

struct CounterexampleReport {
  ChannelParams channel;
  ValidityReport validity;
  bool fd_sufficient = false;
  bool fd0_member = true;
};

/// X = [[0, I], [I, 0]], Y = I, w = 0: in F_d(X) but not in F_d^0(X).
CounterexampleReport fd_counterexample(int d, const ToleranceConfig& cfg = {});

/// Covariance-level transpose map: X = diag(I, -I), Y = 0. Never valid.
ChannelParams transpose_map_params(int d);

}  // namespace gausschan
