#pragma once

#include <cstdint>

#include "gausschan/channel.hpp"

namespace gausschan {

/// Covariance-level Stinespring dilation. `g` is (J_{2 d_in} + J_{2 d_env})-
/// symplectic and plays the role of L^{-1}: the physical unitary is
/// W(u) Gamma(g^{-1}) acting on system (x) vacuum environment.
struct DilationSpec {
  Matrix g;
  Vector u;
  int d_in = 0;
  int d_env = 0;

  SymplecticForm form() const { return SymplecticForm({d_in, d_env}); }

  /// Checks block dimensions only.
  static DilationSpec make(Matrix g, Vector u, int d_in, int d_env);
};

/// L21 with L21^T L21 = Y and L21^T J_{4d} L21 = J - X^T J X.
struct L21Result {
  Matrix l21;
  double y_residual = 0.0;   // ||L21^T L21 - Y||_F (includes the regularization shift)
  double k_residual = 0.0;   // ||L21^T J L21 - (J - X^T J X)||_F
  bool regularized = false;  // Y was singular: Y + shift * I was used
  double reg_shift = 0.0;
  double max_d = 0.0;        // largest canonical value before clamping to 1
};

L21Result build_l21(const Matrix& x, const Matrix& y, const SymplecticForm& form, const ToleranceConfig& cfg = {});

struct DilationDiagnostics {
  L21Result l21;
  double symplectic_residual = 0.0;
};

struct DilationBuild {
  DilationSpec dilation;
  DilationDiagnostics diagnostics;
};

/// Full dilation with d_env = 2 d_in. Throws InvalidChannel, ExtensionFailed.
DilationBuild build_dilation(const ChannelParams& ch, const ToleranceConfig& cfg = {});

/// (X, Y, w) = (g11, g21^T g21, 2 J u1).
ChannelParams induced_channel(const DilationSpec& dil);

/// Max over n_states random states of the infinity-norm deviation between
/// apply(ch, st) and the Stinespring route (st (x) vacuum, act with g, trace
/// out the environment). Deterministic per-index seeds; independent of
/// `workers`.
double verify_dilation(const DilationSpec& dil, const ChannelParams& ch, std::size_t n_states, std::uint64_t seed,
                       const ToleranceConfig& cfg = {}, unsigned workers = 1);

/// Random (g, u) with g = random_symplectic([d_in, d_env]) and u ~ N(0, 1) on
/// the system part. Its induced channel is valid by construction, which makes
/// it the reference generator for round-trip tests.
DilationSpec random_dilation(int d_in, int d_env, std::uint64_t seed);

}  // namespace gausschan
