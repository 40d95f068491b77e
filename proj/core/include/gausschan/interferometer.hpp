#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gausschan/dilation.hpp"

namespace gausschan {

enum class DecisionStatus { Yes, No, Undecided };

enum class DecisionReason { TraceConditionFailed, InvalidChannel, QFound, SearchExhausted };

std::string_view to_string(DecisionStatus s) noexcept;
std::string_view to_string(DecisionReason r) noexcept;

/// Group searched by find_q. `Orthogonal` is O(2d); `Orthosymplectic` is the
/// subgroup of orthogonal matrices commuting with J_{2d} (a realified U(d)),
/// the only choice that turns a solution into a passive dilation.
enum class QGroup { Orthogonal, Orthosymplectic };

struct FindQOptions {
  int restarts = 32;
  int iters = 2000;
  std::uint64_t seed = 0;
  QGroup group = QGroup::Orthogonal;
  /// Restarts stop once one reaches this residual.
  double stop_residual = 1e-12;
  bool record_trace = false;
};

struct FindQResult {
  Matrix q;
  double residual = 0.0;  // ||X^T Q sqrt(Y) - (X^T Q sqrt(Y))^T||_F
  int restart = 0;        // index of the restart that produced q
  int restarts_run = 0;
  std::vector<double> trace;  // residual after each iteration of the chosen restart
};

/// Multi-restart Levenberg-Marquardt over the chosen group with polar
/// retraction; only decreasing steps are accepted. Restart 0 starts at the
/// identity, restart r > 0 at a random group element seeded from
/// derive_seed(seed, r).
FindQResult find_q(const Matrix& x, const Matrix& sqrt_y, const FindQOptions& opts = {}, const ToleranceConfig& cfg = {});

struct InterferometerDecision {
  DecisionStatus status = DecisionStatus::Undecided;
  DecisionReason reason = DecisionReason::SearchExhausted;
  std::optional<Matrix> q;
  std::optional<Matrix> b;      // Q sqrt(Y)
  std::optional<Matrix> l_inv;  // [[X, B], [-B, X]]
  double symmetry_residual = 0.0;
  double induced_deviation = 0.0;  // max |entry| of induced (X, Y, w) minus ch, when yes
  int restarts_run = 0;
};

struct DecideOptions {
  FindQOptions search{32, 2000, 0, QGroup::Orthosymplectic, 1e-12, false};
};

/// X^T X + Y = I within residual_tol * (1 + ||Y||_2 + ||X||_2^2) and w = 0.
bool trace_condition(const ChannelParams& ch, const ToleranceConfig& cfg = {});

/// validity -> trace condition -> sqrt(Y) -> find_q. A search that does not
/// reach residual_tol yields Undecided, never No.
InterferometerDecision decide(const ChannelParams& ch, const DecideOptions& opts = {}, const ToleranceConfig& cfg = {});

/// Reads l_inv = [[X, B], [-B, X]] with its 2d x 2d blocks as the system and
/// environment partition, i.e. as g of a DilationSpec on form [d, d].
DilationSpec interferometer_dilation(const Matrix& l_inv);

/// Beam-splitter loss: X = cos(theta) I, Y = sin(theta)^2 I, w = 0.
ChannelParams attenuator(int d, double theta);

/// Random passive dilation: a random (J_{2d} + J_{2d})-orthosymplectic g and
/// u = 0. Its induced channel is interferometer-implementable by construction.
DilationSpec random_passive_dilation(int d, std::uint64_t seed);

}  // namespace gausschan
