#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gausschan/channel.hpp"
#include "gausschan/dilation.hpp"
#include "gausschan/interferometer.hpp"

namespace gausschan::cli {

// Fixture generators. Every valid channel here comes from an independent
// route (a random dilation or a unitary conjugation), never from
// build_dilation itself.

/// induced_channel(random_dilation(d, 2d, seed)).
ChannelParams oracle_channel(int d, std::uint64_t seed);
/// induced_channel(random_passive_dilation(d, seed)).
ChannelParams passive_oracle_channel(int d, std::uint64_t seed);
/// X random symplectic, Y = 0, w ~ N(0, 1).
ChannelParams zero_noise_fixture(int d, std::uint64_t seed);
/// Valid channel whose Y has a zero symplectic pair: a noiseless mode summed
/// with an oracle channel on the others, then conjugated by random Gaussian
/// unitaries on both sides. d = 1 uses X symplectic, Y rank one.
ChannelParams rank_deficient_fixture(int d, std::uint64_t seed);
/// a (+) b on the single-block form with a's modes first.
ChannelParams direct_sum(const ChannelParams& a, const ChannelParams& b);
/// Max |entry| over the differences of X, Y and w.
double channel_distance(const ChannelParams& a, const ChannelParams& b);

struct CounterexampleMetrics {
  double worst_min_eig_gap = 0.0;   // |min_eig + 1|
  double worst_spectrum_gap = 0.0;  // distance of the spectrum from {-1, 3}
  bool any_fd0_member = false;
  bool all_fd_sufficient = true;
  bool any_falsified = false;
  std::size_t samples = 0;
};
CounterexampleMetrics counterexample_suite(const std::vector<int>& ds, std::size_t n_samples, std::uint64_t seed,
                                           const ToleranceConfig& cfg, unsigned workers);

struct TransposeMapMetrics {
  double worst_min_eig_gap = 0.0;  // |min_eig + 2|
  bool any_valid = false;
};
TransposeMapMetrics transpose_map_suite(const std::vector<int>& ds, const ToleranceConfig& cfg);

struct RoundTripMetrics {
  std::size_t cases = 0;
  std::size_t errors = 0;  // construction threw
  double worst_recovery = 0.0;
  double worst_symplectic = 0.0;
  double worst_verify = 0.0;
};
RoundTripMetrics roundtrip_suite(int d, std::size_t count, std::size_t n_states, std::uint64_t seed,
                                 const ToleranceConfig& cfg, unsigned workers);
/// Zero-Y then rank-deficient fixtures; d cycles through 1, 2, 3.
RoundTripMetrics singular_roundtrip_suite(std::size_t zero_y, std::size_t rank_deficient, std::size_t n_states,
                                          std::uint64_t seed, const ToleranceConfig& cfg, unsigned workers);

struct TransposeEquivalenceMetrics {
  std::size_t cases = 0;
  std::size_t valid_cases = 0;
  double worst_scaled_gap = 0.0;  // |min(Y+iK) - min(Y-iK)| / (1 + ||Y||_2)
};
TransposeEquivalenceMetrics transpose_equivalence_suite(std::size_t count, std::uint64_t seed,
                                                        const ToleranceConfig& cfg);

struct InterferometerMetrics {
  std::size_t attenuator_cases = 0;
  std::size_t attenuator_yes = 0;
  std::size_t passive_cases = 0;
  std::size_t passive_yes = 0;
  double worst_orthosymplectic = 0.0;
  double worst_induced = 0.0;
  InterferometerDecision half_identity;   // X = I/2, Y = I/4 (not a valid channel)
  InterferometerDecision trace_failing;   // X = I/2, Y = I (valid, X^T X + Y != I)
  InterferometerDecision counterexample;  // d = 1
};
InterferometerMetrics interferometer_suite(std::size_t thetas, std::size_t passive, std::uint64_t seed,
                                           const DecideOptions& opts, const ToleranceConfig& cfg);

struct CompositionMetrics {
  std::size_t cases = 0;
  double worst_deviation = 0.0;
  bool all_valid = true;
};
CompositionMetrics composition_suite(std::size_t count, std::size_t n_states, std::uint64_t seed,
                                     const ToleranceConfig& cfg);

struct EnvModeMetrics {
  int identity = -1;
  int unitary = -1;
  int attenuator = -1;
};
EnvModeMetrics env_mode_suite(std::uint64_t seed, const ToleranceConfig& cfg);

/// Orthogonality and symplecticity residual of l_inv under both J_{4d} and
/// J_{2d} (+) J_{2d}.
double orthosymplectic_residual(const Matrix& l_inv);

}  // namespace gausschan::cli
