#include "cli/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "gausschan/error.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan::cli {

namespace {

Vector normal_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Matrix normal_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(rng);
  return m;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double state_distance(const GaussianState& a, const GaussianState& b) {
  return std::max(max_abs(a.mean() - b.mean()), max_abs(a.cov() - b.cov()));
}

}  // namespace

ChannelParams oracle_channel(int d, std::uint64_t seed) { return induced_channel(random_dilation(d, 2 * d, seed)); }

ChannelParams passive_oracle_channel(int d, std::uint64_t seed) {
  return induced_channel(random_passive_dilation(d, seed));
}

ChannelParams zero_noise_fixture(int d, std::uint64_t seed) {
  const auto form = SymplecticForm::single(d);
  auto rng = make_rng(derive_seed(seed, 1));
  return ChannelParams{random_symplectic(form, derive_seed(seed, 0)), Matrix::Zero(2 * d, 2 * d),
                       normal_vector(2 * d, rng), form};
}

ChannelParams direct_sum(const ChannelParams& a, const ChannelParams& b) {
  const int da = a.modes();
  const int db = b.modes();
  const Eigen::Index na = 2 * da;
  const Eigen::Index n = na + 2 * db;
  Matrix x = Matrix::Zero(n, n);
  Matrix y = Matrix::Zero(n, n);
  Vector w(n);
  x.topLeftCorner(na, na) = a.x;
  x.bottomRightCorner(n - na, n - na) = b.x;
  y.topLeftCorner(na, na) = a.y;
  y.bottomRightCorner(n - na, n - na) = b.y;
  w << a.w, b.w;
  const auto sigma = form_permutation_index(SymplecticForm::single(da + db), SymplecticForm({da, db}));
  Vector w_single(n);
  for (Eigen::Index j = 0; j < n; ++j) w_single(sigma[static_cast<std::size_t>(j)]) = w(j);
  return ChannelParams{unpermute_congruence(x, sigma), unpermute_congruence(y, sigma), std::move(w_single),
                       SymplecticForm::single(da + db)};
}

ChannelParams rank_deficient_fixture(int d, std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 0));
  if (d == 1) {
    const auto form = SymplecticForm::single(1);
    const Vector v = normal_vector(2, rng);
    return ChannelParams{random_symplectic(form, derive_seed(seed, 1)), v * v.transpose(), normal_vector(2, rng),
                         form};
  }
  const auto noiseless = zero_noise_fixture(1, derive_seed(seed, 2));
  const auto rest = oracle_channel(d - 1, derive_seed(seed, 3));
  const auto sum = direct_sum(noiseless, rest);
  const auto form = SymplecticForm::single(d);
  const auto left = ChannelParams::unitary(random_symplectic(form, derive_seed(seed, 4)));
  const auto right = ChannelParams::unitary(random_symplectic(form, derive_seed(seed, 5)));
  return compose(compose(left, sum), right);
}

double channel_distance(const ChannelParams& a, const ChannelParams& b) {
  return std::max({max_abs(a.x - b.x), max_abs(a.y - b.y), max_abs(a.w - b.w)});
}

double orthosymplectic_residual(const Matrix& l_inv) {
  const Eigen::Index n = l_inv.rows();
  const int d = static_cast<int>(n / 4);
  const double orth = (l_inv.transpose() * l_inv - Matrix::Identity(n, n)).norm();
  return std::max({orth, symplectic_residual(l_inv, SymplecticForm::single(2 * d)),
                   symplectic_residual(l_inv, SymplecticForm({d, d}))});
}

CounterexampleMetrics counterexample_suite(const std::vector<int>& ds, std::size_t n_samples, std::uint64_t seed,
                                           const ToleranceConfig& cfg, unsigned workers) {
  CounterexampleMetrics m;
  for (int d : ds) {
    const auto rep = fd_counterexample(d, cfg);
    const auto& ch = rep.channel;
    const Matrix k = symplectic_defect(ch.x, ch.form);
    const HermitianPair h(ch.y, k, cfg);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.real_embedding(), Eigen::EigenvaluesOnly);
    const Vector ev = es.eigenvalues();  // ascending, each value twice
    const Eigen::Index half = ev.size() / 2;
    double gap = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) gap = std::max(gap, std::abs(ev(i) - (i < half ? -1.0 : 3.0)));
    m.worst_spectrum_gap = std::max(m.worst_spectrum_gap, gap);
    m.worst_min_eig_gap = std::max(m.worst_min_eig_gap, std::abs(rep.validity.min_eig_plus + 1.0));
    m.any_fd0_member = m.any_fd0_member || rep.fd0_member;
    m.all_fd_sufficient = m.all_fd_sufficient && rep.fd_sufficient;
    const auto fd = fd_member_sample(ch.x, ch.y, ch.form, n_samples, derive_seed(seed, static_cast<std::uint64_t>(d)),
                                     cfg, workers);
    m.any_falsified = m.any_falsified || fd.verdict == FdVerdict::Falsified;
    m.samples += fd.samples;
  }
  return m;
}

TransposeMapMetrics transpose_map_suite(const std::vector<int>& ds, const ToleranceConfig& cfg) {
  TransposeMapMetrics m;
  for (int d : ds) {
    const auto v = validity(transpose_map_params(d), cfg);
    const double lo = std::min(v.min_eig_minus, v.min_eig_plus);
    m.worst_min_eig_gap = std::max(m.worst_min_eig_gap, std::abs(lo + 2.0));
    m.any_valid = m.any_valid || v.valid;
  }
  return m;
}

namespace {

void roundtrip_case(const ChannelParams& ch, std::size_t n_states, std::uint64_t seed, const ToleranceConfig& cfg,
                    unsigned workers, RoundTripMetrics& m) {
  ++m.cases;
  try {
    const auto built = build_dilation(ch, cfg);
    const auto back = induced_channel(built.dilation);
    m.worst_recovery = std::max(m.worst_recovery, channel_distance(back, ch));
    m.worst_symplectic = std::max(m.worst_symplectic, built.diagnostics.symplectic_residual);
    if (n_states > 0) {
      m.worst_verify = std::max(m.worst_verify, verify_dilation(built.dilation, ch, n_states, seed, cfg, workers));
    }
  } catch (const Error&) {
    ++m.errors;
  }
}

}  // namespace

RoundTripMetrics roundtrip_suite(int d, std::size_t count, std::size_t n_states, std::uint64_t seed,
                                 const ToleranceConfig& cfg, unsigned workers) {
  RoundTripMetrics m;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    roundtrip_case(oracle_channel(d, s), n_states, derive_seed(s, 7), cfg, workers, m);
  }
  return m;
}

RoundTripMetrics singular_roundtrip_suite(std::size_t zero_y, std::size_t rank_deficient, std::size_t n_states,
                                          std::uint64_t seed, const ToleranceConfig& cfg, unsigned workers) {
  RoundTripMetrics m;
  for (std::size_t i = 0; i < zero_y + rank_deficient; ++i) {
    const int d = 1 + static_cast<int>(i % 3);
    const std::uint64_t s = derive_seed(seed, i);
    const auto ch = i < zero_y ? zero_noise_fixture(d, s) : rank_deficient_fixture(d, s);
    roundtrip_case(ch, n_states, derive_seed(s, 7), cfg, workers, m);
  }
  return m;
}

TransposeEquivalenceMetrics transpose_equivalence_suite(std::size_t count, std::uint64_t seed,
                                                        const ToleranceConfig& cfg) {
  TransposeEquivalenceMetrics m;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    const int d = 1 + static_cast<int>(i % 3);
    ChannelParams ch = [&] {
      // Alternate oracle (valid) channels with unstructured (X, Y) pairs.
      if (i % 2 == 0) return oracle_channel(d, s);
      auto rng = make_rng(s);
      const Matrix g = normal_matrix(2 * d, 2 * d, rng);
      return ChannelParams{normal_matrix(2 * d, 2 * d, rng), g + g.transpose(), Vector::Zero(2 * d),
                           SymplecticForm::single(d)};
    }();
    const auto v = validity(ch, cfg);
    const double gap = std::abs(v.min_eig_plus - v.min_eig_minus) / (1.0 + norm2(ch.y));
    m.worst_scaled_gap = std::max(m.worst_scaled_gap, gap);
    ++m.cases;
    if (v.valid) ++m.valid_cases;
  }
  return m;
}

InterferometerMetrics interferometer_suite(std::size_t thetas, std::size_t passive, std::uint64_t seed,
                                           const DecideOptions& opts, const ToleranceConfig& cfg) {
  InterferometerMetrics m;
  auto record_yes = [&](const ChannelParams& ch, std::size_t& yes) {
    const auto dec = decide(ch, opts, cfg);
    if (dec.status != DecisionStatus::Yes) return;
    ++yes;
    m.worst_orthosymplectic = std::max(m.worst_orthosymplectic, orthosymplectic_residual(*dec.l_inv));
    const auto induced = induced_channel(interferometer_dilation(*dec.l_inv));
    m.worst_induced = std::max(m.worst_induced, channel_distance(induced, ch));
  };
  for (int d = 1; d <= 2; ++d) {
    for (std::size_t k = 0; k < thetas; ++k) {
      const double theta =
          thetas > 1 ? std::numbers::pi / 2 * static_cast<double>(k) / static_cast<double>(thetas - 1) : 0.5;
      ++m.attenuator_cases;
      record_yes(attenuator(d, theta), m.attenuator_yes);
    }
  }
  for (std::size_t i = 0; i < passive; ++i) {
    ++m.passive_cases;
    record_yes(passive_oracle_channel(1 + static_cast<int>(i % 2), derive_seed(seed, i)), m.passive_yes);
  }
  const auto form = SymplecticForm::single(1);
  m.half_identity = decide(ChannelParams{0.5 * Matrix::Identity(2, 2), 0.25 * Matrix::Identity(2, 2),
                                         Vector::Zero(2), form},
                           opts, cfg);
  m.trace_failing = decide(ChannelParams{0.5 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), Vector::Zero(2), form},
                           opts, cfg);
  m.counterexample = decide(fd_counterexample(1, cfg).channel, opts, cfg);
  return m;
}

CompositionMetrics composition_suite(std::size_t count, std::size_t n_states, std::uint64_t seed,
                                     const ToleranceConfig& cfg) {
  CompositionMetrics m;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    const int d = 1 + static_cast<int>(i % 3);
    const auto first = oracle_channel(d, derive_seed(s, 0));
    const auto second = oracle_channel(d, derive_seed(s, 1));
    const auto both = compose(first, second);
    m.all_valid = m.all_valid && validity(both, cfg).valid;
    for (std::size_t k = 0; k < n_states; ++k) {
      const auto st = random_state(first.form, derive_seed(s, 2 + k));
      const auto seq = apply(second, apply(first, st, cfg), cfg);
      m.worst_deviation = std::max(m.worst_deviation, state_distance(seq, apply(both, st, cfg)));
    }
    ++m.cases;
  }
  return m;
}

EnvModeMetrics env_mode_suite(std::uint64_t seed, const ToleranceConfig& cfg) {
  EnvModeMetrics m;
  m.identity = env_mode_bound(ChannelParams::identity(2), cfg);
  m.unitary = env_mode_bound(ChannelParams::unitary(random_symplectic(SymplecticForm::single(2), seed)), cfg);
  m.attenuator = env_mode_bound(attenuator(1, 0.6), cfg);
  return m;
}

}  // namespace gausschan::cli
