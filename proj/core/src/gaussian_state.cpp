#include "gausschan/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gausschan/error.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan {

Admissibility is_admissible_cov(const Matrix& s, const SymplecticForm& form, const ToleranceConfig& cfg) {
  if (s.rows() != form.dim() || s.cols() != form.dim()) {
    throw Error(ErrorKind::Structural, "covariance has wrong dimension for its form");
  }
  const HermitianPair h(s, form_matrix(form), cfg);
  Admissibility out;
  out.min_eig = psd_min_eig(h, cfg);
  out.admissible = out.min_eig >= -cfg.eig_tol * std::max(1.0, norm2(h.re()));
  return out;
}

GaussianState GaussianState::make(Vector mean, Matrix cov, SymplecticForm form, const ToleranceConfig& cfg) {
  if (mean.size() != form.dim()) throw Error(ErrorKind::Structural, "mean has wrong length for its form");
  if (!mean.allFinite()) throw Error(ErrorKind::Structural, "mean has non-finite entries");
  Matrix sym = ingest_symmetric(cov, cfg, "covariance");
  const auto adm = is_admissible_cov(sym, form, cfg);
  if (!adm.admissible) {
    throw Error(ErrorKind::NotPSD, "covariance is not admissible: min eig of S + iJ = " + std::to_string(adm.min_eig));
  }
  return GaussianState(std::move(mean), std::move(sym), std::move(form));
}

std::complex<double> char_fn(const GaussianState& st, const Vector& z) {
  if (z.size() != st.form().dim()) throw Error(ErrorKind::Structural, "char_fn argument has wrong length");
  const double phase = -st.mean().dot(z);
  const double log_mod = -0.5 * z.dot(st.cov() * z);
  return std::polar(std::exp(log_mod), phase);
}

GaussianState gu_action(const GaussianUnitary& g, const GaussianState& st, const ToleranceConfig& cfg) {
  if (!(g.form == st.form())) throw Error(ErrorKind::Structural, "gu_action: form mismatch");
  const Matrix inv = symplectic_inverse(g.l, g.form, cfg);
  Vector mean = inv.transpose() * st.mean() + 2.0 * (form_matrix(g.form) * g.u);
  Matrix cov = inv.transpose() * st.cov() * inv;
  cov = 0.5 * (cov + cov.transpose());
  return GaussianState::make(std::move(mean), std::move(cov), st.form(), cfg);
}

GaussianState vacuum(const SymplecticForm& form) {
  return GaussianState::make(Vector::Zero(form.dim()), Matrix::Identity(form.dim(), form.dim()), form);
}

GaussianState thermal(const SymplecticForm& form, const std::vector<double>& nus) {
  if (static_cast<int>(nus.size()) != form.modes()) {
    throw Error(ErrorKind::Structural, "thermal: need one value per mode");
  }
  Vector diag(form.dim());
  Eigen::Index off = 0;
  std::size_t mode = 0;
  for (int b : form.blocks()) {
    for (int i = 0; i < b; ++i, ++mode) {
      const double nu = nus[mode];
      if (!(nu >= 1.0) || !std::isfinite(nu)) {
        throw Error(ErrorKind::InvalidTemperature, "thermal value " + std::to_string(nu) + " < 1");
      }
      diag(off + i) = nu;
      diag(off + b + i) = nu;
    }
    off += 2 * b;
  }
  return GaussianState::make(Vector::Zero(form.dim()), diag.asDiagonal().toDenseMatrix(), form);
}

namespace {

GaussianState random_state_impl(const SymplecticForm& form, std::uint64_t seed, bool pure) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo(1.0);
  Vector mean(form.dim());
  for (Eigen::Index i = 0; i < mean.size(); ++i) mean(i) = normal(rng);
  std::vector<double> nus(static_cast<std::size_t>(form.modes()), 1.0);
  if (!pure) {
    for (auto& nu : nus) nu = 1.0 + std::abs(expo(rng));
  }
  const Matrix l = random_symplectic(form, derive_seed(seed, 1));
  const Matrix n = thermal(form, nus).cov();
  Matrix cov = l.transpose() * n * l;
  cov = 0.5 * (cov + cov.transpose());
  return GaussianState::make(std::move(mean), std::move(cov), form);
}

}  // namespace

GaussianState random_state(const SymplecticForm& form, std::uint64_t seed) {
  return random_state_impl(form, seed, false);
}

GaussianState random_pure_state(const SymplecticForm& form, std::uint64_t seed) {
  return random_state_impl(form, seed, true);
}

GaussianState tensor(const GaussianState& st1, const GaussianState& st2) {
  std::vector<int> blocks = st1.form().blocks();
  blocks.insert(blocks.end(), st2.form().blocks().begin(), st2.form().blocks().end());
  const auto n1 = st1.form().dim();
  const auto n2 = st2.form().dim();
  Vector mean(n1 + n2);
  mean << st1.mean(), st2.mean();
  Matrix cov = Matrix::Zero(n1 + n2, n1 + n2);
  cov.topLeftCorner(n1, n1) = st1.cov();
  cov.bottomRightCorner(n2, n2) = st2.cov();
  return GaussianState::make(std::move(mean), std::move(cov), SymplecticForm(std::move(blocks)));
}

}  // namespace gausschan
