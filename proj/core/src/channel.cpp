#include "gausschan/channel.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "gausschan/error.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan {

ChannelParams ChannelParams::make(Matrix x, Matrix y, Vector w, SymplecticForm form, const ToleranceConfig& cfg) {
  if (!form.is_single_block()) throw Error(ErrorKind::Structural, "channel parameters need a single-block form");
  const auto n = form.dim();
  if (x.rows() != n || x.cols() != n) throw Error(ErrorKind::Structural, "X has wrong dimension");
  if (y.rows() != n || y.cols() != n) throw Error(ErrorKind::Structural, "Y has wrong dimension");
  if (w.size() != n) throw Error(ErrorKind::Structural, "w has wrong length");
  if (!x.allFinite() || !w.allFinite()) throw Error(ErrorKind::Structural, "channel parameters are not finite");
  Matrix ys = ingest_symmetric(y, cfg, "Y");
  return ChannelParams{std::move(x), std::move(ys), std::move(w), std::move(form)};
}

ChannelParams ChannelParams::identity(int modes) {
  const auto form = SymplecticForm::single(modes);
  return ChannelParams{Matrix::Identity(form.dim(), form.dim()), Matrix::Zero(form.dim(), form.dim()),
                       Vector::Zero(form.dim()), form};
}

ChannelParams ChannelParams::unitary(const Matrix& x) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0 || x.rows() == 0) {
    throw Error(ErrorKind::Structural, "unitary channel needs a nonempty 2d x 2d matrix");
  }
  const auto form = SymplecticForm::single(static_cast<int>(x.rows() / 2));
  return ChannelParams{x, Matrix::Zero(x.rows(), x.cols()), Vector::Zero(x.rows()), form};
}

Matrix symplectic_defect(const Matrix& x, const SymplecticForm& form) {
  const Matrix j = form_matrix(form);
  const Matrix k = j - x.transpose() * j * x;
  return 0.5 * (k - k.transpose());
}

ValidityReport validity(const ChannelParams& ch, const ToleranceConfig& cfg) {
  const Matrix k = symplectic_defect(ch.x, ch.form);
  const HermitianPair plus(ch.y, k, cfg);
  ValidityReport r;
  r.min_eig_plus = psd_min_eig(plus, cfg);
  r.min_eig_minus = psd_min_eig(plus.transposed(), cfg);
  r.y_min_eig = sym_min_eig(ch.y);
  const double nx = norm2(ch.x);
  r.scale = 1.0 + norm2(ch.y) + nx * nx;
  r.valid = r.min_eig_minus >= -cfg.eig_tol * r.scale;
  return r;
}

GaussianState apply(const ChannelParams& ch, const GaussianState& st, const ToleranceConfig& cfg) {
  if (!(ch.form == st.form())) throw Error(ErrorKind::Structural, "apply: channel and state forms differ");
  const auto rep = validity(ch, cfg);
  if (!rep.valid) {
    throw Error(ErrorKind::InvalidChannel, "min eig of Y - iK = " + std::to_string(rep.min_eig_minus));
  }
  Vector mean = ch.x.transpose() * st.mean() + ch.w;
  Matrix cov = ch.x.transpose() * st.cov() * ch.x + ch.y;
  cov = 0.5 * (cov + cov.transpose());
  return GaussianState::make(std::move(mean), std::move(cov), st.form(), cfg);
}

DualWeyl dual_weyl(const ChannelParams& ch, const Vector& z) {
  if (z.size() != ch.form.dim()) throw Error(ErrorKind::Structural, "dual_weyl argument has wrong length");
  return DualWeyl{-0.5 * z.dot(ch.y * z), -ch.w.dot(z), ch.x * z};
}

ChannelParams compose(const ChannelParams& first, const ChannelParams& second) {
  if (!(first.form == second.form)) throw Error(ErrorKind::Structural, "compose: form mismatch");
  Matrix y = second.x.transpose() * first.y * second.x + second.y;
  y = 0.5 * (y + y.transpose());
  return ChannelParams{first.x * second.x, std::move(y), second.x.transpose() * first.w + second.w, first.form};
}

bool fd0_member(const Matrix& x, const Matrix& y, const SymplecticForm& form, const ToleranceConfig& cfg) {
  const auto ch = ChannelParams::make(x, y, Vector::Zero(form.dim()), form, cfg);
  const auto rep = validity(ch, cfg);
  return rep.min_eig_plus >= -cfg.eig_tol * rep.scale;
}

FdSampleResult fd_member_sample(const Matrix& x, const Matrix& y, const SymplecticForm& form, std::size_t n_samples,
                                std::uint64_t seed, const ToleranceConfig& cfg, unsigned workers) {
  const auto ch = ChannelParams::make(x, y, Vector::Zero(form.dim()), form, cfg);
  if (sym_min_eig(ch.y) < -cfg.eig_tol * std::max(1.0, norm2(ch.y))) {
    throw Error(ErrorKind::NotPSD, "fd_member_sample: Y is not positive semidefinite");
  }
  std::vector<char> failed(n_samples, 0);
  parallel_for_index(n_samples, workers, [&](std::size_t i) {
    const Matrix s = random_state(form, derive_seed(seed, i)).cov();
    Matrix t = ch.x.transpose() * s * ch.x + ch.y;
    t = 0.5 * (t + t.transpose());
    failed[i] = is_admissible_cov(t, form, cfg).admissible ? 0 : 1;
  });
  FdSampleResult out;
  out.samples = n_samples;
  const auto it = std::find(failed.begin(), failed.end(), 1);
  if (it != failed.end()) {
    const auto idx = static_cast<std::size_t>(it - failed.begin());
    out.verdict = FdVerdict::Falsified;
    out.witness_index = idx;
    out.witness = random_state(form, derive_seed(seed, idx)).cov();
  }
  return out;
}

bool fd_sufficient(const Matrix& y, const SymplecticForm& form, const ToleranceConfig& cfg) {
  return is_admissible_cov(y, form, cfg).admissible;
}

int env_mode_bound(const ChannelParams& ch, const ToleranceConfig& cfg) {
  if (!validity(ch, cfg).valid) throw Error(ErrorKind::InvalidChannel, "env_mode_bound needs a valid channel");
  const Matrix sigma = symplectic_defect(ch.x, ch.form);
  const double threshold = cfg.eig_tol * (1.0 + norm2(ch.y) + norm2(sigma));
  const auto ypinv = pinv_rank_abs(ch.y, threshold);
  const Matrix rest = ch.y - sigma * ypinv.pinv * sigma.transpose();
  const auto rest_rank = pinv_rank_abs(rest, threshold).rank;
  return static_cast<int>(ypinv.rank - rest_rank);
}

CounterexampleReport fd_counterexample(int d, const ToleranceConfig& cfg) {
  if (d < 1) throw Error(ErrorKind::Structural, "fd_counterexample: d must be >= 1");
  const auto form = SymplecticForm::single(d);
  Matrix x = Matrix::Zero(2 * d, 2 * d);
  x.topRightCorner(d, d).setIdentity();
  x.bottomLeftCorner(d, d).setIdentity();
  auto ch = ChannelParams::make(x, Matrix::Identity(2 * d, 2 * d), Vector::Zero(2 * d), form, cfg);
  CounterexampleReport rep{ch, validity(ch, cfg), fd_sufficient(ch.y, form, cfg), fd0_member(ch.x, ch.y, form, cfg)};
  return rep;
}

ChannelParams transpose_map_params(int d) {
  if (d < 1) throw Error(ErrorKind::Structural, "transpose_map_params: d must be >= 1");
  Matrix x = Matrix::Identity(2 * d, 2 * d);
  x.bottomRightCorner(d, d) *= -1.0;
  return ChannelParams{std::move(x), Matrix::Zero(2 * d, 2 * d), Vector::Zero(2 * d), SymplecticForm::single(d)};
}

}  // namespace gausschan
