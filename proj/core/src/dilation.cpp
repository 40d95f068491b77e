#include "gausschan/dilation.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "gausschan/error.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan {

DilationSpec DilationSpec::make(Matrix g, Vector u, int d_in, int d_env) {
  if (d_in < 1 || d_env < 1) throw Error(ErrorKind::Structural, "dilation mode counts must be >= 1");
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(d_in + d_env);
  if (g.rows() != n || g.cols() != n) throw Error(ErrorKind::Structural, "dilation matrix has wrong dimension");
  if (u.size() != n) throw Error(ErrorKind::Structural, "dilation displacement has wrong length");
  if (!g.allFinite() || !u.allFinite()) throw Error(ErrorKind::Structural, "dilation has non-finite entries");
  return DilationSpec{std::move(g), std::move(u), d_in, d_env};
}

L21Result build_l21(const Matrix& x, const Matrix& y, const SymplecticForm& form, const ToleranceConfig& cfg) {
  const auto ch = ChannelParams::make(x, y, Vector::Zero(form.dim()), form, cfg);
  const auto rep = validity(ch, cfg);
  if (!rep.valid) {
    throw Error(ErrorKind::InvalidChannel, "Y + i(J - X^T J X) has min eigenvalue " + std::to_string(rep.min_eig_plus));
  }
  const int d = form.modes();
  const Matrix k = symplectic_defect(ch.x, form);

  L21Result out;
  const Matrix j_env = form_matrix(SymplecticForm::single(2 * d));
  Eigen::SelfAdjointEigenSolver<Matrix> es(ch.y);
  Vector lam = es.eigenvalues();
  if (lam.cwiseAbs().maxCoeff() <= cfg.eig_tol) {
    // Y = 0: validity already forced K = 0, and L21 = 0 is exact.
    out.l21 = Matrix::Zero(4 * static_cast<Eigen::Index>(d), 2 * static_cast<Eigen::Index>(d));
    out.y_residual = ch.y.norm();
    out.k_residual = k.norm();
    return out;
  }
  const double shift = cfg.reg_eps * (1.0 + lam.cwiseAbs().maxCoeff());
  if (lam.minCoeff() <= shift) {
    // Singular (or nearly singular) Y: work with Y + shift * I.
    out.regularized = true;
    out.reg_shift = shift;
    lam.array() += shift;
  }
  lam = lam.cwiseMax(0.0);
  const Matrix& v = es.eigenvectors();
  const Matrix y_half = v * lam.cwiseSqrt().asDiagonal() * v.transpose();
  const Matrix y_inv_half = v * lam.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();

  Matrix m = y_inv_half * k * y_inv_half;
  m = 0.5 * (m - m.transpose());
  const auto canon = skew_canonical(m, cfg);
  out.max_d = canon.d_vals.size() > 0 ? canon.d_vals.maxCoeff() : 0.0;
  const Vector dvals = canon.d_vals.cwiseMin(1.0).cwiseMax(0.0);

  const Matrix q = contraction_embed(dvals.asDiagonal().toDenseMatrix(), cfg);  // 2d x 4d
  out.l21 = q.transpose() * canon.r.transpose() * y_half;

  out.y_residual = (out.l21.transpose() * out.l21 - ch.y).norm();
  out.k_residual = (out.l21.transpose() * j_env * out.l21 - k).norm();
  return out;
}

DilationBuild build_dilation(const ChannelParams& ch, const ToleranceConfig& cfg) {
  const int d = ch.modes();
  DilationBuild out;
  out.diagnostics.l21 = build_l21(ch.x, ch.y, ch.form, cfg);
  const Matrix& l21 = out.diagnostics.l21.l21;

  // Columns X xi_i (+) L21 xi_i and X eta_i (+) L21 eta_i form a symplectic set
  // for J_{2d} (+) J_{4d}; move them to the single-block J_{6d} convention.
  const SymplecticForm split({d, 2 * d});
  const auto whole = SymplecticForm::single(3 * d);
  const auto sigma = form_permutation_index(whole, split);
  const Eigen::Index n6 = 6 * static_cast<Eigen::Index>(d);
  Matrix cols(n6, 2 * d);
  cols.topRows(2 * d) = ch.x;
  cols.bottomRows(4 * d) = l21;
  Matrix pcols(n6, 2 * d);
  pcols(sigma, Eigen::all) = cols;

  const Matrix m = symplectic_extend(pcols.leftCols(d), pcols.rightCols(d), whole, cfg);
  Matrix g = permute_congruence(m, sigma);

  Vector u = Vector::Zero(n6);
  u.head(2 * d) = 0.5 * (form_matrix(ch.form).transpose() * ch.w);
  out.dilation = DilationSpec::make(std::move(g), std::move(u), d, 2 * d);
  out.diagnostics.symplectic_residual = symplectic_residual(out.dilation.g, split);
  return out;
}

ChannelParams induced_channel(const DilationSpec& dil) {
  const Eigen::Index ns = 2 * static_cast<Eigen::Index>(dil.d_in);
  const Eigen::Index ne = 2 * static_cast<Eigen::Index>(dil.d_env);
  const auto form = SymplecticForm::single(dil.d_in);
  Matrix x = dil.g.topLeftCorner(ns, ns);
  const Matrix g21 = dil.g.bottomLeftCorner(ne, ns);
  Matrix y = g21.transpose() * g21;
  y = 0.5 * (y + y.transpose());
  Vector w = 2.0 * (form_matrix(form) * dil.u.head(ns));
  return ChannelParams::make(std::move(x), std::move(y), std::move(w), form);
}

double verify_dilation(const DilationSpec& dil, const ChannelParams& ch, std::size_t n_states, std::uint64_t seed,
                       const ToleranceConfig& cfg, unsigned workers) {
  if (ch.modes() != dil.d_in) throw Error(ErrorKind::Structural, "verify_dilation: mode counts differ");
  const Eigen::Index ns = 2 * static_cast<Eigen::Index>(dil.d_in);
  const Matrix j_joint = form_matrix(dil.form());
  const Vector shift = 2.0 * (j_joint * dil.u);
  const auto env = vacuum(SymplecticForm::single(dil.d_env));

  std::vector<double> dev(n_states, 0.0);
  parallel_for_index(n_states, workers, [&](std::size_t i) {
    const auto st = random_state(ch.form, derive_seed(seed, i));
    const auto expected = apply(ch, st, cfg);
    const auto joint = tensor(st, env);
    // Gamma(g^{-1}) acts by the inverse-transpose congruence of g^{-1}, i.e. by g.
    const Vector mean = dil.g.transpose() * joint.mean() + shift;
    const Matrix cov = dil.g.transpose() * joint.cov() * dil.g;
    const double dm = (mean.head(ns) - expected.mean()).cwiseAbs().maxCoeff();
    const double dc = (cov.topLeftCorner(ns, ns) - expected.cov()).cwiseAbs().maxCoeff();
    dev[i] = std::max(dm, dc);
  });
  return dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

DilationSpec random_dilation(int d_in, int d_env, std::uint64_t seed) {
  const SymplecticForm form({d_in, d_env});
  Matrix g = random_symplectic(form, derive_seed(seed, 0));
  auto rng = make_rng(derive_seed(seed, 1));
  std::normal_distribution<double> normal;
  Vector u = Vector::Zero(form.dim());
  for (Eigen::Index i = 0; i < 2 * d_in; ++i) u(i) = normal(rng);
  return DilationSpec::make(std::move(g), std::move(u), d_in, d_env);
}

}  // namespace gausschan
