#include "gausschan/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "gausschan/error.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan {

SymplecticForm::SymplecticForm(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorKind::Structural, "symplectic form needs at least one block");
  for (int b : blocks_) {
    if (b < 1) throw Error(ErrorKind::Structural, "symplectic form blocks must have >= 1 mode");
    modes_ += b;
  }
}

Matrix form_matrix(const SymplecticForm& form) {
  Matrix j = Matrix::Zero(form.dim(), form.dim());
  Eigen::Index off = 0;
  for (int b : form.blocks()) {
    j.block(off, off + b, b, b).setIdentity();
    j.block(off + b, off, b, b) = -Matrix::Identity(b, b);
    off += 2 * b;
  }
  return j;
}

namespace {

void require_dims(const Matrix& l, const SymplecticForm& form, const char* what) {
  if (l.rows() != form.dim() || l.cols() != form.dim()) {
    throw Error(ErrorKind::Structural, std::string(what) + ": expected " + std::to_string(form.dim()) + "x" +
                                           std::to_string(form.dim()) + " matrix, got " +
                                           std::to_string(l.rows()) + "x" + std::to_string(l.cols()));
  }
}

}  // namespace

double symplectic_residual(const Matrix& l, const SymplecticForm& form) {
  require_dims(l, form, "symplectic_residual");
  const Matrix j = form_matrix(form);
  return (l.transpose() * j * l - j).norm();
}

bool is_symplectic(const Matrix& l, const SymplecticForm& form, const ToleranceConfig& cfg) {
  const double r = symplectic_residual(l, form);
  const double s = norm2(l);
  return r <= cfg.residual_tol * std::max(1.0, s * s);
}

Matrix symplectic_inverse(const Matrix& l, const SymplecticForm& form, const ToleranceConfig& cfg) {
  if (!is_symplectic(l, form, cfg)) {
    throw Error(ErrorKind::NotSymplectic,
                "symplectic_inverse: residual " + std::to_string(symplectic_residual(l, form)));
  }
  const Matrix j = form_matrix(form);
  return j.transpose() * l.transpose() * j;
}

OrthosymplecticBlocks orthosymplectic_blocks(const Matrix& l, const ToleranceConfig& cfg) {
  if (l.rows() != l.cols() || l.rows() % 2 != 0 || l.rows() == 0) {
    throw Error(ErrorKind::Structural, "orthosymplectic_blocks: expected a nonempty 2d x 2d matrix");
  }
  const Eigen::Index d = l.rows() / 2;
  const Eigen::Index n = l.rows();
  const double orth = (l.transpose() * l - Matrix::Identity(n, n)).norm();
  if (orth > cfg.residual_tol) {
    throw Error(ErrorKind::NotOrthogonal, "||L^T L - I||_F = " + std::to_string(orth));
  }
  const auto form = SymplecticForm::single(static_cast<int>(d));
  const double symp = symplectic_residual(l, form);
  if (symp > cfg.residual_tol) {
    throw Error(ErrorKind::NotSymplectic, "||L^T J L - J||_F = " + std::to_string(symp));
  }
  OrthosymplecticBlocks out{l.topLeftCorner(d, d), l.topRightCorner(d, d)};
  const double pattern =
      std::max((l.bottomLeftCorner(d, d) + out.b).norm(), (l.bottomRightCorner(d, d) - out.a).norm());
  const double gram = (out.a.transpose() * out.a + out.b.transpose() * out.b - Matrix::Identity(d, d)).norm();
  const Matrix atb = out.a.transpose() * out.b;
  const double sym = (atb - atb.transpose()).norm();
  if (pattern > cfg.residual_tol || gram > cfg.residual_tol || sym > cfg.residual_tol) {
    throw Error(ErrorKind::BlockStructureViolated,
                "[[A,B],[-B,A]] pattern " + std::to_string(pattern) + ", A^TA+B^TB-I " + std::to_string(gram) +
                    ", A^TB asymmetry " + std::to_string(sym));
  }
  return out;
}

namespace {

// (mode, quadrature) label of every coordinate, in storage order.
std::vector<std::pair<int, int>> coordinate_labels(const SymplecticForm& form) {
  std::vector<std::pair<int, int>> labels;
  labels.reserve(static_cast<std::size_t>(form.dim()));
  int offset = 0;
  for (int b : form.blocks()) {
    for (int q = 0; q < 2; ++q) {
      for (int i = 0; i < b; ++i) labels.emplace_back(offset + i, q);
    }
    offset += b;
  }
  return labels;
}

}  // namespace

std::vector<Eigen::Index> form_permutation_index(const SymplecticForm& src, const SymplecticForm& dst) {
  if (src.modes() != dst.modes()) {
    throw Error(ErrorKind::Structural, "form_permutation: forms have different total dimension");
  }
  std::map<std::pair<int, int>, Eigen::Index> where;
  const auto src_labels = coordinate_labels(src);
  for (std::size_t i = 0; i < src_labels.size(); ++i) where[src_labels[i]] = static_cast<Eigen::Index>(i);
  std::vector<Eigen::Index> sigma;
  sigma.reserve(src_labels.size());
  for (const auto& label : coordinate_labels(dst)) sigma.push_back(where.at(label));
  return sigma;
}

Matrix form_permutation(const SymplecticForm& src, const SymplecticForm& dst) {
  const auto sigma = form_permutation_index(src, dst);
  const auto n = static_cast<Eigen::Index>(sigma.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p(sigma[static_cast<std::size_t>(j)], j) = 1.0;
  return p;
}

Matrix permute_congruence(const Matrix& a, const std::vector<Eigen::Index>& sigma) {
  return a(sigma, sigma);
}

Matrix unpermute_congruence(const Matrix& a, const std::vector<Eigen::Index>& sigma) {
  Matrix out(a.rows(), a.cols());
  out(sigma, sigma) = a;
  return out;
}

Matrix qtheta(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix q(2, 4);
  q << c, 0, -s, 0,
       0, c, 0, s;
  return q;
}

Matrix contraction_embed(const Matrix& a_in, const ToleranceConfig& cfg) {
  const Matrix a = ingest_symmetric(a_in, cfg, "contraction_embed input");
  const auto d = static_cast<int>(a.rows());
  if (d == 0) throw Error(ErrorKind::Structural, "contraction_embed: empty matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector& lam = es.eigenvalues();
  if (lam.minCoeff() < -cfg.eig_tol || lam.maxCoeff() > 1.0 + cfg.eig_tol) {
    throw Error(ErrorKind::NotContraction, "spectrum [" + std::to_string(lam.minCoeff()) + ", " +
                                               std::to_string(lam.maxCoeff()) + "] escapes [0, 1]");
  }

  // Mode-interleaved block: output mode j uses environment modes 2j, 2j+1.
  Matrix q_int = Matrix::Zero(2 * d, 4 * d);
  for (int j = 0; j < d; ++j) {
    const double lj = std::clamp(lam(j), 0.0, 1.0);
    q_int.block(2 * j, 4 * j, 2, 4) = qtheta(0.5 * std::acos(lj));
  }

  // Blocked <-> interleaved: with P_n = form_permutation([n], [1,...,1]),
  // P_n^T J_{2n} P_n = J_2 + ... + J_2, so Q_blocked = P_d Q_int P_{2d}^T.
  const auto sig_out = form_permutation_index(SymplecticForm::single(d), SymplecticForm(std::vector<int>(d, 1)));
  const auto sig_env =
      form_permutation_index(SymplecticForm::single(2 * d), SymplecticForm(std::vector<int>(2 * d, 1)));
  Matrix q_blocked(2 * d, 4 * d);
  q_blocked(sig_out, sig_env) = q_int;

  Matrix uu = Matrix::Zero(2 * d, 2 * d);
  uu.topLeftCorner(d, d) = es.eigenvectors();
  uu.bottomRightCorner(d, d) = es.eigenvectors();
  return uu * q_blocked;
}

Matrix symplectic_extend(const Matrix& u_cols, const Matrix& v_cols, const SymplecticForm& form,
                         const ToleranceConfig& cfg) {
  if (!form.is_single_block()) {
    throw Error(ErrorKind::Structural, "symplectic_extend expects a single-block form");
  }
  const Eigen::Index n = form.modes();
  const Eigen::Index dim = form.dim();
  const Eigen::Index k = u_cols.cols();
  if (v_cols.cols() != k || (k > 0 && (u_cols.rows() != dim || v_cols.rows() != dim)) || k > n) {
    throw Error(ErrorKind::Structural, "symplectic_extend: column blocks do not match the form");
  }
  const Matrix j = form_matrix(form);

  if (k > 0) {
    const double col_scale =
        std::max({1.0, u_cols.colwise().squaredNorm().maxCoeff(), v_cols.colwise().squaredNorm().maxCoeff()});
    const double err = std::max({(u_cols.transpose() * j * u_cols).norm(), (v_cols.transpose() * j * v_cols).norm(),
                                 (u_cols.transpose() * j * v_cols - Matrix::Identity(k, k)).norm()});
    if (err > cfg.residual_tol * col_scale) {
      throw Error(ErrorKind::NotSymplecticSet, "pairing residual " + std::to_string(err));
    }
  }

  Matrix us(dim, n);
  Matrix vs(dim, n);
  us.leftCols(k) = u_cols;
  vs.leftCols(k) = v_cols;

  // proj(c) = c - sum u_i w(c, v_i) + sum v_i w(c, u_i), w(a, b) = a^T J b,
  // removes the symplectic span of the pairs chosen so far.
  auto project = [&](Vector c, Eigen::Index count) {
    for (int pass = 0; pass < 2; ++pass) {
      const Vector jc = j.transpose() * c;
      const Vector along_v = vs.leftCols(count).transpose() * jc;  // w(c, v_i)
      const Vector along_u = us.leftCols(count).transpose() * jc;  // w(c, u_i)
      c -= us.leftCols(count) * along_v;
      c += vs.leftCols(count) * along_u;
    }
    return c;
  };

  // Projector applied to the standard basis, kept current by rank-2 updates.
  Matrix pi = Matrix::Identity(dim, dim);
  if (k > 0) {
    pi -= us.leftCols(k) * (vs.leftCols(k).transpose() * j.transpose());
    pi += vs.leftCols(k) * (us.leftCols(k).transpose() * j.transpose());
  }

  for (Eigen::Index slot = k; slot < n; ++slot) {
    Eigen::Index pick = -1;
    double best = 1e-6;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double nrm = pi.col(c).norm();
      if (nrm > best) {
        best = nrm;
        pick = c;
      }
    }
    if (pick < 0) throw Error(ErrorKind::ExtensionFailed, "no standard basis vector survives projection");

    Vector u = project(Vector::Unit(dim, pick), slot);
    u.normalize();
    const Vector partner = project(j.transpose() * u, slot);
    const double pairing = u.dot(j * partner);
    if (!(std::abs(pairing) > 1e-12)) {
      throw Error(ErrorKind::ExtensionFailed, "degenerate partner in symplectic Gram-Schmidt");
    }
    const Vector v = partner / pairing;
    us.col(slot) = u;
    vs.col(slot) = v;
    pi -= u * (v.transpose() * j.transpose());
    pi += v * (u.transpose() * j.transpose());
  }

  Matrix m(dim, dim);
  m.leftCols(n) = us;
  m.rightCols(n) = vs;
  return m;
}

Matrix symplectic_from_generator(const SymplecticForm& form, const Matrix& h) {
  if (h.rows() != form.dim() || h.cols() != form.dim()) {
    throw Error(ErrorKind::Structural, "symplectic_from_generator: generator has wrong dimension");
  }
  const Matrix hs = 0.5 * (h + h.transpose());
  const Matrix a = form_matrix(form) * hs;
  return a.exp();
}

Matrix random_symplectic(const SymplecticForm& form, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  const auto n = form.dim();
  Matrix g(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = normal(rng);
  Matrix h = g + g.transpose();
  const double target = unif(rng);
  h *= target / norm2(h);
  return symplectic_from_generator(form, h);
}

Matrix random_orthosymplectic(int modes, std::uint64_t seed) {
  if (modes < 1) throw Error(ErrorKind::Structural, "random_orthosymplectic: modes must be >= 1");
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  using CMatrix = Eigen::MatrixXcd;
  CMatrix g(modes, modes);
  for (int c = 0; c < modes; ++c)
    for (int r = 0; r < modes; ++r) g(r, c) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(modes, modes);
  const CMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < modes; ++i) {
    const auto diag = rr(i, i);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(i) *= diag / mag;
  }
  // Re-orthonormalize so the realified blocks satisfy the identities to
  // working precision.
  Eigen::HouseholderQR<CMatrix> qr2(q);
  CMatrix q2 = qr2.householderQ() * CMatrix::Identity(modes, modes);
  const CMatrix r2 = qr2.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < modes; ++i) {
    const auto diag = r2(i, i);
    const double mag = std::abs(diag);
    if (mag > 0) q2.col(i) *= diag / mag;
  }
  const Matrix a = q2.real();
  const Matrix b = q2.imag();
  Matrix l(2 * modes, 2 * modes);
  l.topLeftCorner(modes, modes) = a;
  l.topRightCorner(modes, modes) = b;
  l.bottomLeftCorner(modes, modes) = -b;
  l.bottomRightCorner(modes, modes) = a;
  return l;
}

GaussianUnitary GaussianUnitary::make(Vector u, Matrix l, SymplecticForm form, const ToleranceConfig& cfg) {
  if (u.size() != form.dim()) throw Error(ErrorKind::Structural, "Gaussian unitary displacement has wrong length");
  require_dims(l, form, "Gaussian unitary");
  if (!is_symplectic(l, form, cfg)) {
    throw Error(ErrorKind::NotSymplectic,
                "Gaussian unitary matrix residual " + std::to_string(symplectic_residual(l, form)));
  }
  return GaussianUnitary{std::move(u), std::move(l), std::move(form)};
}

GaussianUnitary GaussianUnitary::identity(const SymplecticForm& form) {
  return GaussianUnitary{Vector::Zero(form.dim()), Matrix::Identity(form.dim(), form.dim()), form};
}

GaussianUnitary gu_compose(const GaussianUnitary& g1, const GaussianUnitary& g2) {
  if (!(g1.form == g2.form)) throw Error(ErrorKind::Structural, "gu_compose: form mismatch");
  return GaussianUnitary{g1.u + g1.l * g2.u, g1.l * g2.l, g1.form};
}

GaussianUnitary gu_inverse(const GaussianUnitary& g, const ToleranceConfig& cfg) {
  Matrix inv = symplectic_inverse(g.l, g.form, cfg);
  Vector u = -(inv * g.u);
  return GaussianUnitary{std::move(u), std::move(inv), g.form};
}

}  // namespace gausschan
