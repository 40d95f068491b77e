#include "gausschan/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gausschan/error.hpp"

namespace gausschan {

void ToleranceConfig::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(eig_tol) || !ok(residual_tol) || !ok(reg_eps)) {
    throw Error(ErrorKind::Structural, "tolerances must be finite and strictly positive");
  }
}

namespace {

void require_square_finite(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::Structural, std::string(what) + " must be square, got " +
                                           std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::Structural, std::string(what) + " has non-finite entries");
  }
}

}  // namespace

Matrix ingest_symmetric(const Matrix& a, const ToleranceConfig& cfg, const char* what) {
  require_square_finite(a, what);
  const double asym = (a - a.transpose()).norm();
  if (asym > cfg.residual_tol * std::max(1.0, a.norm())) {
    throw Error(ErrorKind::Structural, std::string(what) + " is not symmetric (||A - A^T||_F = " +
                                           std::to_string(asym) + ")");
  }
  return 0.5 * (a + a.transpose());
}

Matrix ingest_skew(const Matrix& a, const ToleranceConfig& cfg, const char* what) {
  require_square_finite(a, what);
  const double sym = (a + a.transpose()).norm();
  if (sym > cfg.residual_tol * std::max(1.0, a.norm())) {
    throw Error(ErrorKind::Structural, std::string(what) + " is not skew-symmetric (||A + A^T||_F = " +
                                           std::to_string(sym) + ")");
  }
  return 0.5 * (a - a.transpose());
}

HermitianPair::HermitianPair(const Matrix& re, const Matrix& im, const ToleranceConfig& cfg)
    : re_(ingest_symmetric(re, cfg, "Hermitian real part")),
      im_(ingest_skew(im, cfg, "Hermitian imaginary part")) {
  if (re_.rows() != im_.rows()) {
    throw Error(ErrorKind::Structural, "Hermitian pair parts have different dimensions");
  }
}

Matrix HermitianPair::real_embedding() const {
  const auto n = re_.rows();
  Matrix e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = re_;
  e.topRightCorner(n, n) = -im_;
  e.bottomLeftCorner(n, n) = im_;
  e.bottomRightCorner(n, n) = re_;
  return e;
}

HermitianPair HermitianPair::transposed() const {
  HermitianPair t;
  t.re_ = re_;
  t.im_ = -im_;
  return t;
}

double psd_min_eig(const HermitianPair& h, const ToleranceConfig&) {
  if (h.n() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.real_embedding(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double sym_min_eig(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double norm2(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix sqrt_psd(const Matrix& a, const ToleranceConfig& cfg) {
  const Matrix s = ingest_symmetric(a, cfg, "sqrt_psd input");
  if (s.rows() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  Vector lam = es.eigenvalues();
  const double scale = lam.cwiseAbs().maxCoeff();
  if (lam.minCoeff() < -cfg.eig_tol * scale) {
    throw Error(ErrorKind::NotPSD, "minimum eigenvalue " + std::to_string(lam.minCoeff()) +
                                       " below -eig_tol*||a||");
  }
  lam = lam.cwiseMax(0.0).cwiseSqrt();
  const Matrix& u = es.eigenvectors();
  Matrix root = u * lam.asDiagonal() * u.transpose();
  return 0.5 * (root + root.transpose());
}

Matrix SkewCanonicalForm::block_form() const {
  const auto m = d_vals.size();
  const auto n = 2 * m + zero_dim;
  Matrix b = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i, m + i) = d_vals(i);
    b(m + i, i) = -d_vals(i);
  }
  return b;
}

namespace {

// Removes the components along the orthonormal columns basis[0..count) twice
// ("twice is enough" re-orthogonalization).
Vector orthogonalize(Vector v, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) v -= b.dot(v) * b;
  }
  return v;
}

// First entry whose magnitude is non-negligible made positive.
void fix_sign(Vector& v) {
  const double cut = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

// Picks the next usable candidate: the first unused one whose component
// orthogonal to `basis` has norm >= 0.5, else the unused one with the largest
// such norm. Returns -1 if nothing with norm above 1e-6 remains. Candidates
// at or below that cut are retired: the basis only grows, so they stay dead.
Eigen::Index next_candidate(const Matrix& cands, std::vector<bool>& used,
                            const std::vector<Vector>& basis, Vector& out) {
  Eigen::Index best = -1;
  double best_norm = 1e-6;
  Vector best_vec;
  for (Eigen::Index j = 0; j < cands.cols(); ++j) {
    if (used[static_cast<std::size_t>(j)]) continue;
    Vector p = orthogonalize(cands.col(j), basis);
    const double nrm = p.norm();
    if (nrm <= 1e-6) {
      used[static_cast<std::size_t>(j)] = true;
      continue;
    }
    if (nrm >= 0.5) {
      out = p / nrm;
      return j;
    }
    if (nrm > best_norm) {
      best_norm = nrm;
      best = j;
      best_vec = p / nrm;
    }
  }
  if (best >= 0) out = best_vec;
  return best;
}

}  // namespace

SkewCanonicalForm skew_canonical(const Matrix& k_in, const ToleranceConfig& cfg) {
  const Matrix k = ingest_skew(k_in, cfg, "skew_canonical input");
  const Eigen::Index n = k.rows();
  const Eigen::Index m = n / 2;
  SkewCanonicalForm out;
  out.zero_dim = static_cast<int>(n % 2);
  out.d_vals = Vector::Zero(m);
  out.r = Matrix::Identity(n, n);
  if (n == 0) return out;

  // -k*k = k^T k is symmetric PSD; each nonzero eigenvalue sigma^2 of it has
  // even multiplicity and its eigenspace is invariant under k.
  Eigen::SelfAdjointEigenSolver<Matrix> es(k.transpose() * k);
  const Matrix cands = es.eigenvectors().rowwise().reverse();  // descending eigenvalues
  const double scale = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  const double null_cut = 1e-12 * std::max(scale, 1e-300);

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(n));
  std::vector<Vector> xs, ys;
  std::vector<double> ds;

  for (Eigen::Index pair = 0; pair < m; ++pair) {
    Vector x;
    const Eigen::Index jx = next_candidate(cands, used, basis, x);
    if (jx < 0) throw Error(ErrorKind::Structural, "skew_canonical: eigenbasis exhausted");
    used[static_cast<std::size_t>(jx)] = true;
    fix_sign(x);
    basis.push_back(x);

    Vector y = orthogonalize(-(k * x), basis);
    if (y.norm() > null_cut) {
      y.normalize();
    } else {
      const Eigen::Index jy = next_candidate(cands, used, basis, y);
      if (jy < 0) throw Error(ErrorKind::Structural, "skew_canonical: eigenbasis exhausted");
      used[static_cast<std::size_t>(jy)] = true;
    }
    double dval = x.dot(k * y);
    if (dval < 0) {
      y = -y;
      dval = -dval;
    }
    basis.push_back(y);
    xs.push_back(x);
    ys.push_back(y);
    ds.push_back(dval);
  }

  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ds[a] > ds[b]; });
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.r.col(i) = xs[src];
    out.r.col(m + i) = ys[src];
    out.d_vals(i) = ds[src];
  }
  if (out.zero_dim == 1) {
    Vector z;
    if (next_candidate(cands, used, basis, z) < 0) {
      throw Error(ErrorKind::Structural, "skew_canonical: eigenbasis exhausted");
    }
    fix_sign(z);
    out.r.col(n - 1) = z;
  }
  return out;
}

PinvRank pinv_rank_abs(const Matrix& a, double threshold) {
  PinvRank out;
  out.pinv = Matrix::Zero(a.cols(), a.rows());
  if (a.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) {
      out.pinv += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).transpose();
      ++out.rank;
    }
  }
  return out;
}

PinvRank pinv_rank(const Matrix& a, const ToleranceConfig& cfg) {
  if (a.size() == 0) return pinv_rank_abs(a, 0.0);
  if (!a.allFinite()) throw Error(ErrorKind::Structural, "pinv_rank input has non-finite entries");
  const double smax = norm2(a);
  if (smax == 0.0) return pinv_rank_abs(a, 0.0);
  return pinv_rank_abs(a, cfg.eig_tol * smax);
}

}  // namespace gausschan
