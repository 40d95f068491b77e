#include "gausschan/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "gausschan/error.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan {

std::string_view to_string(DecisionStatus s) noexcept {
  switch (s) {
    case DecisionStatus::Yes: return "yes";
    case DecisionStatus::No: return "no";
    case DecisionStatus::Undecided: return "undecided";
  }
  return "undecided";
}

std::string_view to_string(DecisionReason r) noexcept {
  switch (r) {
    case DecisionReason::TraceConditionFailed: return "trace_condition_failed";
    case DecisionReason::InvalidChannel: return "invalid_channel";
    case DecisionReason::QFound: return "q_found";
    case DecisionReason::SearchExhausted: return "search_exhausted";
  }
  return "search_exhausted";
}

namespace {

// Tangent directions at the identity: skew matrices, restricted to those
// commuting with J for the orthosymplectic subgroup.
std::vector<Matrix> tangent_basis(Eigen::Index n, QGroup group) {
  std::vector<Matrix> basis;
  if (group == QGroup::Orthogonal) {
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        Matrix e = Matrix::Zero(n, n);
        e(a, b) = 1.0;
        e(b, a) = -1.0;
        basis.push_back(std::move(e));
      }
    }
    return basis;
  }
  // [[alpha, beta], [-beta, alpha]], alpha skew, beta symmetric.
  const Eigen::Index d = n / 2;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) {
      Matrix e = Matrix::Zero(n, n);
      e(a, b) = e(d + a, d + b) = 1.0;
      e(b, a) = e(d + b, d + a) = -1.0;
      basis.push_back(std::move(e));
    }
  }
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a; b < d; ++b) {
      Matrix e = Matrix::Zero(n, n);
      e(a, d + b) = e(b, d + a) = 1.0;
      e(d + a, b) = e(d + b, a) = -1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

Matrix polar_factor(const Matrix& z) {
  Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix retract(const Matrix& z, QGroup group) {
  if (group == QGroup::Orthogonal) return polar_factor(z);
  const Eigen::Index d = z.rows() / 2;
  const Matrix j = form_matrix(SymplecticForm::single(static_cast<int>(d)));
  const Matrix commuting = 0.5 * (z - j * z * j);  // J z J^{-1} = -J z J
  return polar_factor(commuting);
}

Matrix random_group_element(Eigen::Index n, QGroup group, std::uint64_t seed) {
  if (group == QGroup::Orthosymplectic) return random_orthosymplectic(static_cast<int>(n / 2), seed);
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = normal(rng);
  return polar_factor(g);
}

struct Objective {
  const Matrix& a;  // X^T
  const Matrix& b;  // sqrt(Y)

  Matrix skew_part(const Matrix& q) const {
    const Matrix m = a * q * b;
    return m - m.transpose();
  }
  double value(const Matrix& q) const { return skew_part(q).norm(); }
};

Vector upper_entries(const Matrix& s) {
  const Eigen::Index n = s.rows();
  Vector v(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = r + 1; c < n; ++c) v(k++) = s(r, c);
  return v;
}

struct RestartOutcome {
  Matrix q;
  double residual;
  std::vector<double> trace;
};

RestartOutcome levenberg_marquardt(const Objective& obj, Matrix q, const std::vector<Matrix>& basis, QGroup group,
                                   int iters, double target, bool record) {
  RestartOutcome out{std::move(q), 0.0, {}};
  out.residual = obj.value(out.q);
  const auto p = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index n = out.q.rows();
  double mu = 1e-3 * std::max(1.0, out.residual);
  for (int it = 0; it < iters && out.residual > target && p > 0; ++it) {
    const Vector r = upper_entries(obj.skew_part(out.q));
    Matrix jac(r.size(), p);
    for (Eigen::Index c = 0; c < p; ++c) {
      const Matrix dm = obj.a * out.q * basis[static_cast<std::size_t>(c)] * obj.b;
      jac.col(c) = upper_entries(dm - dm.transpose());
    }
    const Matrix h = jac.transpose() * jac;
    const Vector grad = jac.transpose() * r;
    const Matrix lhs = h + mu * Matrix::Identity(p, p);
    const Vector delta = lhs.ldlt().solve(-grad);
    Matrix step = Matrix::Identity(n, n);
    for (Eigen::Index c = 0; c < p; ++c) step += delta(c) * basis[static_cast<std::size_t>(c)];
    const Matrix cand = retract(out.q * step, group);
    const double f = obj.value(cand);
    if (f < out.residual) {
      out.q = cand;
      out.residual = f;
      mu = std::max(mu / 3.0, 1e-15);
    } else {
      mu *= 4.0;
      if (mu > 1e16) {
        if (record) out.trace.push_back(out.residual);
        break;
      }
    }
    if (record) out.trace.push_back(out.residual);
  }
  return out;
}

}  // namespace

FindQResult find_q(const Matrix& x, const Matrix& sqrt_y, const FindQOptions& opts, const ToleranceConfig&) {
  if (x.rows() != x.cols() || sqrt_y.rows() != x.rows() || sqrt_y.cols() != x.cols() || x.rows() == 0) {
    throw Error(ErrorKind::Structural, "find_q: X and sqrt(Y) must be square of equal size");
  }
  const Eigen::Index n = x.rows();
  if (opts.group == QGroup::Orthosymplectic && n % 2 != 0) {
    throw Error(ErrorKind::Structural, "find_q: orthosymplectic search needs even dimension");
  }
  const Matrix a = x.transpose();
  const Objective obj{a, sqrt_y};
  const auto basis = tangent_basis(n, opts.group);
  const double target = std::max(opts.stop_residual, 0.0);

  FindQResult best;
  best.residual = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, opts.restarts);
  for (int r = 0; r < restarts; ++r) {
    Matrix start = r == 0 ? Matrix::Identity(n, n) : random_group_element(n, opts.group, derive_seed(opts.seed, r));
    auto outcome = levenberg_marquardt(obj, std::move(start), basis, opts.group, opts.iters, target, opts.record_trace);
    best.restarts_run = r + 1;
    if (outcome.residual < best.residual) {
      best.q = std::move(outcome.q);
      best.residual = outcome.residual;
      best.restart = r;
      best.trace = std::move(outcome.trace);
    }
    if (best.residual <= target) break;
  }
  return best;
}

bool trace_condition(const ChannelParams& ch, const ToleranceConfig& cfg) {
  const auto n = ch.form.dim();
  const double nx = norm2(ch.x);
  const double scale = 1.0 + norm2(ch.y) + nx * nx;
  const double defect = (ch.x.transpose() * ch.x + ch.y - Matrix::Identity(n, n)).norm();
  return defect <= cfg.residual_tol * scale && ch.w.norm() <= cfg.residual_tol;
}

DilationSpec interferometer_dilation(const Matrix& l_inv) {
  if (l_inv.rows() != l_inv.cols() || l_inv.rows() % 4 != 0 || l_inv.rows() == 0) {
    throw Error(ErrorKind::Structural, "interferometer dilation must be 4d x 4d");
  }
  const int d = static_cast<int>(l_inv.rows() / 4);
  return DilationSpec::make(l_inv, Vector::Zero(l_inv.rows()), d, d);
}

InterferometerDecision decide(const ChannelParams& ch, const DecideOptions& opts, const ToleranceConfig& cfg) {
  InterferometerDecision out;
  if (!validity(ch, cfg).valid) {
    out.status = DecisionStatus::No;
    out.reason = DecisionReason::InvalidChannel;
    return out;
  }
  if (!trace_condition(ch, cfg)) {
    out.status = DecisionStatus::No;
    out.reason = DecisionReason::TraceConditionFailed;
    return out;
  }
  const Matrix sqrt_y = sqrt_psd(ch.y, cfg);
  const auto found = find_q(ch.x, sqrt_y, opts.search, cfg);
  out.symmetry_residual = found.residual;
  out.restarts_run = found.restarts_run;
  out.status = DecisionStatus::Undecided;
  out.reason = DecisionReason::SearchExhausted;
  if (!(found.residual <= cfg.residual_tol)) return out;

  const Eigen::Index n = ch.form.dim();
  const Matrix b = found.q * sqrt_y;
  Matrix l_inv(2 * n, 2 * n);
  l_inv << ch.x, b, -b, ch.x;

  // Every certificate of a positive answer is re-checked before reporting yes.
  const double orth = (found.q.transpose() * found.q - Matrix::Identity(n, n)).norm();
  const Matrix xtb = ch.x.transpose() * b;
  const double sym = (xtb - xtb.transpose()).norm();
  const double gram = (b.transpose() * b - ch.y).norm();
  if (orth > cfg.residual_tol || sym > cfg.residual_tol || gram > cfg.residual_tol) return out;
  try {
    orthosymplectic_blocks(l_inv, cfg);
    const auto dil = interferometer_dilation(l_inv);
    if (symplectic_residual(dil.g, dil.form()) > cfg.residual_tol) return out;
    const auto induced = induced_channel(dil);
    out.induced_deviation = std::max({(induced.x - ch.x).cwiseAbs().maxCoeff(),
                                      (induced.y - ch.y).cwiseAbs().maxCoeff(),
                                      (induced.w - ch.w).cwiseAbs().maxCoeff()});
  } catch (const Error&) {
    return out;
  }
  out.status = DecisionStatus::Yes;
  out.reason = DecisionReason::QFound;
  out.q = found.q;
  out.b = b;
  out.l_inv = std::move(l_inv);
  return out;
}

ChannelParams attenuator(int d, double theta) {
  if (d < 1) throw Error(ErrorKind::Structural, "attenuator: d must be >= 1");
  const auto form = SymplecticForm::single(d);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return ChannelParams{c * Matrix::Identity(2 * d, 2 * d), s * s * Matrix::Identity(2 * d, 2 * d),
                       Vector::Zero(2 * d), form};
}

DilationSpec random_passive_dilation(int d, std::uint64_t seed) {
  const Matrix r = random_orthosymplectic(2 * d, seed);
  const auto sigma = form_permutation_index(SymplecticForm::single(2 * d), SymplecticForm({d, d}));
  return DilationSpec::make(permute_congruence(r, sigma), Vector::Zero(4 * d), d, d);
}

}  // namespace gausschan
