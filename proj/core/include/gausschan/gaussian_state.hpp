#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "gausschan/symplectic.hpp"

namespace gausschan {

/// Gaussian state as (mean, covariance) in the blocked real convention.
/// Admissibility (cov + iJ >= 0 within eig_tol) is checked on construction;
/// violating inputs are rejected, never projected.
class GaussianState {
 public:
  static GaussianState make(Vector mean, Matrix cov, SymplecticForm form, const ToleranceConfig& cfg = {});

  const Vector& mean() const noexcept { return mean_; }
  const Matrix& cov() const noexcept { return cov_; }
  const SymplecticForm& form() const noexcept { return form_; }

 private:
  GaussianState(Vector mean, Matrix cov, SymplecticForm form)
      : mean_(std::move(mean)), cov_(std::move(cov)), form_(std::move(form)) {}

  Vector mean_;
  Matrix cov_;
  SymplecticForm form_;
};

struct Admissibility {
  bool admissible = false;
  double min_eig = 0.0;
};

/// Membership of s in CM(d): min eigenvalue of s + iJ against -eig_tol * max(1, ||s||_2).
Admissibility is_admissible_cov(const Matrix& s, const SymplecticForm& form, const ToleranceConfig& cfg = {});

/// exp(-i m^T z - z^T S z / 2).
std::complex<double> char_fn(const GaussianState& st, const Vector& z);

/// Action of W(u) Gamma(L): mean (L^-1)^T m + 2 J u, covariance (L^-1)^T S L^-1.
GaussianState gu_action(const GaussianUnitary& g, const GaussianState& st, const ToleranceConfig& cfg = {});

GaussianState vacuum(const SymplecticForm& form);

/// Thermal state with per-mode values nu_i >= 1 (cov = diag(nu, nu) per block).
GaussianState thermal(const SymplecticForm& form, const std::vector<double>& nus);

/// Random admissible state: mean ~ N(0, 1), cov = L^T N L with L random
/// symplectic and N thermal with nu_i = 1 + |Exp(1)|.
GaussianState random_state(const SymplecticForm& form, std::uint64_t seed);

/// Same construction with every nu_i = 1 (pure state, on the CM boundary).
GaussianState random_pure_state(const SymplecticForm& form, std::uint64_t seed);

/// Joint state st1 (+) st2 on the concatenated form.
GaussianState tensor(const GaussianState& st1, const GaussianState& st2);

}  // namespace gausschan
