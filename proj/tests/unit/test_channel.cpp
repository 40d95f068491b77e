#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gausschan/channel.hpp"
#include "gausschan/dilation.hpp"
#include "gausschan/error.hpp"
#include "gausschan/interferometer.hpp"
#include "support/support.hpp"

using namespace gausschan;
using gausschan::test::max_abs;

namespace {

ChannelParams oracle(int d, std::uint64_t seed) { return induced_channel(random_dilation(d, 2 * d, seed)); }

Matrix swap_x(int d) {
  Matrix x = Matrix::Zero(2 * d, 2 * d);
  x.topRightCorner(d, d).setIdentity();
  x.bottomLeftCorner(d, d).setIdentity();
  return x;
}

double state_gap(const GaussianState& a, const GaussianState& b) {
  return std::max(max_abs(a.mean() - b.mean()), max_abs(a.cov() - b.cov()));
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("validity worked values") {
  const auto id = validity(ChannelParams::identity(1));
  CHECK(id.valid);
  CHECK(std::abs(std::min(id.min_eig_plus, id.min_eig_minus)) <= 1e-15);

  const auto ce = validity(ChannelParams{swap_x(1), Matrix::Identity(2, 2), Vector::Zero(2), SymplecticForm::single(1)});
  CHECK_FALSE(ce.valid);
  CHECK(std::min(ce.min_eig_plus, ce.min_eig_minus) == doctest::Approx(-1.0).epsilon(1e-12));

  for (double t : {0.2, std::numbers::pi / 4, 1.3}) {
    const auto v = validity(attenuator(1, t));
    CHECK(v.valid);
    CHECK(std::abs(std::min(v.min_eig_plus, v.min_eig_minus)) <= 1e-12);
  }
}

TEST_CASE("ChannelParams::make checks shapes and symmetry") {
  const auto f = SymplecticForm::single(1);
  CHECK_THROWS_AS(ChannelParams::make(Matrix::Identity(3, 3), Matrix::Zero(2, 2), Vector::Zero(2), f), Error);
  Matrix y = Matrix::Identity(2, 2);
  y(0, 1) = 1;
  CHECK_THROWS_AS(ChannelParams::make(Matrix::Identity(2, 2), y, Vector::Zero(2), f), Error);
}

TEST_CASE("transpose equivalence and positivity of Y for valid channels") {
  const ToleranceConfig cfg;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const int d = 1 + static_cast<int>(s % 3);
    ChannelParams ch = oracle(d, s);
    if (s % 2 == 1) {
      const Matrix g = test::random_matrix(2 * d, 2 * d, s);
      ch.x = test::random_matrix(2 * d, 2 * d, s + 1000);
      ch.y = g + g.transpose();
    }
    const auto v = validity(ch, cfg);
    CHECK(std::abs(v.min_eig_plus - v.min_eig_minus) <= cfg.eig_tol * (1.0 + norm2(ch.y)));
    if (v.valid) CHECK(v.y_min_eig >= -cfg.eig_tol * v.scale);
    if (s % 2 == 0) CHECK(v.valid);
  }
}

TEST_CASE("apply worked values") {
  const auto f = SymplecticForm::single(2);
  const auto st = random_state(f, 1);
  const auto same = apply(ChannelParams::identity(2), st);
  CHECK(same.mean() == st.mean());
  CHECK(same.cov() == st.cov());
  const auto out = apply(attenuator(2, 0.4), vacuum(f));
  CHECK(max_abs(out.mean()) == 0.0);
  CHECK(max_abs(out.cov() - Matrix::Identity(4, 4)) <= 1e-15);
  const Vector w = test::random_vector(4, 2);
  const auto disp = apply(ChannelParams{Matrix::Identity(4, 4), Matrix::Zero(4, 4), w, f}, vacuum(f));
  CHECK(disp.mean() == w);
  CHECK_THROWS_AS(apply(transpose_map_params(2), st), Error);
}

TEST_CASE("valid channels map admissible states to admissible states") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const int d = 1 + static_cast<int>(s % 3);
    const auto ch = oracle(d, s / 4);
    const auto out = apply(ch, random_state(ch.form, s));
    CHECK(is_admissible_cov(out.cov(), out.form()).admissible);
  }
}

TEST_CASE("dual_weyl") {
  const auto ch = oracle(2, 5);
  const auto zero = dual_weyl(ch, Vector::Zero(4));
  CHECK(zero.log_coeff_re == 0.0);
  CHECK(zero.coeff_phase == 0.0);
  CHECK(max_abs(zero.arg) == 0.0);
  const Vector z = test::random_vector(4, 6);
  const auto id = dual_weyl(ChannelParams::identity(2), z);
  CHECK(id.log_coeff_re == 0.0);
  CHECK(id.coeff_phase == 0.0);
  CHECK(id.arg == z);

  // tr(Psi(rho) W(z)) = coeff * tr(rho W(arg)).
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto c = oracle(1 + static_cast<int>(s % 3), 50 + s);
    const auto st = random_state(c.form, s);
    const Vector zz = 0.3 * test::random_vector(c.form.dim(), 900 + s);
    const auto dw = dual_weyl(c, zz);
    const auto lhs = char_fn(apply(c, st), zz);
    const auto rhs = std::exp(std::complex<double>(dw.log_coeff_re, dw.coeff_phase)) * char_fn(st, dw.arg);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(std::abs(lhs), 1e-300));
  }
}

TEST_CASE("compose") {
  const auto ch = oracle(2, 8);
  const auto left = compose(ChannelParams::identity(2), ch);
  CHECK(max_abs(left.x - ch.x) <= 1e-15);
  CHECK(max_abs(left.y - ch.y) <= 1e-15);
  CHECK(max_abs(left.w - ch.w) <= 1e-15);

  const double t1 = 0.3, t2 = 1.1;
  const auto aa = compose(attenuator(1, t1), attenuator(1, t2));
  const double c = std::cos(t1) * std::cos(t2);
  CHECK(max_abs(aa.x - c * Matrix::Identity(2, 2)) <= 1e-15);
  CHECK(max_abs(aa.y - (1 - c * c) * Matrix::Identity(2, 2)) <= 1e-15);

  for (std::uint64_t s = 0; s < 200; ++s) {
    const int d = 1 + static_cast<int>(s % 3);
    const auto a = oracle(d, 3 * s), b = oracle(d, 3 * s + 1), e = oracle(d, 3 * s + 2);
    const auto ab = compose(a, b);
    CHECK(validity(ab).valid);
    if (s % 5 == 0) {
      const auto l = compose(ab, e), r = compose(a, compose(b, e));
      CHECK(max_abs(l.x - r.x) <= 1e-9 * (1 + max_abs(l.x)));
      CHECK(max_abs(l.y - r.y) <= 1e-9 * (1 + max_abs(l.y)));
      CHECK(max_abs(l.w - r.w) <= 1e-9 * (1 + max_abs(l.w)));
      const auto st = random_state(a.form, s);
      CHECK(state_gap(apply(e, apply(b, apply(a, st))), apply(l, st)) <= 1e-9 * (1 + max_abs(apply(l, st).cov())));
    }
  }
}

TEST_CASE("fd0_member and fd_sufficient") {
  const auto f = SymplecticForm::single(1);
  CHECK_FALSE(fd0_member(swap_x(1), Matrix::Identity(2, 2), f));
  CHECK(fd0_member(random_symplectic(f, 1), Matrix::Zero(2, 2), f));
  const auto att = attenuator(1, 0.5);
  CHECK(fd0_member(att.x, att.y, f));
  CHECK(fd_sufficient(Matrix::Identity(2, 2), f));
  CHECK_FALSE(fd_sufficient(Matrix::Zero(2, 2), f));
  CHECK(fd_sufficient(2 * Matrix::Identity(2, 2), f));
}

TEST_CASE("fd_member_sample fixtures") {
  for (int d = 1; d <= 3; ++d) {
    const auto f = SymplecticForm::single(d);
    const auto ce = fd_member_sample(swap_x(d), Matrix::Identity(2 * d, 2 * d), f, 300, 1);
    CHECK(ce.verdict == FdVerdict::NotFalsified);
    CHECK(ce.samples == 300);
    CHECK(fd_member_sample(Matrix::Identity(2 * d, 2 * d), Matrix::Zero(2 * d, 2 * d), f, 100, 2).verdict ==
          FdVerdict::NotFalsified);
  }
  const auto f = SymplecticForm::single(1);
  const auto half = fd_member_sample(Matrix::Zero(2, 2), 0.5 * Matrix::Identity(2, 2), f, 50, 3);
  CHECK(half.verdict == FdVerdict::Falsified);
  REQUIRE(half.witness.has_value());
  CHECK(half.witness_index == std::size_t{0});
  CHECK(is_admissible_cov(*half.witness, f).admissible);
}

TEST_CASE("X = 2I, Y = 0 has no falsifying covariance") {
  // 4S + iJ = 4(S + iJ) - 3iJ; a scan over squeezing, rotation and temperature
  // confirms the sampler can never find a witness for this pair.
  const auto f = SymplecticForm::single(1);
  const Matrix x = 2 * Matrix::Identity(2, 2);
  double worst = 1e300;
  for (double nu : {1.0, 1.5, 10.0}) {
    for (double lr = -8; lr <= 8; lr += 0.25) {
      for (double phi = 0; phi < std::numbers::pi; phi += std::numbers::pi / 16) {
        const double r = std::exp(lr);
        Matrix rot(2, 2);
        rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
        const Matrix s = nu * rot * Matrix(Eigen::Vector2d(r, 1 / r).asDiagonal()) * rot.transpose();
        worst = std::min(worst, is_admissible_cov(x.transpose() * s * x, f).min_eig);
      }
    }
  }
  CHECK(worst >= 0.0);
  CHECK(fd_member_sample(x, Matrix::Zero(2, 2), f, 2000, 4).verdict == FdVerdict::NotFalsified);
}

TEST_CASE("F_d^0 members are never falsified") {
  for (int d = 1; d <= 2; ++d) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto ch = oracle(d, 300 + s);
      REQUIRE(fd0_member(ch.x, ch.y, ch.form));
      CHECK(fd_member_sample(ch.x, ch.y, ch.form, 100, s).verdict == FdVerdict::NotFalsified);
    }
  }
}

TEST_CASE("fd_member_sample does not depend on the worker count") {
  const auto f = SymplecticForm::single(2);
  const Matrix x = 1.3 * Matrix::Identity(4, 4);
  const Matrix y = 0.2 * Matrix::Identity(4, 4);
  const auto a = fd_member_sample(x, y, f, 400, 11, {}, 1);
  const auto b = fd_member_sample(x, y, f, 400, 11, {}, 4);
  CHECK(a.verdict == b.verdict);
  CHECK(a.witness_index == b.witness_index);
  if (a.witness && b.witness) CHECK(test::bitwise_equal(*a.witness, *b.witness));
}

TEST_CASE("env_mode_bound") {
  CHECK(env_mode_bound(ChannelParams::identity(3)) == 0);
  CHECK(env_mode_bound(ChannelParams::unitary(random_symplectic(SymplecticForm::single(2), 5))) == 0);
  for (double t : {0.1, 0.8, 1.5}) CHECK(env_mode_bound(attenuator(1, t)) == 2);
}

TEST_CASE("fd_counterexample") {
  for (int d = 1; d <= 3; ++d) {
    const auto rep = fd_counterexample(d);
    CHECK(rep.channel.x == swap_x(d));
    CHECK(rep.channel.y == Matrix::Identity(2 * d, 2 * d));
    CHECK(std::abs(rep.validity.min_eig_plus + 1.0) <= 1e-9);
    CHECK_FALSE(rep.validity.valid);
    CHECK_FALSE(rep.fd0_member);
    CHECK(rep.fd_sufficient);
    CHECK(fd_member_sample(rep.channel.x, rep.channel.y, rep.channel.form, 200, 9).verdict ==
          FdVerdict::NotFalsified);
  }
}

TEST_CASE("transpose map") {
  for (int d = 1; d <= 3; ++d) {
    const auto ch = transpose_map_params(d);
    const auto v = validity(ch);
    CHECK_FALSE(v.valid);
    CHECK(std::min(v.min_eig_minus, v.min_eig_plus) == doctest::Approx(-2.0).epsilon(1e-12));
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto st = random_state(ch.form, s);
      CHECK(is_admissible_cov(ch.x.transpose() * st.cov() * ch.x, ch.form).admissible);
    }
  }
}

}  // TEST_SUITE
