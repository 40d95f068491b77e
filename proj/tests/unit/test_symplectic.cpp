#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "gausschan/error.hpp"
#include "gausschan/symplectic.hpp"
#include "support/support.hpp"

using namespace gausschan;
using gausschan::test::max_abs;

TEST_SUITE("symplectic") {

TEST_CASE("form_matrix") {
  CHECK(form_matrix(SymplecticForm::single(1)) == (Matrix(2, 2) << 0, 1, -1, 0).finished());
  Matrix j11 = Matrix::Zero(4, 4);
  j11(0, 1) = j11(2, 3) = 1;
  j11(1, 0) = j11(3, 2) = -1;
  CHECK(form_matrix(SymplecticForm({1, 1})) == j11);
  Matrix j2 = Matrix::Zero(4, 4);
  j2.topRightCorner(2, 2).setIdentity();
  j2.bottomLeftCorner(2, 2) = -Matrix::Identity(2, 2);
  CHECK(form_matrix(SymplecticForm::single(2)) == j2);
  CHECK_THROWS_AS(SymplecticForm({1, 0}), Error);
}

TEST_CASE("symplectic_residual") {
  const auto f = SymplecticForm::single(1);
  CHECK(symplectic_residual(Matrix::Identity(2, 2), f) == 0.0);
  CHECK(symplectic_residual(form_matrix(f), f) == 0.0);
  CHECK(symplectic_residual(2 * Matrix::Identity(2, 2), f) == doctest::Approx(3 * std::sqrt(2.0)));
}

TEST_CASE("symplectic_inverse") {
  const auto f = SymplecticForm::single(2);
  const Matrix j = form_matrix(f);
  CHECK(symplectic_inverse(Matrix::Identity(4, 4), f) == Matrix::Identity(4, 4));
  CHECK(symplectic_inverse(j, f) == Matrix(j.transpose()));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix l = random_symplectic(f, s);
    CHECK(max_abs(l * symplectic_inverse(l, f) - Matrix::Identity(4, 4)) <= 1e-8);
  }
  CHECK_THROWS_AS(symplectic_inverse(2 * Matrix::Identity(4, 4), f), Error);
}

TEST_CASE("symplectic matrices have unit determinant and symplectic transpose") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto f = SymplecticForm::single(1 + static_cast<int>(s % 4));
    const Matrix l = random_symplectic(f, s);
    const double res = symplectic_residual(l, f);
    REQUIRE(res <= ToleranceConfig{}.residual_tol * std::max(1.0, l.squaredNorm()));
    CHECK(std::abs(l.determinant() - 1.0) <= 1e-6);
    CHECK(symplectic_residual(l.transpose(), f) <= std::max(10 * res, 1e-13));
  }
}

TEST_CASE("orthosymplectic_blocks") {
  const auto f = SymplecticForm::single(2);
  const auto id = orthosymplectic_blocks(Matrix::Identity(4, 4));
  CHECK(id.a == Matrix::Identity(2, 2));
  CHECK(id.b == Matrix::Zero(2, 2));
  const auto jb = orthosymplectic_blocks(form_matrix(f));
  CHECK(jb.a == Matrix::Zero(2, 2));
  CHECK(jb.b == Matrix::Identity(2, 2));
  const double t = 0.3;
  Matrix rot(4, 4);
  rot << std::cos(t) * Matrix::Identity(2, 2), std::sin(t) * Matrix::Identity(2, 2),
      -std::sin(t) * Matrix::Identity(2, 2), std::cos(t) * Matrix::Identity(2, 2);
  CHECK_NOTHROW(orthosymplectic_blocks(rot));

  auto kind_of = [](const Matrix& m) {
    try {
      orthosymplectic_blocks(m);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Structural;
  };
  CHECK(kind_of(2 * Matrix::Identity(4, 4)) == ErrorKind::NotOrthogonal);
  const Matrix flip = Eigen::Vector4d(1, 1, -1, -1).asDiagonal();
  CHECK(kind_of(flip) == ErrorKind::NotSymplectic);
}

TEST_CASE("form_permutation [3] -> [1,2] is the transpose of the displayed block pattern") {
  // Row blocks of sizes 1,1,2,2 over column blocks of sizes 1,2,1,2.
  Matrix displayed = Matrix::Zero(6, 6);
  displayed(0, 0) = 1;
  displayed(1, 3) = 1;
  displayed(2, 1) = displayed(3, 2) = 1;
  displayed(4, 4) = displayed(5, 5) = 1;
  const Matrix p = form_permutation(SymplecticForm::single(3), SymplecticForm({1, 2}));
  CHECK(p == Matrix(displayed.transpose()));
  CHECK(Matrix(p.transpose() * form_matrix(SymplecticForm::single(3)) * p) == form_matrix(SymplecticForm({1, 2})));
}

TEST_CASE("form_permutation properties") {
  const std::vector<std::vector<int>> forms = {{3}, {1, 2}, {2, 1}, {1, 1, 1}, {2, 4}, {6}, {3, 3}};
  for (const auto& a : forms) {
    for (const auto& b : forms) {
      const SymplecticForm fa(a), fb(b);
      if (fa.modes() != fb.modes()) continue;
      const Matrix p = form_permutation(fa, fb);
      CHECK((p.array() == 0.0 || p.array() == 1.0).all());
      CHECK((p.colwise().sum().array() == 1.0).all());
      CHECK((p.rowwise().sum().array() == 1.0).all());
      CHECK(Matrix(p.transpose() * form_matrix(fa) * p) == form_matrix(fb));
      CHECK(Matrix(p * form_permutation(fb, fa)) == Matrix::Identity(p.rows(), p.rows()));
      const auto sigma = form_permutation_index(fa, fb);
      const Matrix m = test::random_matrix(p.rows(), p.rows(), 3);
      CHECK(test::bitwise_equal(permute_congruence(m, sigma), p.transpose() * m * p));
      CHECK(test::bitwise_equal(unpermute_congruence(permute_congruence(m, sigma), sigma), m));
    }
    CHECK(form_permutation(SymplecticForm(a), SymplecticForm(a)) ==
          Matrix::Identity(2 * SymplecticForm(a).modes(), 2 * SymplecticForm(a).modes()));
  }
}

TEST_CASE("qtheta") {
  // The middle product is taken in mode-interleaved coordinates, J_2 (+) J_2.
  const Matrix j4 = form_matrix(SymplecticForm({1, 1}));
  const Matrix q0 = qtheta(0.0);
  CHECK(q0 == (Matrix(2, 4) << 1, 0, 0, 0, 0, 1, 0, 0).finished());
  CHECK(max_abs(q0 * j4 * q0.transpose() - form_matrix(SymplecticForm::single(1))) <= 1e-15);
  const Matrix q4 = qtheta(std::numbers::pi / 4);
  CHECK(max_abs(q4 * j4 * q4.transpose()) <= 1e-15);
  for (double t : {0.1, 0.7, 1.2, 2.9}) {
    const Matrix q = qtheta(t);
    CHECK(max_abs(q * q.transpose() - Matrix::Identity(2, 2)) <= 1e-15);
    CHECK(std::abs((q * j4 * q.transpose())(0, 1) - std::cos(2 * t)) <= 1e-15);
  }
}

TEST_CASE("contraction_embed") {
  const double tol = ToleranceConfig{}.residual_tol;
  auto check_embed = [&](const Matrix& a) {
    const auto d = a.rows();
    const Matrix q = contraction_embed(a);
    REQUIRE(q.rows() == 2 * d);
    REQUIRE(q.cols() == 4 * d);
    Matrix target = Matrix::Zero(2 * d, 2 * d);
    target.topRightCorner(d, d) = a;
    target.bottomLeftCorner(d, d) = -a;
    const Matrix j = form_matrix(SymplecticForm::single(static_cast<int>(2 * d)));
    CHECK((q * q.transpose() - Matrix::Identity(2 * d, 2 * d)).norm() <= tol);
    CHECK((q * j * q.transpose() - target).norm() <= tol);
  };
  check_embed(Matrix::Identity(3, 3));
  check_embed(Matrix::Zero(2, 2));
  check_embed(0.5 * Matrix::Identity(1, 1));
  for (int d : {1, 2, 5}) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const Matrix p = test::random_psd(d, 7000 + s, s % 3 == 0 && d > 1 ? d - 1 : d);
      check_embed(p / (norm2(p) * (s % 4 == 0 ? 1.0 : 1.3)));
    }
  }
  CHECK_THROWS_AS(contraction_embed(2 * Matrix::Identity(2, 2)), Error);
  CHECK_THROWS_AS(contraction_embed(-Matrix::Identity(2, 2)), Error);
}

TEST_CASE("symplectic_extend") {
  const auto f = SymplecticForm::single(3);
  CHECK(symplectic_extend(Matrix(6, 0), Matrix(6, 0), f) == Matrix::Identity(6, 6));
  const Matrix full = random_symplectic(f, 4);
  CHECK(test::bitwise_equal(symplectic_extend(full.leftCols(3), full.rightCols(3), f), full));

  for (std::uint64_t s = 0; s < 100; ++s) {
    const int d = 1 + static_cast<int>(s % 5);
    const auto fd = SymplecticForm::single(d);
    const Matrix l = random_symplectic(fd, 100 + s);
    const int k = 1 + static_cast<int>(s % static_cast<std::uint64_t>(d));
    const Matrix u = l.leftCols(k);
    const Matrix v = l.middleCols(d, k);
    const Matrix m = symplectic_extend(u, v, fd);
    CHECK(is_symplectic(m, fd));
    CHECK(test::bitwise_equal(m.leftCols(k), u));
    CHECK(test::bitwise_equal(m.middleCols(d, k), v));
  }
  Matrix bad = Matrix::Zero(6, 1);
  bad(0) = 1;
  CHECK_THROWS_AS(symplectic_extend(bad, bad, f), Error);
}

TEST_CASE("random_symplectic and random_orthosymplectic") {
  for (int d : {1, 2, 4}) {
    const auto f = SymplecticForm::single(d);
    CHECK(random_symplectic(f, 9) == random_symplectic(f, 9));
    CHECK(random_symplectic(f, 9) != random_symplectic(f, 10));
    CHECK(random_orthosymplectic(d, 9) == random_orthosymplectic(d, 9));
    for (std::uint64_t s = 0; s < 25; ++s) {
      const Matrix l = random_symplectic(f, s);
      CHECK(is_symplectic(l, f));
      const Matrix o = random_orthosymplectic(d, s);
      CHECK(max_abs(o.transpose() * o - Matrix::Identity(2 * d, 2 * d)) <= 1e-12);
      CHECK(symplectic_residual(o, f) <= 1e-12);
    }
    const auto mf = SymplecticForm({d, 2 * d});
    CHECK(is_symplectic(random_symplectic(mf, 3), mf));
  }
  CHECK(symplectic_from_generator(SymplecticForm::single(2), Matrix::Zero(4, 4)) == Matrix::Identity(4, 4));
}

TEST_CASE("gaussian unitary composition and inverse") {
  const auto f = SymplecticForm::single(2);
  const auto id = GaussianUnitary::identity(f);
  const auto g1 = GaussianUnitary::make(test::random_vector(4, 1), random_symplectic(f, 1), f);
  const auto g2 = GaussianUnitary::make(test::random_vector(4, 2), random_symplectic(f, 2), f);
  const auto g3 = GaussianUnitary::make(test::random_vector(4, 3), random_symplectic(f, 3), f);
  const auto c = gu_compose(g1, id);
  CHECK(c.u == g1.u);
  CHECK(c.l == g1.l);

  const Vector u1 = test::random_vector(4, 11), u2 = test::random_vector(4, 12);
  const auto d = gu_compose(GaussianUnitary::make(u1, Matrix::Identity(4, 4), f),
                            GaussianUnitary::make(u2, Matrix::Identity(4, 4), f));
  CHECK(max_abs(d.u - (u1 + u2)) <= 1e-15);
  CHECK(d.l == Matrix::Identity(4, 4));

  const auto left = gu_compose(gu_compose(g1, g2), g3);
  const auto right = gu_compose(g1, gu_compose(g2, g3));
  CHECK(max_abs(left.u - right.u) <= 1e-9);
  CHECK(max_abs(left.l - right.l) <= 1e-9);

  const auto inv_id = gu_inverse(id);
  CHECK(inv_id.u == Vector::Zero(4));
  CHECK(inv_id.l == Matrix::Identity(4, 4));
  const auto disp_inv = gu_inverse(GaussianUnitary::make(u1, Matrix::Identity(4, 4), f));
  CHECK(disp_inv.u == Vector(-u1));
  for (const auto& g : {g1, g2, g3}) {
    const auto rt = gu_compose(g, gu_inverse(g));
    CHECK(max_abs(rt.u) <= 1e-9);
    CHECK(max_abs(rt.l - Matrix::Identity(4, 4)) <= 1e-9);
  }
  CHECK_THROWS_AS(GaussianUnitary::make(Vector::Zero(4), 2 * Matrix::Identity(4, 4), f), Error);
}

}  // TEST_SUITE
