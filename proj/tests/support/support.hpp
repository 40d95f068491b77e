#pragma once

#include <cstdint>
#include <cstring>
#include <random>

#include "gausschan/numerics.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan::test {

inline Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(rng);
  return m;
}

inline Vector random_vector(Eigen::Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

inline Matrix random_psd(Eigen::Index n, std::uint64_t seed, Eigen::Index rank = -1) {
  const Matrix g = random_matrix(n, rank < 0 ? n : rank, seed);
  return g * g.transpose();
}

inline Matrix random_skew(Eigen::Index n, std::uint64_t seed) {
  const Matrix g = random_matrix(n, n, seed);
  return g - g.transpose();
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace gausschan::test
