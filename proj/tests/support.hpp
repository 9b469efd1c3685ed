#pragma once

// Independent oracles and random inputs shared by the test binaries. Nothing here
// calls the polynomial machinery: powers and sums are formed with plain loops.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "herop/commuting_tuple.hpp"

namespace herop::testing {

using TestRng = std::mt19937_64;

inline Matrix random_matrix(Index rows, Index cols, TestRng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = scale * Complex(normal(rng), normal(rng));
  }
  return m;
}

inline Matrix random_unitary(Index n, TestRng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline int uniform_int(TestRng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(TestRng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Commuting tuple T_j = a_j I + b_j B + c_j B^2 for one random B with ||B||_2 <= 1.
inline CommutingTuple random_commuting(std::size_t d, Index n, TestRng& rng) {
  Matrix b = random_matrix(n, n, rng);
  b /= b.norm();
  const Matrix b2 = b * b;
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < d; ++j) {
    const Matrix c = random_matrix(3, 1, rng, 0.5);
    ops.push_back(c(0) * Matrix::Identity(n, n) + c(1) * b + c(2) * b2);
  }
  return CommutingTuple(std::move(ops));
}

inline Matrix naive_power(const Matrix& m, unsigned k) {
  Matrix r = Matrix::Identity(m.rows(), m.cols());
  for (unsigned i = 0; i < k; ++i) r = r * m;
  return r;
}

// T^alpha by repeated multiplication.
inline Matrix naive_tuple_power(const std::vector<Matrix>& t, const std::vector<unsigned>& alpha) {
  Matrix r = Matrix::Identity(t.front().rows(), t.front().cols());
  for (std::size_t j = 0; j < t.size(); ++j) r = r * naive_power(t[j], alpha[j]);
  return r;
}

inline double binomial(unsigned m, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

inline double factorial(unsigned k) {
  double r = 1.0;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

// Visits every alpha of length d with |alpha| = k.
inline void for_each_index(std::size_t d, unsigned k, const std::function<void(const std::vector<unsigned>&)>& fn) {
  std::vector<unsigned> alpha(d, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t j, unsigned left) {
    if (j + 1 == d) {
      alpha[j] = left;
      fn(alpha);
      return;
    }
    for (unsigned a = 0; a <= left; ++a) {
      alpha[j] = a;
      rec(j + 1, left - a);
    }
  };
  rec(0, k);
}

// sum_{k=0}^m (-1)^{m-k} C(m,k) sum_{|alpha|=k} k!/alpha! (T^alpha)^* A T^alpha
inline Matrix multinomial_isometry_sum(const std::vector<Matrix>& t, const Matrix& a, unsigned m) {
  Matrix sum = Matrix::Zero(a.rows(), a.cols());
  for (unsigned k = 0; k <= m; ++k) {
    const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
    for_each_index(t.size(), k, [&](const std::vector<unsigned>& alpha) {
      double weight = factorial(k);
      for (unsigned a_j : alpha) weight /= factorial(a_j);
      const Matrix p = naive_tuple_power(t, alpha);
      sum += sign * binomial(m, k) * weight * p.adjoint() * a * p;
    });
  }
  return sum;
}

// d = 1: sum_k (-1)^{m-k} C(m,k) T^{*k} T^k.
inline Matrix binomial_isometry_sum(const Matrix& t, unsigned m) {
  Matrix sum = Matrix::Zero(t.rows(), t.cols());
  Matrix p = Matrix::Identity(t.rows(), t.cols());
  for (unsigned k = 0; k <= m; ++k) {
    const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(m, k) * p.adjoint() * p;
    p = p * t;
  }
  return sum;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace herop::testing
