#pragma once

#include <cstddef>
#include <vector>

#include "herop/matcore.hpp"

namespace herop {

// Ordered d-tuple of pairwise commuting n x n matrices. Commutation is verified
// on construction:
//   ||T_j T_k - T_k T_j||_F <= tol * (1 + ||T_j||_F) * (1 + ||T_k||_F).
class CommutingTuple {
 public:
  static constexpr double kDefaultCommutationTol = 1e-10;

  explicit CommutingTuple(std::vector<Matrix> operators,
                          double commutation_tol = kDefaultCommutationTol);

  // d copies of the n x n zero / identity matrix.
  static CommutingTuple zero(std::size_t d, Index n);
  static CommutingTuple scalar(const Vector& point, Index n);

  std::size_t d() const { return ops_.size(); }
  Index n() const { return ops_.front().rows(); }

  const Matrix& operator[](std::size_t j) const { return ops_[j]; }
  const std::vector<Matrix>& operators() const { return ops_; }

  // max_j ||T_j||_F
  double max_norm() const;

  // Largest normalized commutator, the quantity bounded at construction.
  double commutation_residual() const;

 private:
  std::vector<Matrix> ops_;
};

// q * T_j * q^{-1} for every j; q must be invertible.
CommutingTuple similarity(const CommutingTuple& t, const Matrix& q);
// q * T_j * q^* for unitary q.
CommutingTuple unitary_conjugate(const CommutingTuple& t, const Matrix& q);
CommutingTuple direct_sum(const CommutingTuple& a, const CommutingTuple& b);
CommutingTuple operator+(const CommutingTuple& a, const CommutingTuple& b);
CommutingTuple operator-(const CommutingTuple& a, const CommutingTuple& b);

// max_j ||a_j - b_j||_F
double max_distance(const CommutingTuple& a, const CommutingTuple& b);

Matrix block_diagonal(const Matrix& a, const Matrix& b);

}  // namespace herop
