#include "herop/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herop/error.hpp"

namespace herop {

// --- CommutingTuple ---------------------------------------------------------

CommutingTuple::CommutingTuple(std::vector<Matrix> operators, double commutation_tol)
    : ops_(std::move(operators)) {
  if (ops_.empty()) throw Error(ErrorKind::Dimension, "a tuple needs at least one operator");
  const Index n = ops_.front().rows();
  for (std::size_t j = 0; j < ops_.size(); ++j) {
    const auto& t = ops_[j];
    if (t.rows() != t.cols() || t.rows() != n || n == 0) {
      throw Error(ErrorKind::Dimension, "operator " + std::to_string(j) + " is " +
                                            std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                                            ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    require_finite(t, "operator " + std::to_string(j));
  }
  for (std::size_t j = 0; j < ops_.size(); ++j) {
    for (std::size_t k = j + 1; k < ops_.size(); ++k) {
      const double c = (ops_[j] * ops_[k] - ops_[k] * ops_[j]).norm();
      const double bound =
          commutation_tol * (1.0 + ops_[j].norm()) * (1.0 + ops_[k].norm());
      if (c > bound) {
        throw Error(ErrorKind::InvalidArgument,
                    "operators " + std::to_string(j) + " and " + std::to_string(k) +
                        " do not commute (commutator norm " + std::to_string(c) + ")");
      }
    }
  }
}

CommutingTuple CommutingTuple::zero(std::size_t d, Index n) {
  return CommutingTuple(std::vector<Matrix>(d, Matrix::Zero(n, n)));
}

CommutingTuple CommutingTuple::scalar(const Vector& point, Index n) {
  std::vector<Matrix> ops;
  for (Index j = 0; j < point.size(); ++j) ops.push_back(point(j) * identity(n));
  return CommutingTuple(std::move(ops));
}

double CommutingTuple::max_norm() const {
  double m = 0.0;
  for (const auto& t : ops_) m = std::max(m, t.norm());
  return m;
}

double CommutingTuple::commutation_residual() const {
  double r = 0.0;
  for (std::size_t j = 0; j < ops_.size(); ++j) {
    for (std::size_t k = j + 1; k < ops_.size(); ++k) {
      const double c = (ops_[j] * ops_[k] - ops_[k] * ops_[j]).norm();
      r = std::max(r, c / ((1.0 + ops_[j].norm()) * (1.0 + ops_[k].norm())));
    }
  }
  return r;
}

CommutingTuple similarity(const CommutingTuple& t, const Matrix& q) {
  const Matrix qinv = coordinates_in_basis(q, identity(q.rows()));
  std::vector<Matrix> ops;
  for (const auto& m : t.operators()) ops.push_back(q * m * qinv);
  return CommutingTuple(std::move(ops));
}

CommutingTuple unitary_conjugate(const CommutingTuple& t, const Matrix& q) {
  std::vector<Matrix> ops;
  for (const auto& m : t.operators()) ops.push_back(q * m * q.adjoint());
  return CommutingTuple(std::move(ops));
}

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

CommutingTuple direct_sum(const CommutingTuple& a, const CommutingTuple& b) {
  if (a.d() != b.d()) throw Error(ErrorKind::Dimension, "direct sum of tuples of different length");
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < a.d(); ++j) ops.push_back(block_diagonal(a[j], b[j]));
  return CommutingTuple(std::move(ops));
}

namespace {

void require_same_shape(const CommutingTuple& a, const CommutingTuple& b) {
  if (a.d() != b.d() || a.n() != b.n()) throw Error(ErrorKind::Dimension, "tuple shape mismatch");
}

}  // namespace

CommutingTuple operator+(const CommutingTuple& a, const CommutingTuple& b) {
  require_same_shape(a, b);
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < a.d(); ++j) ops.push_back(a[j] + b[j]);
  return CommutingTuple(std::move(ops));
}

CommutingTuple operator-(const CommutingTuple& a, const CommutingTuple& b) {
  require_same_shape(a, b);
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < a.d(); ++j) ops.push_back(a[j] - b[j]);
  return CommutingTuple(std::move(ops));
}

double max_distance(const CommutingTuple& a, const CommutingTuple& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t j = 0; j < a.d(); ++j) m = std::max(m, (a[j] - b[j]).norm());
  return m;
}

// --- checkers ----------------------------------------------------------------

const CheckReport& VerificationReport::at(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c.report;
  }
  throw Error(ErrorKind::InvalidArgument, "no check named " + std::string(name));
}

namespace {

void require_compatible(const CommutingTuple& t, const Matrix& a) {
  if (a.rows() != t.n() || a.cols() != t.n()) {
    throw Error(ErrorKind::Dimension, "A is " + std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()) + " but the tuple acts on C^" +
                                          std::to_string(t.n()));
  }
  require_finite(a, "A");
}

CheckReport make_report(double residual, double tol, std::string detail) {
  return {residual <= tol, residual, tol, std::move(detail)};
}

}  // namespace

double a_scale(const Matrix& a) { return 1.0 + a.norm(); }

CheckReport check_A_m_isometric(const CommutingTuple& t, const Matrix& a, unsigned m, double tol) {
  require_compatible(t, a);
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "isometry order must be positive");
  const double r = evaluate(m_isometry_polynomial(t.d(), m), a, t, t).norm() / a_scale(a);
  return make_report(r, tol, "(A," + std::to_string(m) + ")-isometry residual");
}

CheckReport check_spherical_A_isometry(const CommutingTuple& t, const Matrix& a, double tol) {
  require_compatible(t, a);
  Matrix s = -a;
  for (const auto& tj : t.operators()) s += tj.adjoint() * a * tj;
  return make_report(s.norm() / a_scale(a), tol, "spherical A-isometry residual");
}

CheckReport check_A_n_nilpotent(const CommutingTuple& nt, const Matrix& a, unsigned n, double tol) {
  require_compatible(nt, a);
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "nilpotency order must be positive");
  double r = 0.0;
  for (const auto& alpha : multi_indices_of_order(nt.d(), n)) {
    r = std::max(r, (a * tuple_power(nt, alpha)).norm());
  }
  return make_report(r / a_scale(a), tol, "(A," + std::to_string(n) + ")-nilpotency residual");
}

std::optional<unsigned> isometry_order(const CommutingTuple& t, const Matrix& a, unsigned m_max,
                                       double tol) {
  if (m_max == 0 || m_max > kMaxIsometryOrder) {
    throw Error(ErrorKind::InvalidArgument, "m_max must lie in [1, 25]");
  }
  for (unsigned m = 1; m <= m_max; ++m) {
    if (check_A_m_isometric(t, a, m, tol).passed) return m;
  }
  return std::nullopt;
}

std::optional<unsigned> nilpotency_order(const CommutingTuple& nt, const Matrix& a, double tol) {
  const auto n = static_cast<unsigned>(nt.n());
  for (unsigned k = 1; k <= n + 1; ++k) {
    if (check_A_n_nilpotent(nt, a, k, tol).passed) return k;
  }
  return std::nullopt;
}

CheckReport check_toral(const CommutingTuple& t, const Matrix& a, unsigned m, double tol) {
  require_compatible(t, a);
  double r = 0.0;
  for (const auto& p : toral_polynomials(t.d(), m)) r = std::max(r, evaluate(p, a, t, t).norm());
  return make_report(r / a_scale(a), tol, "toral (A," + std::to_string(m) + ")-isometry residual");
}

CheckReport check_isosymmetric(const CommutingTuple& t, unsigned m, unsigned n, double tol) {
  if (t.d() != 1) throw Error(ErrorKind::Dimension, "isosymmetry is defined for single operators");
  const Matrix a = identity(t.n());
  const double r = evaluate(isosymmetry_polynomial(m, n), a, t, t).norm() / a_scale(a);
  return make_report(r, tol,
                     "(" + std::to_string(m) + "," + std::to_string(n) + ")-isosymmetry residual");
}

}  // namespace herop
