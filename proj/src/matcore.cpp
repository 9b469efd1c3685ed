#include "herop/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "herop/error.hpp"

namespace herop {

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix zeros(Index rows, Index cols) { return Matrix::Zero(rows, cols); }

Matrix matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = r == 0 ? Index{0} : static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != c) {
      throw Error(ErrorKind::Dimension, "ragged matrix literal");
    }
    Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix diag(std::initializer_list<Complex> entries) {
  const auto n = static_cast<Index>(entries.size());
  Matrix m = Matrix::Zero(n, n);
  Index i = 0;
  for (const auto& v : entries) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " has NaN or infinite entries");
  }
}

void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::Dimension, std::string(what) + " must be a non-empty square matrix, got " +
                                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double frobenius(const Matrix& m) { return m.norm(); }

OrthogonalSplit orthogonal_split(const Matrix& m, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "null space tolerance must be positive");
  require_finite(m, "null_space input");
  const Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) {
    return {Basis{Matrix(cols, 0)}, Basis{identity(cols)}};
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const double threshold = tol * std::max(1.0, frobenius(m));
  const auto& sv = svd.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > threshold) ++rank;
  const Matrix& v = svd.matrixV();
  return {Basis{v.leftCols(rank)}, Basis{v.rightCols(cols - rank)}};
}

Basis null_space(const Matrix& m, double tol) { return orthogonal_split(m, tol).kernel; }

std::vector<Complex> spectrum(const Matrix& m) {
  require_square(m, "spectrum input");
  require_finite(m, "spectrum input");
  Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

SchurForm schur(const Matrix& m) {
  require_square(m, "schur input");
  require_finite(m, "schur input");
  Eigen::ComplexSchur<Matrix> cs(m);
  if (cs.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "Schur iteration did not converge");
  }
  SchurForm form{cs.matrixU(), cs.matrixT()};
  // Eigen leaves rounding noise below the diagonal only in its internal
  // storage; make the triangular shape exact.
  form.upper.triangularView<Eigen::StrictlyLower>().setZero();
  return form;
}

namespace {

// Swaps diagonal entries k and k+1 of the upper triangular `r` by a unitary
// similarity, accumulating the rotation into `q`.
void swap_adjacent(Matrix& r, Matrix& q, Index k) {
  const Index n = r.rows();
  const Complex a = r(k, k);
  const Complex b = r(k, k + 1);
  const Complex c = r(k + 1, k + 1);
  Eigen::Matrix2cd g;
  const double nrm = std::hypot(std::abs(b), std::abs(c - a));
  if (nrm == 0.0) {
    g << 0.0, 1.0, 1.0, 0.0;
  } else {
    // First column is the eigenvector of the 2x2 block for eigenvalue c.
    const Complex g1 = b / nrm;
    const Complex g2 = (c - a) / nrm;
    g << g1, -std::conj(g2), g2, std::conj(g1);
  }
  r.middleCols(k, 2) = (r.middleCols(k, 2) * g).eval();
  r.block(k, 0, 2, n) = (g.adjoint() * r.block(k, 0, 2, n)).eval();
  q.middleCols(k, 2) = (q.middleCols(k, 2) * g).eval();
  r(k + 1, k) = 0.0;
  r(k, k) = c;
  r(k + 1, k + 1) = a;
}

}  // namespace

Basis invariant_subspace(const SchurForm& form, const std::vector<bool>& selected) {
  const Index n = form.upper.rows();
  if (static_cast<Index>(selected.size()) != n) {
    throw Error(ErrorKind::Dimension, "selection length must match Schur form size");
  }
  Matrix r = form.upper;
  Matrix q = form.unitary;
  std::vector<bool> sel = selected;
  Index front = 0;
  for (Index i = 0; i < n; ++i) {
    if (!sel[static_cast<std::size_t>(i)]) continue;
    for (Index k = i; k > front; --k) {
      swap_adjacent(r, q, k - 1);
      std::swap(sel[static_cast<std::size_t>(k - 1)], sel[static_cast<std::size_t>(k)]);
    }
    ++front;
  }
  return Basis{q.leftCols(front)};
}

bool lex_less(const Vector& a, const Vector& b) {
  const Index n = std::min(a.size(), b.size());
  for (Index k = 0; k < n; ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
  }
  return a.size() < b.size();
}

std::vector<Cluster> cluster_points(std::span<const Vector> points, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "cluster tolerance must be positive");
  const std::size_t count = points.size();
  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (points[i].size() != points[j].size()) {
        throw Error(ErrorKind::Dimension, "cluster points must share one dimension");
      }
      if ((points[i] - points[j]).norm() <= tol) {
        const auto ri = find(i);
        const auto rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }

  std::vector<Cluster> clusters;
  std::vector<std::size_t> slot(count, count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto root = find(i);
    if (slot[root] == count) {
      slot[root] = clusters.size();
      clusters.push_back({});
    }
    clusters[slot[root]].members.push_back(i);
  }
  for (auto& c : clusters) {
    // Sum in value order so the mean does not depend on input order.
    std::vector<std::size_t> order = c.members;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return lex_less(points[a], points[b]);
    });
    Vector sum = Vector::Zero(points[order.front()].size());
    for (auto i : order) sum += points[i];
    c.representative = sum / static_cast<double>(order.size());
  }
  std::stable_sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    return lex_less(a.representative, b.representative);
  });
  return clusters;
}

std::vector<Cluster> cluster_points(std::span<const Complex> points, double tol) {
  std::vector<Vector> lifted;
  lifted.reserve(points.size());
  for (const auto& z : points) {
    Vector v(1);
    v(0) = z;
    lifted.push_back(std::move(v));
  }
  return cluster_points(std::span<const Vector>(lifted), tol);
}

std::pair<double, double> singular_value_range(const Matrix& m) {
  if (m.size() == 0) return {0.0, 0.0};
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

Matrix coordinates_in_basis(const Matrix& basis, const Matrix& target) {
  require_square(basis, "basis");
  require_finite(basis, "basis");
  require_finite(target, "target");
  if (target.rows() != basis.rows()) {
    throw Error(ErrorKind::Dimension, "target rows must match basis size");
  }
  Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
    throw Error(ErrorKind::SingularBasis, "basis is singular at relative tolerance 1e-10");
  }
  Matrix x = svd.solve(target);
  // One step of refinement keeps the residual at rounding level for
  // moderately conditioned bases.
  x += svd.solve(target - basis * x);
  return x;
}

}  // namespace herop
