#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace herop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Orthonormal column basis of a subspace of C^ambient_dim. A zero-column
// matrix represents the trivial subspace.
struct Basis {
  Matrix vectors;

  Index ambient_dim() const { return vectors.rows(); }
  Index dim() const { return vectors.cols(); }
};

Matrix identity(Index n);
Matrix zeros(Index rows, Index cols);

// Row-major literal; tests and examples are written with small integer or
// complex entries.
Matrix matrix(std::initializer_list<std::initializer_list<Complex>> rows);
Matrix diag(std::initializer_list<Complex> entries);

// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);

double frobenius(const Matrix& m);

// Orthonormal basis of ker M. A singular value counts as zero when it is at most
// tol * max(1, ||M||_F).
Basis null_space(const Matrix& m, double tol);

// Splits C^cols into (ker M)^perp and ker M, both orthonormal, using the same
// threshold as null_space. Vectors within each part follow descending singular
// values.
struct OrthogonalSplit {
  Basis corange;
  Basis kernel;
};
OrthogonalSplit orthogonal_split(const Matrix& m, double tol);

// Eigenvalues with algebraic multiplicity (Hessenberg reduction and shifted QR).
std::vector<Complex> spectrum(const Matrix& m);

// M = unitary * upper * unitary^*, upper triangular.
struct SchurForm {
  Matrix unitary;
  Matrix upper;
};
SchurForm schur(const Matrix& m);

// Orthonormal basis of the invariant subspace of the Schur-factored matrix that
// belongs to the diagonal entries flagged in `selected`. The selected entries are
// moved to the leading block with unitary adjacent swaps.
Basis invariant_subspace(const SchurForm& form, const std::vector<bool>& selected);

struct Cluster {
  std::vector<std::size_t> members;  // indices into the input, ascending
  Vector representative;             // arithmetic mean of the members
};

// Single-linkage clustering: two points share a cluster iff they are joined by a
// chain of steps of Euclidean length <= tol. Clusters are ordered
// lexicographically by representative (re, then im, coordinate by coordinate).
std::vector<Cluster> cluster_points(std::span<const Vector> points, double tol);
std::vector<Cluster> cluster_points(std::span<const Complex> points, double tol);

// Lexicographic (re, im) per coordinate.
bool lex_less(const Vector& a, const Vector& b);

// Solves basis * X = target for square invertible `basis`. Throws SingularBasis
// when the smallest singular value is <= 1e-10 times the largest.
Matrix coordinates_in_basis(const Matrix& basis, const Matrix& target);

// Smallest and largest singular values.
std::pair<double, double> singular_value_range(const Matrix& m);

}  // namespace herop
