#include "herop/gen.hpp"

#include <cmath>
#include <string>

#include "herop/error.hpp"

namespace herop {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

Matrix haar_unitary(Index n, Rng& rng) {
  const Matrix z = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * identity(n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

Vector sphere_point(std::size_t d, Rng& rng) {
  Vector v = gaussian_matrix(static_cast<Index>(d), 1, rng).col(0);
  return v / v.norm();
}

CommutingTuple gen_spherical_unitary(std::size_t d, Index n, Seed seed) {
  if (d == 0 || n <= 0) throw Error(ErrorKind::InvalidArgument, "spherical unitary needs d, n >= 1");
  Rng rng(seed.value);
  std::vector<Vector> points;
  for (Index i = 0; i < n; ++i) points.push_back(sphere_point(d, rng));
  const Matrix q = haar_unitary(n, rng);
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < d; ++j) {
    Vector diagonal(n);
    for (Index i = 0; i < n; ++i) diagonal(i) = points[static_cast<std::size_t>(i)](static_cast<Index>(j));
    ops.push_back(q * diagonal.asDiagonal() * q.adjoint());
  }
  return CommutingTuple(std::move(ops));
}

namespace {

void require_on_sphere(const Vector& alpha, double tol) {
  if (alpha.size() == 0) throw Error(ErrorKind::InvalidArgument, "alpha must have at least one coordinate");
  if (std::abs(alpha.squaredNorm() - 1.0) > tol) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie on the unit sphere");
  }
}

}  // namespace

CommutingTuple make_block_example(const Vector& alpha, const std::vector<Matrix>& v) {
  require_on_sphere(alpha, 1e-12);
  const auto d = static_cast<std::size_t>(alpha.size());
  if (v.size() != d) throw Error(ErrorKind::Dimension, "need one V_j per coordinate of alpha");
  const Index top = v.front().rows();
  const Index bottom = v.front().cols();
  Matrix constraint = Matrix::Zero(top, bottom);
  for (std::size_t j = 0; j < d; ++j) {
    if (v[j].rows() != top || v[j].cols() != bottom) throw Error(ErrorKind::Dimension, "V_j shapes differ");
    constraint += std::conj(alpha(static_cast<Index>(j))) * v[j];
  }
  if (constraint.norm() > 1e-12 * (1.0 + v.front().norm())) {
    throw Error(ErrorKind::InvalidArgument, "V violates sum conj(alpha_j) V_j = 0");
  }
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < d; ++j) {
    Matrix w = alpha(static_cast<Index>(j)) * identity(top + bottom);
    w.topRightCorner(top, bottom) = v[j];
    ops.push_back(std::move(w));
  }
  return CommutingTuple(std::move(ops));
}

namespace {

// V_j <- V_j - alpha_j * sum_l conj(alpha_l) V_l, the orthogonal projection onto
// the constraint space when |alpha| = 1.
void project_constraint(const Vector& alpha, std::vector<Matrix>& v) {
  Matrix z = Matrix::Zero(v.front().rows(), v.front().cols());
  for (std::size_t l = 0; l < v.size(); ++l) z += std::conj(alpha(static_cast<Index>(l))) * v[l];
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= alpha(static_cast<Index>(j)) * z;
}

CommutingTuple block_from_rng(const Vector& alpha, Index n, Index m, Rng& rng, double v_scale) {
  std::vector<Matrix> v;
  for (Index j = 0; j < alpha.size(); ++j) v.push_back(v_scale * gaussian_matrix(n, m, rng));
  project_constraint(alpha, v);
  std::vector<Matrix> ops;
  for (Index j = 0; j < alpha.size(); ++j) {
    Matrix w = alpha(j) * identity(n + m);
    w.topRightCorner(n, m) = v[static_cast<std::size_t>(j)];
    ops.push_back(std::move(w));
  }
  return CommutingTuple(std::move(ops));
}

}  // namespace

CommutingTuple gen_block_example(const Vector& alpha, Index n, Index m, Seed seed, double v_scale) {
  require_on_sphere(alpha, 1e-12);
  if (n <= 0 || m <= 0) throw Error(ErrorKind::InvalidArgument, "block sizes must be positive");
  if (alpha.size() == 1 && v_scale != 0.0) {
    throw Error(ErrorKind::InvalidArgument, "d = 1 forces V = 0; pass v_scale = 0");
  }
  Rng rng(seed.value);
  return block_from_rng(alpha, n, m, rng, v_scale);
}

CommutingTuple gen_two_isometry(std::size_t d, Index unitary_dim,
                                const std::vector<std::pair<Index, Index>>& block_shapes, Seed seed) {
  if (d < 2 && !block_shapes.empty()) {
    throw Error(ErrorKind::InvalidArgument, "nontrivial blocks need d >= 2");
  }
  Rng rng(seed.value);
  std::optional<CommutingTuple> sum;
  if (unitary_dim > 0) sum.emplace(gen_spherical_unitary(d, unitary_dim, Seed{rng()}));
  for (const auto& [n, m] : block_shapes) {
    const Vector alpha = sphere_point(d, rng);
    CommutingTuple block = block_from_rng(alpha, n, m, rng, 1.0);
    sum = sum ? direct_sum(*sum, block) : block;
  }
  if (!sum) throw Error(ErrorKind::InvalidArgument, "empty direct sum");
  return unitary_conjugate(*sum, haar_unitary(sum->n(), rng));
}

namespace {

// Coordinates of one joint eigenvalue group in the frame where A = I (+) 0.
struct Group {
  Vector lambda;
  std::vector<Index> range_top;     // R1: range of N inside the A = I part
  std::vector<Index> range_kernel;  // R0: range of N inside ker A
  std::vector<Index> domain;        // D: coordinates N maps from
};

std::optional<A2Instance> try_a2(std::size_t d, Index n, Rng& rng, const A2Options& options) {
  std::uniform_int_distribution<int> coin(0, 1);
  const Index k0 = options.kernel_dim.value_or(static_cast<Index>(coin(rng)));
  if (k0 < 0 || k0 > n) throw Error(ErrorKind::InvalidArgument, "kernel dimension out of range");
  const Index r = n - k0;

  std::vector<Group> groups;
  if (r > 0) {
    std::uniform_int_distribution<Index> count(1, std::min<Index>(r, 3));
    const Index g = count(rng);
    std::vector<Index> sizes(static_cast<std::size_t>(g), 1);
    std::uniform_int_distribution<Index> which(0, g - 1);
    for (Index extra = r - g; extra > 0; --extra) ++sizes[static_cast<std::size_t>(which(rng))];
    Index next = 0;
    for (Index s : sizes) {
      Group grp;
      grp.lambda = sphere_point(d, rng);
      Index top = s >= 2 ? std::uniform_int_distribution<Index>(1, s - 1)(rng) : Index{coin(rng)};
      for (Index i = 0; i < s; ++i) (i < top ? grp.range_top : grp.domain).push_back(next + i);
      next += s;
      groups.push_back(std::move(grp));
    }
  }
  // Kernel coordinates join a unimodular group (as range or domain) or form
  // their own group at an arbitrary point.
  std::vector<std::pair<Index, Vector>> free_points;
  std::uniform_int_distribution<int> placement(0, 2);
  for (Index i = r; i < n; ++i) {
    const int p = groups.empty() ? 2 : placement(rng);
    if (p == 2) {
      free_points.emplace_back(i, 1.5 * gaussian_matrix(static_cast<Index>(d), 1, rng).col(0));
      continue;
    }
    auto& grp = groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
    (p == 0 ? grp.range_kernel : grp.domain).push_back(i);
  }

  std::vector<Matrix> s_prime(d, Matrix::Zero(n, n));
  std::vector<Matrix> n_prime(d, Matrix::Zero(n, n));
  for (const auto& grp : groups) {
    for (std::size_t j = 0; j < d; ++j) {
      for (auto idx : {&grp.range_top, &grp.range_kernel, &grp.domain}) {
        for (Index i : *idx) s_prime[j](i, i) = grp.lambda(static_cast<Index>(j));
      }
    }
    const auto top = static_cast<Index>(grp.range_top.size());
    const auto bottom = static_cast<Index>(grp.range_kernel.size());
    const auto cols = static_cast<Index>(grp.domain.size());
    if (cols == 0 || top + bottom == 0 || options.zero_nilpotent) continue;
    std::vector<Matrix> y;
    for (std::size_t j = 0; j < d; ++j) y.push_back(gaussian_matrix(top + bottom, cols, rng));
    if (top > 0) {
      std::vector<Matrix> upper;
      for (auto& m : y) upper.push_back(m.topRows(top));
      project_constraint(grp.lambda, upper);
      for (std::size_t j = 0; j < d; ++j) y[j].topRows(top) = upper[j];
    }
    for (std::size_t j = 0; j < d; ++j) {
      for (Index c = 0; c < cols; ++c) {
        for (Index i = 0; i < top + bottom; ++i) {
          const Index row = i < top ? grp.range_top[static_cast<std::size_t>(i)]
                                    : grp.range_kernel[static_cast<std::size_t>(i - top)];
          n_prime[j](row, grp.domain[static_cast<std::size_t>(c)]) = y[j](i, c);
        }
      }
    }
  }
  for (const auto& [i, point] : free_points) {
    for (std::size_t j = 0; j < d; ++j) s_prime[j](i, i) = point(static_cast<Index>(j));
  }

  double n_size = 0.0;
  for (const auto& m : n_prime) n_size = std::max(n_size, m.norm());
  if (!options.zero_nilpotent && n_size < 1e-3) return std::nullopt;

  Matrix a_prime = Matrix::Zero(n, n);
  for (Index i = 0; i < r; ++i) a_prime(i, i) = 1.0;

  // Similarity by a well-conditioned G: T = G^{-1} T' G, A = G^* A' G = P^* P.
  std::uniform_real_distribution<double> stretch(0.5, 2.0);
  Vector sv(n);
  for (Index i = 0; i < n; ++i) sv(i) = stretch(rng);
  const Matrix g = haar_unitary(n, rng) * sv.asDiagonal() * haar_unitary(n, rng);
  const Matrix g_inv = coordinates_in_basis(g, identity(n));

  std::vector<Matrix> s_ops, n_ops, t_ops;
  for (std::size_t j = 0; j < d; ++j) {
    s_ops.push_back(g_inv * s_prime[j] * g);
    n_ops.push_back(g_inv * n_prime[j] * g);
    t_ops.push_back(g_inv * (s_prime[j] + n_prime[j]) * g);
  }
  const Matrix p = a_prime * g;
  Matrix a = p.adjoint() * p;
  a = (a + a.adjoint()).eval() / 2.0;
  return A2Instance{CommutingTuple(std::move(t_ops)), std::move(a), CommutingTuple(std::move(s_ops)),
                    CommutingTuple(std::move(n_ops))};
}

}  // namespace

A2Instance gen_A2_construction(std::size_t d, Index n, Seed seed, const A2Options& options) {
  if (d == 0 || n <= 0) throw Error(ErrorKind::InvalidArgument, "a2 construction needs d, n >= 1");
  Rng rng(seed.value);
  for (int attempt = 0; attempt < 32; ++attempt) {
    if (auto inst = try_a2(d, n, rng, options)) return std::move(*inst);
  }
  throw Error(ErrorKind::GenerationFailed,
              "32 draws admitted only N = 0 for d = " + std::to_string(d) + ", n = " + std::to_string(n));
}

CommutingTuple gen_jordan_isometry(const std::vector<JordanSpec>& blocks, Seed seed) {
  if (blocks.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one Jordan block");
  Index n = 0;
  for (const auto& b : blocks) {
    if (b.size <= 0) throw Error(ErrorKind::InvalidArgument, "Jordan block sizes must be positive");
    if (std::abs(std::abs(b.lambda) - 1.0) > 1e-12) {
      throw Error(ErrorKind::InvalidArgument, "Jordan eigenvalues must be unimodular");
    }
    n += b.size;
  }
  Rng rng(seed.value);
  std::uniform_real_distribution<double> superdiag(0.5, 1.5);
  Matrix j = Matrix::Zero(n, n);
  Index at = 0;
  for (const auto& b : blocks) {
    for (Index i = 0; i < b.size; ++i) {
      j(at + i, at + i) = b.lambda;
      if (i + 1 < b.size) j(at + i, at + i + 1) = superdiag(rng);
    }
    at += b.size;
  }
  const Matrix q = haar_unitary(n, rng);
  return CommutingTuple({q * j * q.adjoint()});
}

}  // namespace herop
