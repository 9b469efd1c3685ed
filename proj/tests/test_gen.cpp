#include <doctest.h>

#include "herop/error.hpp"
#include "herop/gen.hpp"
#include "herop/tuples.hpp"
#include "support.hpp"

using namespace herop;
using namespace herop::testing;

namespace {

bool identical(const CommutingTuple& a, const CommutingTuple& b) {
  if (a.d() != b.d() || a.n() != b.n()) return false;
  for (std::size_t j = 0; j < a.d(); ++j) {
    if (a[j] != b[j]) return false;
  }
  return true;
}

Vector diagonal_point(std::size_t d) {
  return Vector::Constant(static_cast<Index>(d), 1.0 / std::sqrt(static_cast<double>(d)));
}

// The three hypotheses of the (A,2) construction, each / (1 + ||A||_F).
struct Hypotheses {
  double spherical = 0.0;
  double nilpotent = 0.0;
  double cross = 0.0;
  double commute = 0.0;
};

Hypotheses hypotheses(const A2Instance& inst) {
  const Matrix& a = inst.a;
  const double scale = 1.0 + a.norm();
  const std::size_t d = inst.s.d();
  Hypotheses h;
  Matrix sph = -a;
  Matrix cross = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t j = 0; j < d; ++j) {
    sph += inst.s[j].adjoint() * a * inst.s[j];
    cross += inst.s[j].adjoint() * a * inst.n[j];
    for (std::size_t l = 0; l < d; ++l) {
      h.nilpotent = std::max(h.nilpotent, (a * inst.n[j] * inst.n[l]).norm() / scale);
      h.commute = std::max(h.commute, (inst.s[j] * inst.n[l] - inst.n[l] * inst.s[j]).norm());
    }
  }
  h.spherical = sph.norm() / scale;
  h.cross = cross.norm() / scale;
  return h;
}

}  // namespace

TEST_CASE("haar_unitary is unitary and sphere_point has unit norm") {
  Rng rng(1);
  for (Index n = 1; n <= 12; ++n) {
    const Matrix q = haar_unitary(n, rng);
    CHECK(max_abs(q.adjoint() * q - identity(n)) <= 1e-13);
    CHECK(std::abs(sphere_point(static_cast<std::size_t>(n), rng).norm() - 1.0) <= 1e-14);
  }
}

TEST_CASE("gen_spherical_unitary examples") {
  const CommutingTuple one = gen_spherical_unitary(1, 2, Seed{7});
  CHECK(check_A_m_isometric(one, identity(2), 1, 1e-10).passed);
  for (Complex z : spectrum(one[0])) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-10);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CommutingTuple t = gen_spherical_unitary(2, 3, Seed{seed});
    Matrix sum = Matrix::Zero(3, 3);
    for (std::size_t j = 0; j < 2; ++j) sum += t[j].adjoint() * t[j];
    CHECK(max_abs(sum - identity(3)) <= 1e-10);
    // Normal: T T^* = T^* T.
    for (std::size_t j = 0; j < 2; ++j) CHECK(max_abs(t[j] * t[j].adjoint() - t[j].adjoint() * t[j]) <= 1e-12);
  }
  CHECK(identical(gen_spherical_unitary(3, 4, Seed{5}), gen_spherical_unitary(3, 4, Seed{5})));
  CHECK_FALSE(identical(gen_spherical_unitary(3, 4, Seed{5}), gen_spherical_unitary(3, 4, Seed{6})));
}

TEST_CASE("make_block_example gives the exact two-by-two block") {
  const CommutingTuple w = make_block_example(Vector::Unit(2, 0), {zeros(1, 1), Matrix::Constant(1, 1, 1.0)});
  CHECK(max_abs(w[0] - identity(2)) == 0.0);
  CHECK(max_abs(w[1] - matrix({{0, 1}, {0, 0}})) == 0.0);
  CHECK(check_A_m_isometric(w, identity(2), 2).residual == 0.0);
  CHECK_THROWS_AS(make_block_example(Vector::Unit(2, 0), {Matrix::Constant(1, 1, 1.0), zeros(1, 1)}), Error);
  CHECK_THROWS_AS(make_block_example(Vector::Constant(2, 1.0), {zeros(1, 1), zeros(1, 1)}), Error);
}

TEST_CASE("gen_block_example examples") {
  // V = 0 gives the spherical unitary alpha I.
  const Vector alpha = diagonal_point(2);
  const CommutingTuple flat = gen_block_example(alpha, 2, 1, Seed{1}, 0.0);
  CHECK(check_A_m_isometric(flat, identity(3), 1).passed);
  CHECK(max_abs(flat[0] - alpha(0) * identity(3)) == 0.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CommutingTuple w = gen_block_example(alpha, 2, 2, Seed{seed});
    CHECK(check_A_m_isometric(w, identity(4), 2).passed);
    CHECK_FALSE(check_A_m_isometric(w, identity(4), 1).passed);
    CHECK(isometry_order(w, identity(4), 5) == 2u);
  }
}

TEST_CASE("gen_block_example preconditions") {
  CHECK_THROWS_AS(gen_block_example(Vector::Constant(2, 1.0), 1, 1, Seed{0}), Error);
  CHECK_THROWS_AS(gen_block_example(Vector::Unit(1, 0), 1, 1, Seed{0}), Error);
  CHECK_NOTHROW(gen_block_example(Vector::Unit(1, 0), 1, 1, Seed{0}, 0.0));
  CHECK_THROWS_AS(gen_block_example(Vector::Unit(2, 0), 0, 1, Seed{0}), Error);
}

TEST_CASE("strict 2-isometries: residual at m = 1 is large when V is") {
  TestRng rng(2);
  Rng point_rng(3);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 2, 4));
    const Index n = uniform_int(rng, 1, 3);
    const Index m = uniform_int(rng, 1, 3);
    const CommutingTuple w = gen_block_example(sphere_point(d, point_rng), n, m, Seed{seed});
    double v_norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) v_norm += w[j].topRightCorner(n, m).squaredNorm();
    v_norm = std::sqrt(v_norm);
    CHECK(check_A_m_isometric(w, identity(n + m), 2).residual <= 1e-9);
    if (v_norm >= 0.1) {
      const double scale = 1.0 + w.max_norm();
      CHECK(check_A_m_isometric(w, identity(n + m), 1).residual >= 1e-3 * scale);
    }
  }
}

TEST_CASE("gen_two_isometry is 2-isometric and deterministic") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CommutingTuple t = gen_two_isometry(3, 2, {{1, 2}, {2, 2}}, Seed{seed});
    CHECK(t.n() == 9);
    CHECK(check_A_m_isometric(t, identity(9), 2).passed);
  }
  CHECK(identical(gen_two_isometry(2, 1, {{1, 1}}, Seed{3}), gen_two_isometry(2, 1, {{1, 1}}, Seed{3})));
  CHECK_THROWS_AS(gen_two_isometry(2, 0, {}, Seed{0}), Error);
  CHECK_THROWS_AS(gen_two_isometry(1, 1, {{1, 1}}, Seed{0}), Error);
}

TEST_CASE("gen_A2_construction satisfies its hypotheses") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t d = 1 + seed % 4;
    const Index n = 2 + static_cast<Index>(seed % 5);
    const A2Instance inst = gen_A2_construction(d, n, Seed{seed});
    const Hypotheses h = hypotheses(inst);
    CHECK(h.spherical <= 1e-10);
    CHECK(h.nilpotent <= 1e-10);
    CHECK(h.cross <= 1e-10);
    CHECK(h.commute <= 1e-10 * (1.0 + inst.t.max_norm()) * (1.0 + inst.t.max_norm()));
    CHECK(max_distance(inst.s + inst.n, inst.t) <= 1e-12 * (1.0 + inst.t.max_norm()));
    CHECK(inst.n.max_norm() > 1e-3);
    CHECK(check_A_m_isometric(inst.t, inst.a, 2).passed);
    // A = P^* P is positive semidefinite with rank n or n - 1.
    Eigen::SelfAdjointEigenSolver<Matrix> es(inst.a);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * inst.a.norm());
    int rank = 0;
    for (Index i = 0; i < n; ++i) rank += es.eigenvalues()(i) > 1e-8 * inst.a.norm();
    CHECK((rank == n || rank == n - 1));
  }
}

TEST_CASE("d = 1 with rank-deficient A: (A,2)-isometric but not 2-isometric") {
  A2Options opts;
  opts.kernel_dim = 1;
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const A2Instance inst = gen_A2_construction(1, 4, Seed{seed}, opts);
    CHECK(check_A_m_isometric(inst.t, inst.a, 2).passed);
    if (!check_A_m_isometric(inst.t, identity(4), 2).passed) ++seen;
  }
  CHECK(seen >= 15);
}

TEST_CASE("zero nilpotent part gives an (A,1)-isometry") {
  A2Options opts;
  opts.zero_nilpotent = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const A2Instance inst = gen_A2_construction(2, 4, Seed{seed}, opts);
    CHECK(inst.n.max_norm() == 0.0);
    CHECK(check_A_m_isometric(inst.t, inst.a, 1).passed);
  }
}

TEST_CASE("gen_A2_construction gives up when only N = 0 is possible") {
  try {
    gen_A2_construction(1, 1, Seed{0});
    FAIL("expected GenerationFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GenerationFailed);
  }
  A2Options opts;
  opts.kernel_dim = 3;
  CHECK_THROWS_AS(gen_A2_construction(1, 2, Seed{0}, opts), Error);
}

TEST_CASE("gen_A2_construction is deterministic") {
  const A2Instance a = gen_A2_construction(3, 5, Seed{11});
  const A2Instance b = gen_A2_construction(3, 5, Seed{11});
  CHECK(identical(a.t, b.t));
  CHECK(a.a == b.a);
}

TEST_CASE("gen_jordan_isometry orders") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CommutingTuple one = gen_jordan_isometry({{1.0, 2}}, Seed{seed});
    CHECK(isometry_order(one, identity(2), 10) == 3u);
    // Similar to the Jordan block: single eigenvalue 1 and rank(T - I) = 1.
    CHECK(null_space(one[0] - identity(2), 1e-10).dim() == 1);

    const CommutingTuple flat = gen_jordan_isometry({{1.0, 1}, {Complex(0, 1), 1}}, Seed{seed});
    CHECK(isometry_order(flat, identity(2), 10) == 1u);

    const CommutingTuple mixed = gen_jordan_isometry({{1.0, 2}, {Complex(0, 1), 3}}, Seed{seed});
    CHECK(isometry_order(mixed, identity(5), 10) == 5u);
  }
  CHECK_THROWS_AS(gen_jordan_isometry({{2.0, 2}}, Seed{0}), Error);
  CHECK_THROWS_AS(gen_jordan_isometry({}, Seed{0}), Error);
}
