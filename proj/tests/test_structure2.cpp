#include <doctest.h>

#include "herop/error.hpp"
#include "herop/gen.hpp"
#include "herop/structure2.hpp"
#include "support.hpp"

using namespace herop;
using namespace herop::testing;

namespace {

const Matrix kShift = matrix({{0, 1}, {0, 0}});

CommutingTuple example_w() { return CommutingTuple({identity(2), kShift}); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("a spherical unitary has no blocks") {
  const CommutingTuple u = gen_spherical_unitary(2, 4, Seed{1});
  const TwoIsometryStructure s = classify_2_isometric(u);
  CHECK(s.blocks.empty());
  CHECK(s.unitary_basis.dim() == 4);
  CHECK(check_structure(s).passed());
  CHECK(max_distance(reconstruct(s), u) <= 1e-12);
}

TEST_CASE("the block example classifies as one block") {
  const TwoIsometryStructure s = classify_2_isometric(example_w());
  CHECK(s.unitary_basis.dim() == 0);
  REQUIRE(s.blocks.size() == 1);
  const TwoIsometryBlock& b = s.blocks[0];
  CHECK(std::abs(b.alpha(0) - 1.0) <= 1e-14);
  CHECK(std::abs(b.alpha(1)) <= 1e-14);
  REQUIRE(b.m_basis.dim() == 1);
  REQUIRE(b.mperp_basis.dim() == 1);
  // M = span e1 up to phase.
  CHECK(std::abs(std::abs(b.m_basis.vectors(0, 0)) - 1.0) <= 1e-14);
  CHECK(max_abs(b.v[0]) <= 1e-14);
  // V_2 = [1] once the phases of the M and M-perp vectors are removed.
  const Complex phase = b.m_basis.vectors(0, 0) * std::conj(b.mperp_basis.vectors(1, 0));
  CHECK(std::abs(b.v[1](0, 0) * phase - 1.0) <= 1e-14);
  CHECK(check_structure(s).passed());
}

TEST_CASE("a direct sum splits into its summands") {
  const CommutingTuple u = gen_spherical_unitary(2, 3, Seed{2});
  const CommutingTuple sum = direct_sum(u, example_w());
  const TwoIsometryStructure s = classify_2_isometric(sum);
  CHECK(s.unitary_basis.dim() == 3);
  REQUIRE(s.blocks.size() == 1);
  CHECK((s.blocks[0].alpha - Vector::Unit(2, 0)).norm() <= 1e-12);
  CHECK(max_distance(reconstruct(s), sum) <= 1e-12);
}

TEST_CASE("reconstruct of the standard-basis block gives W back") {
  TwoIsometryStructure s;
  s.d = 2;
  s.n = 2;
  s.unitary_basis = Basis{zeros(2, 0)};
  s.unitary_tuple = {zeros(0, 0), zeros(0, 0)};
  TwoIsometryBlock b;
  b.alpha = Vector::Unit(2, 0);
  b.m_basis = Basis{identity(2).col(0)};
  b.mperp_basis = Basis{identity(2).col(1)};
  b.v = {zeros(1, 1), Matrix::Constant(1, 1, 1.0)};
  s.blocks.push_back(b);
  s.change_of_basis = identity(2);
  CHECK(max_distance(reconstruct(s), example_w()) == 0.0);

  s.blocks.clear();
  s.unitary_basis = Basis{identity(2)};
  s.unitary_tuple = {diag({1, Complex(0, 1)}), zeros(2, 2)};
  CHECK(max_abs(reconstruct(s)[0] - diag({1, Complex(0, 1)})) == 0.0);
}

TEST_CASE("reconstruct rejects inconsistent shapes") {
  TwoIsometryStructure s = classify_2_isometric(example_w());
  s.blocks[0].v.pop_back();
  CHECK(kind_of([&] { reconstruct(s); }) == ErrorKind::StructureViolation);
}

TEST_CASE("classify_2_isometric rejects non 2-isometries") {
  const CommutingTuple j({matrix({{1, 1}, {0, 1}})});
  CHECK(kind_of([&] { classify_2_isometric(j); }) == ErrorKind::NotTwoIsometric);
  CHECK(kind_of([&] { classify_2_isometric(CommutingTuple({2.0 * identity(2)})); }) == ErrorKind::NotTwoIsometric);
}

TEST_CASE("round trip, sphere and constraint on random direct sums") {
  TestRng rng(3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t d = static_cast<std::size_t>(uniform_int(rng, 2, 4));
    std::vector<std::pair<Index, Index>> shapes;
    const int count = uniform_int(rng, 0, 3);
    for (int i = 0; i < count; ++i) shapes.emplace_back(uniform_int(rng, 1, 3), uniform_int(rng, 1, 3));
    const Index unitary_dim = uniform_int(rng, count == 0 ? 1 : 0, 3);
    const CommutingTuple t = gen_two_isometry(d, unitary_dim, shapes, Seed{seed});
    const TwoIsometryStructure s = classify_2_isometric(t);
    const double scale = 1.0 + t.max_norm();
    CHECK(s.blocks.size() == shapes.size());
    CHECK(s.unitary_basis.dim() == unitary_dim);
    CHECK(max_distance(reconstruct(s), t) <= 1e-7 * scale);
    CHECK(check_structure(s).passed());
    CHECK(check_A_m_isometric(reconstruct(s), identity(t.n()), 2).passed);
    for (const auto& b : s.blocks) {
      CHECK(std::abs(b.alpha.squaredNorm() - 1.0) <= 1e-8);
      Matrix sum = Matrix::Zero(b.m_basis.dim(), b.mperp_basis.dim());
      for (std::size_t j = 0; j < d; ++j) sum += std::conj(b.alpha(static_cast<Index>(j))) * b.v[j];
      CHECK(sum.norm() <= 1e-8 * scale);
    }
    // change_of_basis is unitary.
    CHECK(max_abs(s.change_of_basis.adjoint() * s.change_of_basis - identity(t.n())) <= 1e-9);
  }
}

TEST_CASE("check_structure flags a broken constraint") {
  TwoIsometryStructure s = classify_2_isometric(example_w());
  s.blocks[0].v[0](0, 0) = 1.0;
  const VerificationReport r = check_structure(s);
  CHECK_FALSE(r.at("block_constraint").passed);
  CHECK(r.at("unit_sphere").passed);
}

TEST_CASE("classify_A2 on the block example with A = I") {
  const A2Classification c = classify_A2(example_w(), identity(2));
  CHECK(c.report.passed());
  CHECK(max_abs(c.s[0] - identity(2)) <= 1e-14);
  CHECK(max_abs(c.s[1]) <= 1e-14);
  CHECK(max_abs(c.n[1] - kShift) <= 1e-14);
  CHECK(c.report.at("cross_term").residual == 0.0);
  CHECK(c.report.at("A2_nilpotent").residual == 0.0);
}

TEST_CASE("classify_A2 with A = 0 passes for any commuting tuple") {
  TestRng rng(4);
  const CommutingTuple t = random_commuting(2, 4, rng);
  const A2Classification c = classify_A2(t, zeros(4, 4));
  CHECK(c.report.passed());
}

TEST_CASE("classify_A2 on generated (A,2)-isometries") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t d = 1 + seed % 3;
    const A2Instance inst = gen_A2_construction(d, 3 + static_cast<Index>(seed % 4), Seed{seed});
    const A2Classification c = classify_A2(inst.t, inst.a);
    CHECK(c.report.passed());
    const double scale = 1.0 + inst.t.max_norm();
    CHECK(max_distance(c.s + c.n, inst.t) <= 1e-8 * scale);
    CHECK(check_A_n_nilpotent(c.n, inst.a, 2).passed);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) CHECK((c.s[j] * c.n[k] - c.n[k] * c.s[j]).norm() <= 1e-8 * scale);
    }
  }
}

TEST_CASE("classify_A2 errors") {
  CHECK(kind_of([] { classify_A2(example_w(), diag({1, -1})); }) == ErrorKind::ANotPositive);
  CHECK(kind_of([] { classify_A2(example_w(), matrix({{1, 1}, {0, 1}})); }) == ErrorKind::ANotPositive);
  CHECK(kind_of([] { classify_A2(CommutingTuple({2.0 * identity(2)}), identity(2)); }) == ErrorKind::NotA2Isometric);
  CHECK(kind_of([] { classify_A2(example_w(), identity(3)); }) == ErrorKind::Dimension);
}

TEST_CASE("is_positive_semidefinite") {
  CHECK(is_positive_semidefinite(zeros(2, 2)));
  CHECK(is_positive_semidefinite(diag({1, 0})));
  CHECK_FALSE(is_positive_semidefinite(diag({1, -1e-3})));
  CHECK_FALSE(is_positive_semidefinite(zeros(2, 3)));
  TestRng rng(5);
  const Matrix p = random_matrix(2, 4, rng);
  CHECK(is_positive_semidefinite(p.adjoint() * p));
}
