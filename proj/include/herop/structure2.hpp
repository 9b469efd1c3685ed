#pragma once

#include <vector>

#include "herop/spectral.hpp"

namespace herop {

// One summand of the form
//   W_j = [[alpha_j I, V_j], [0, alpha_j I]]  on  M (+) M^perp,
// with alpha on the unit sphere and sum_j conj(alpha_j) V_j = 0.
struct TwoIsometryBlock {
  Vector alpha;
  Basis m_basis;              // M = intersection of ker N_l, ambient coordinates
  Basis mperp_basis;          // orthogonal complement of M inside H_alpha
  std::vector<Matrix> v;      // d maps M^perp -> M, dim(M) x dim(M^perp)
};

struct TwoIsometryStructure {
  std::size_t d = 0;
  Index n = 0;
  Basis unitary_basis;
  std::vector<Matrix> unitary_tuple;  // restriction to unitary_basis (may be 0x0)
  std::vector<TwoIsometryBlock> blocks;
  // Columns: unitary_basis, then for every block its M basis and M^perp basis.
  Matrix change_of_basis;
};

// Splits a 2-isometric tuple into its spherical unitary part and blocks of the
// form above. Throws NotTwoIsometric when the input fails the 2-isometry check
// and StructureViolation when a joint point leaves the sphere or two generalized
// eigenspaces are not orthogonal (both within tol).
TwoIsometryStructure classify_2_isometric(const CommutingTuple& t, double tol = kDefaultTol,
                                          const DecompositionOptions& options = {});

// Inverse of classify_2_isometric: conjugates the block-diagonal model back by
// change_of_basis.
CommutingTuple reconstruct(const TwoIsometryStructure& structure);

// Structural claims on a classification result: unit-sphere points, mutually
// orthogonal summands, sum conj(alpha_j) V_j = 0 and unitarity of change_of_basis.
VerificationReport check_structure(const TwoIsometryStructure& structure, double tol = 1e-8);

struct A2Classification {
  CommutingTuple s;
  CommutingTuple n;
  VerificationReport report;
};

// For A positive semidefinite and T (A,2)-isometric: T = S + N with S spherical
// A-isometric, sum_l S_l^* A N_l = 0 and A N_j N_l = 0.
A2Classification classify_A2(const CommutingTuple& t, const Matrix& a, double tol = kDefaultTol,
                             const DecompositionOptions& options = {});

// Hermitian within 1e-10 ||A||_F and no eigenvalue below -1e-10 ||A||_F.
bool is_positive_semidefinite(const Matrix& a);

}  // namespace herop
