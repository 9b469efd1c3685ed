#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "herop/commuting_tuple.hpp"
#include "herop/hereditary.hpp"
#include "herop/tuples.hpp"

namespace herop {

// Tolerance for the S + N split identities (reconstruction, S N = N S).
inline constexpr double kSplitTol = 1e-8;

struct DecompositionOptions {
  // Chain tolerance for grouping eigenvalues of each T_j. Defaults to
  // 1e-8 * (1 + max_j ||T_j||_F).
  std::optional<double> cluster_tol;
  // A defective eigenvalue splits into a ring of radius ~eps^(1/s) in floating
  // point; the pieces have nearly parallel invariant subspaces. While the smallest
  // singular value of the per-level direct-sum basis is below this floor, the two
  // closest clusters are merged.
  double conditioning_floor = 1e-6;
  // Merging never joins clusters farther apart than this. Defaults to
  // 1e-3 * (1 + max_j ||T_j||_F).
  std::optional<double> max_merge_gap;
};

double default_cluster_tol(const CommutingTuple& t);

// H = direct sum of H_lambda over the joint points lambda. Blocks are orthonormal
// bases of each H_lambda; projections are the (generally oblique) idempotents of
// the direct sum. Points are ordered lexicographically.
struct JointSpectralDecomposition {
  std::size_t d = 0;
  Index n = 0;
  std::vector<Vector> points;
  std::vector<Basis> blocks;
  std::vector<Matrix> projections;
  double cluster_tol_used = 0.0;
  std::size_t merges = 0;
};

JointSpectralDecomposition joint_decomposition(const CommutingTuple& t,
                                               const DecompositionOptions& options = {});
JointSpectralDecomposition joint_decomposition(const CommutingTuple& t, double cluster_tol);

struct SNDiagnostics {
  double scale = 1.0;           // 1 + max_j ||T_j||_F
  double commutation = 0.0;     // max_{j,k} ||S_j N_k - N_k S_j||_F / scale
  double reconstruction = 0.0;  // max_j ||S_j + N_j - T_j||_F / scale
  std::optional<unsigned> nilpotency_order;
};

// T = S + N with S_j = sum_lambda lambda_j E_lambda and N = T - S nilpotent.
struct SNDecomposition {
  CommutingTuple s;
  CommutingTuple n;
  JointSpectralDecomposition decomposition;
  SNDiagnostics diagnostics;
};

SNDecomposition split_SN(const CommutingTuple& t, const DecompositionOptions& options = {});

// Least k with max_{|alpha|=k} ||N^alpha||_F <= tol * (1 + max_j ||N_j||_F)^k, k <= n + 1.
std::optional<unsigned> numerical_nilpotency_order(const CommutingTuple& nt, double tol = kSplitTol);

struct TheoremVerification {
  VerificationReport report;
  SNDecomposition split;
};

// Requires T to be (A,m)-isometric (InputNotAmIsometry otherwise); splits T and
// checks that S is spherical A-isometric, N nilpotent and S, N commute.
TheoremVerification verify_decomposition_theorem(const CommutingTuple& t, const Matrix& a,
                                                 unsigned m, double tol = kDefaultTol,
                                                 const DecompositionOptions& options = {});

// Given f^power(A; X, Y) = 0, checks f(A; U, V) = 0 for the semisimple parts U, V
// of X, Y. PreconditionFailed if f^power does not annihilate.
VerificationReport verify_radical_inclusion(const HereditaryPolynomial& f, const Matrix& a,
                                            const CommutingTuple& x, const CommutingTuple& y,
                                            unsigned power, double tol = kDefaultTol,
                                            const DecompositionOptions& options = {});
VerificationReport verify_radical_inclusion(const HereditaryPolynomial& f, const Matrix& a,
                                            const CommutingTuple& t, unsigned power,
                                            double tol = kDefaultTol,
                                            const DecompositionOptions& options = {});

struct PairingOptions {
  unsigned power = 1;  // f^power must annihilate
  std::uint64_t seed = 0;
  DecompositionOptions decomposition;
};

// Samples `trials` pairs u in H_lambda (from X), v in K_omega (from Y) and checks
//   |f(conj(lambda), omega) <Av, u>| <= tol ||A||_F ||u|| ||v|| (1 + |f(conj(lambda), omega)|).
VerificationReport verify_pairing_vanishing(const HereditaryPolynomial& f, const Matrix& a,
                                            const CommutingTuple& x, const CommutingTuple& y,
                                            unsigned trials, double tol,
                                            const PairingOptions& options = {});

}  // namespace herop
