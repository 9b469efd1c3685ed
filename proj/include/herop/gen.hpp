#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "herop/commuting_tuple.hpp"

namespace herop {

// Identical seed and parameters give bit-identical output.
struct Seed {
  std::uint64_t value = 0;
};

using Rng = std::mt19937_64;

// i.i.d. standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);
// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of
// diag(R) moved into Q.
Matrix haar_unitary(Index n, Rng& rng);
// Uniform point on the unit sphere of C^d.
Vector sphere_point(std::size_t d, Rng& rng);

// Q diag(lambda^(i)_j) Q^* with n points lambda^(i) uniform on the sphere.
CommutingTuple gen_spherical_unitary(std::size_t d, Index n, Seed seed);

// W_j = [[alpha_j I_n, V_j], [0, alpha_j I_m]] with explicit maps V_j (n x m).
// V must satisfy sum conj(alpha_j) V_j = 0 within 1e-12.
CommutingTuple make_block_example(const Vector& alpha, const std::vector<Matrix>& v);

// Random V_j with entries scaled by v_scale, projected onto
// sum conj(alpha_j) V_j = 0. d = 1 admits only V = 0, so v_scale must be 0 then.
CommutingTuple gen_block_example(const Vector& alpha, Index n, Index m, Seed seed,
                                 double v_scale = 1.0);

// Direct sum of a spherical unitary on C^unitary_dim and one random block per
// (n, m) shape, each at its own random sphere point, conjugated by a Haar
// unitary. 2-isometric by construction.
CommutingTuple gen_two_isometry(std::size_t d, Index unitary_dim,
                                const std::vector<std::pair<Index, Index>>& block_shapes, Seed seed);

struct A2Options {
  // Dimension of ker A; drawn from {0, 1} when absent.
  std::optional<Index> kernel_dim;
  // Force N = 0 (T = S is then (A,1)-isometric).
  bool zero_nilpotent = false;
};

// T = S + N with A = P^* P positive semidefinite, S spherical A-isometric,
// N (A,2)-nilpotent, S N = N S and sum_j S_j^* A N_j = 0.
struct A2Instance {
  CommutingTuple t;
  Matrix a;
  CommutingTuple s;
  CommutingTuple n;
};

// Throws GenerationFailed when 32 draws all force N = 0 although a nonzero N
// was requested (e.g. n = 1).
A2Instance gen_A2_construction(std::size_t d, Index n, Seed seed, const A2Options& options = {});

struct JordanSpec {
  Complex lambda;  // |lambda| = 1
  Index size;
};

// Single operator: direct sum of lambda I + (superdiagonal nilpotent) blocks,
// conjugated by a Haar unitary. Its strict isometry order is 2 * max(size) - 1.
CommutingTuple gen_jordan_isometry(const std::vector<JordanSpec>& blocks, Seed seed);

}  // namespace herop
