#include "herop/structure2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herop/error.hpp"

namespace herop {

namespace {

// Round-trip contract for the model reconstruction, relative to 1 + max ||T_j||_F.
constexpr double kReconstructionTol = 1e-7;

Matrix hcat(const std::vector<const Matrix*>& parts, Index rows) {
  Index cols = 0;
  for (const auto* p : parts) cols += p->cols();
  Matrix m(rows, cols);
  Index c = 0;
  for (const auto* p : parts) {
    m.middleCols(c, p->cols()) = *p;
    c += p->cols();
  }
  return m;
}

Matrix model_block(Complex alpha, const Matrix& v) {
  const Index top = v.rows();
  const Index bottom = v.cols();
  Matrix w = alpha * identity(top + bottom);
  w.topRightCorner(top, bottom) = v;
  return w;
}

}  // namespace

bool is_positive_semidefinite(const Matrix& a) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  if (scale == 0.0) return true;
  if ((a - a.adjoint()).norm() > 1e-10 * scale) return false;
  const Matrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-10 * scale;
}

TwoIsometryStructure classify_2_isometric(const CommutingTuple& t, double tol,
                                          const DecompositionOptions& options) {
  const Matrix eye = identity(t.n());
  const CheckReport pre = check_A_m_isometric(t, eye, 2, tol);
  if (!pre.passed) {
    throw Error(ErrorKind::NotTwoIsometric,
                "2-isometry residual " + std::to_string(pre.residual) + " exceeds " + std::to_string(tol));
  }
  const JointSpectralDecomposition dec = joint_decomposition(t, options);
  const double scale = 1.0 + t.max_norm();
  const std::size_t d = t.d();

  for (std::size_t i = 0; i < dec.points.size(); ++i) {
    const double off = std::abs(dec.points[i].squaredNorm() - 1.0);
    if (off > tol) {
      throw Error(ErrorKind::StructureViolation,
                  "joint point " + std::to_string(i) + " is off the unit sphere by " + std::to_string(off));
    }
    for (std::size_t k = i + 1; k < dec.points.size(); ++k) {
      const double overlap = (dec.blocks[i].vectors.adjoint() * dec.blocks[k].vectors).norm();
      if (overlap > tol) {
        throw Error(ErrorKind::StructureViolation, "generalized eigenspaces " + std::to_string(i) + " and " +
                                                       std::to_string(k) + " are not orthogonal (overlap " +
                                                       std::to_string(overlap) + ")");
      }
    }
  }

  TwoIsometryStructure out;
  out.d = d;
  out.n = t.n();
  std::vector<Matrix> unitary_parts;
  for (std::size_t i = 0; i < dec.points.size(); ++i) {
    const Matrix& q = dec.blocks[i].vectors;
    const Vector& lambda = dec.points[i];
    const Index k = q.cols();
    std::vector<Matrix> local;
    double largest = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      local.push_back(q.adjoint() * t[j] * q - lambda(static_cast<Index>(j)) * identity(k));
      largest = std::max(largest, local.back().norm());
    }
    if (largest <= tol * scale) {
      unitary_parts.push_back(q);
      continue;
    }
    Matrix stacked(static_cast<Index>(d) * k, k);
    for (std::size_t j = 0; j < d; ++j) stacked.middleRows(static_cast<Index>(j) * k, k) = local[j];
    const OrthogonalSplit split = orthogonal_split(stacked, tol);
    TwoIsometryBlock block;
    block.alpha = lambda;
    block.m_basis = Basis{q * split.kernel.vectors};
    block.mperp_basis = Basis{q * split.corange.vectors};
    for (std::size_t j = 0; j < d; ++j) {
      const Matrix leak = split.corange.vectors.adjoint() * local[j];
      if (leak.norm() > kReconstructionTol * scale) {
        throw Error(ErrorKind::StructureViolation,
                    "nilpotent part does not map into the common kernel (leak " + std::to_string(leak.norm()) + ")");
      }
      block.v.push_back(split.kernel.vectors.adjoint() * local[j] * split.corange.vectors);
    }
    out.blocks.push_back(std::move(block));
  }

  std::vector<const Matrix*> unitary_ptrs;
  for (const auto& p : unitary_parts) unitary_ptrs.push_back(&p);
  out.unitary_basis = Basis{hcat(unitary_ptrs, t.n())};
  for (std::size_t j = 0; j < d; ++j) {
    out.unitary_tuple.push_back(out.unitary_basis.vectors.adjoint() * t[j] * out.unitary_basis.vectors);
  }
  std::vector<const Matrix*> all{&out.unitary_basis.vectors};
  for (const auto& b : out.blocks) {
    all.push_back(&b.m_basis.vectors);
    all.push_back(&b.mperp_basis.vectors);
  }
  out.change_of_basis = hcat(all, t.n());

  const double roundtrip = max_distance(reconstruct(out), t) / scale;
  if (roundtrip > kReconstructionTol) {
    throw Error(ErrorKind::StructureViolation,
                "model reconstruction misses the input by " + std::to_string(roundtrip));
  }
  return out;
}

CommutingTuple reconstruct(const TwoIsometryStructure& s) {
  const Index n = s.change_of_basis.rows();
  if (s.change_of_basis.cols() != n || s.unitary_tuple.size() != s.d) {
    throw Error(ErrorKind::StructureViolation, "structure shape is inconsistent");
  }
  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < s.d; ++j) {
    Matrix model = Matrix::Zero(n, n);
    Index at = s.unitary_tuple[j].rows();
    model.topLeftCorner(at, at) = s.unitary_tuple[j];
    for (const auto& b : s.blocks) {
      if (b.v.size() != s.d || b.v[j].rows() != b.m_basis.dim() || b.v[j].cols() != b.mperp_basis.dim()) {
        throw Error(ErrorKind::StructureViolation, "block map has the wrong shape");
      }
      const Index size = b.m_basis.dim() + b.mperp_basis.dim();
      model.block(at, at, size, size) = model_block(b.alpha(static_cast<Index>(j)), b.v[j]);
      at += size;
    }
    if (at != n) throw Error(ErrorKind::StructureViolation, "summand dimensions do not add up");
    ops.push_back(s.change_of_basis * model * s.change_of_basis.adjoint());
  }
  return CommutingTuple(std::move(ops), kSplitTol);
}

VerificationReport check_structure(const TwoIsometryStructure& s, double tol) {
  VerificationReport report;
  double sphere = 0.0;
  double constraint = 0.0;
  for (const auto& b : s.blocks) {
    sphere = std::max(sphere, std::abs(b.alpha.squaredNorm() - 1.0));
    Matrix sum = Matrix::Zero(b.m_basis.dim(), b.mperp_basis.dim());
    double vmax = 0.0;
    for (std::size_t j = 0; j < b.v.size(); ++j) {
      sum += std::conj(b.alpha(static_cast<Index>(j))) * b.v[j];
      vmax = std::max(vmax, b.v[j].norm());
    }
    constraint = std::max(constraint, sum.norm() / (1.0 + vmax));
  }
  // Joint eigenvalues of the unitary summand.
  if (s.unitary_basis.dim() > 0) {
    Matrix quad = -identity(s.unitary_basis.dim());
    for (const auto& u : s.unitary_tuple) quad += u.adjoint() * u;
    sphere = std::max(sphere, quad.norm());
  }
  const Index n = s.change_of_basis.cols();
  report.add("unit_sphere", sphere, tol, "| |alpha|^2 - 1 | and spherical unitary residual");
  report.add("block_constraint", constraint, tol, "||sum conj(alpha_j) V_j||_F / (1 + max ||V_j||_F)");
  report.add("orthogonal_summands", (s.change_of_basis.adjoint() * s.change_of_basis - identity(n)).norm(),
             tol, "||C^* C - I||_F");
  return report;
}

A2Classification classify_A2(const CommutingTuple& t, const Matrix& a, double tol,
                             const DecompositionOptions& options) {
  if (a.rows() != t.n() || a.cols() != t.n()) throw Error(ErrorKind::Dimension, "A does not match the tuple");
  if (!is_positive_semidefinite(a)) {
    throw Error(ErrorKind::ANotPositive, "A must be Hermitian positive semidefinite");
  }
  const CheckReport pre = check_A_m_isometric(t, a, 2, tol);
  if (!pre.passed) {
    throw Error(ErrorKind::NotA2Isometric,
                "(A,2)-isometry residual " + std::to_string(pre.residual) + " exceeds " + std::to_string(tol));
  }
  SNDecomposition split = split_SN(t, options);
  const double scale = a_scale(a);
  VerificationReport report;
  report.add("input_A2_isometry", pre);
  report.add("spherical_A_isometry", check_spherical_A_isometry(split.s, a, tol));
  Matrix cross = Matrix::Zero(t.n(), t.n());
  double nil = 0.0;
  for (std::size_t l = 0; l < t.d(); ++l) {
    cross += split.s[l].adjoint() * a * split.n[l];
    for (std::size_t j = 0; j < t.d(); ++j) nil = std::max(nil, (a * split.n[j] * split.n[l]).norm());
  }
  report.add("cross_term", cross.norm() / scale, tol, "||sum_l S_l^* A N_l||_F / (1 + ||A||_F)");
  report.add("A2_nilpotent", nil / scale, tol, "max ||A N_j N_l||_F / (1 + ||A||_F)");
  report.add("commutation", split.diagnostics.commutation, kSplitTol);
  report.add("reconstruction", split.diagnostics.reconstruction, kSplitTol);
  return {std::move(split.s), std::move(split.n), std::move(report)};
}

}  // namespace herop
