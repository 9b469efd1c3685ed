#include "herop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "herop/error.hpp"

namespace herop {

double default_cluster_tol(const CommutingTuple& t) { return 1e-8 * (1.0 + t.max_norm()); }

namespace {

struct LevelCluster {
  std::vector<std::size_t> members;  // positions on the Schur diagonal
  Basis basis;                       // block coordinates
};

Basis cluster_basis(const SchurForm& form, const std::vector<std::size_t>& members) {
  std::vector<bool> sel(static_cast<std::size_t>(form.upper.rows()), false);
  for (auto i : members) sel[i] = true;
  return invariant_subspace(form, sel);
}

double cluster_gap(const std::vector<Complex>& eig, const LevelCluster& a, const LevelCluster& b) {
  double g = std::numeric_limits<double>::infinity();
  for (auto i : a.members) {
    for (auto j : b.members) g = std::min(g, std::abs(eig[i] - eig[j]));
  }
  return g;
}

class Decomposer {
 public:
  Decomposer(const CommutingTuple& t, double cluster_tol, double floor, double max_gap)
      : t_(t), cluster_tol_(cluster_tol), floor_(floor), max_gap_(max_gap) {}

  void run(std::size_t level, const Matrix& basis) {
    if (level == t_.d()) {
      leaves.push_back(basis);
      return;
    }
    const Matrix restricted = basis.adjoint() * t_[level] * basis;
    const SchurForm form = schur(restricted);
    std::vector<Complex> eig(static_cast<std::size_t>(restricted.rows()));
    for (std::size_t i = 0; i < eig.size(); ++i) eig[i] = form.upper(static_cast<Index>(i), static_cast<Index>(i));

    std::vector<LevelCluster> clusters;
    for (auto& c : cluster_points(std::span<const Complex>(eig), cluster_tol_)) {
      clusters.push_back({c.members, cluster_basis(form, c.members)});
    }

    while (clusters.size() > 1) {
      Matrix assembled(restricted.rows(), restricted.rows());
      Index col = 0;
      for (const auto& c : clusters) {
        assembled.middleCols(col, c.basis.dim()) = c.basis.vectors;
        col += c.basis.dim();
      }
      if (singular_value_range(assembled).first >= floor_) break;

      std::size_t ba = 0, bb = 1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (std::size_t j = i + 1; j < clusters.size(); ++j) {
          const double g = cluster_gap(eig, clusters[i], clusters[j]);
          if (g < best) {
            best = g;
            ba = i;
            bb = j;
          }
        }
      }
      if (best > max_gap_) {
        throw Error(ErrorKind::IllConditionedDecomposition,
                    "generalized eigenspaces of operator " + std::to_string(level) +
                        " are nearly dependent but the closest clusters are " + std::to_string(best) +
                        " apart; increase the cluster tolerance or the merge gap");
      }
      auto& keep = clusters[ba];
      keep.members.insert(keep.members.end(), clusters[bb].members.begin(), clusters[bb].members.end());
      std::sort(keep.members.begin(), keep.members.end());
      keep.basis = cluster_basis(form, keep.members);
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
      ++merges;
    }

    for (const auto& c : clusters) run(level + 1, basis * c.basis.vectors);
  }

  std::vector<Matrix> leaves;
  std::size_t merges = 0;

 private:
  const CommutingTuple& t_;
  double cluster_tol_;
  double floor_;
  double max_gap_;
};

}  // namespace

JointSpectralDecomposition joint_decomposition(const CommutingTuple& t,
                                               const DecompositionOptions& options) {
  const double scale = 1.0 + t.max_norm();
  const double cluster_tol = options.cluster_tol.value_or(default_cluster_tol(t));
  const double max_gap = options.max_merge_gap.value_or(1e-3 * scale);
  if (!(cluster_tol > 0)) throw Error(ErrorKind::InvalidArgument, "cluster tolerance must be positive");

  Decomposer dec(t, cluster_tol, options.conditioning_floor, max_gap);
  dec.run(0, identity(t.n()));

  const Index n = t.n();
  const std::size_t d = t.d();
  struct Leaf {
    Vector point;
    Matrix basis;
  };
  std::vector<Leaf> leaves;
  for (auto& b : dec.leaves) {
    // The joint point is the mean eigenvalue of each T_j on the block; the
    // trace of a cluster is far better conditioned than its individual
    // eigenvalues when the block is defective.
    Vector p(static_cast<Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      p(static_cast<Index>(j)) = (b.adjoint() * t[j] * b).trace() / static_cast<double>(b.cols());
    }
    leaves.push_back({std::move(p), std::move(b)});
  }
  std::stable_sort(leaves.begin(), leaves.end(),
                   [](const Leaf& a, const Leaf& b) { return lex_less(a.point, b.point); });

  Matrix full(n, n);
  Index col = 0;
  for (const auto& l : leaves) {
    full.middleCols(col, l.basis.cols()) = l.basis;
    col += l.basis.cols();
  }
  Matrix inverse;
  try {
    inverse = coordinates_in_basis(full, identity(n));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularBasis) throw;
    throw Error(ErrorKind::IllConditionedDecomposition,
                "direct-sum basis is singular; clusters were split too finely");
  }

  JointSpectralDecomposition out;
  out.d = d;
  out.n = n;
  out.cluster_tol_used = cluster_tol;
  out.merges = dec.merges;
  col = 0;
  for (auto& l : leaves) {
    const Index k = l.basis.cols();
    out.projections.push_back(l.basis * inverse.middleRows(col, k));
    out.points.push_back(std::move(l.point));
    out.blocks.push_back(Basis{std::move(l.basis)});
    col += k;
  }
  return out;
}

JointSpectralDecomposition joint_decomposition(const CommutingTuple& t, double cluster_tol) {
  DecompositionOptions o;
  o.cluster_tol = cluster_tol;
  return joint_decomposition(t, o);
}

std::optional<unsigned> numerical_nilpotency_order(const CommutingTuple& nt, double tol) {
  const double base = 1.0 + nt.max_norm();
  const auto n = static_cast<unsigned>(nt.n());
  for (unsigned k = 1; k <= n + 1; ++k) {
    double worst = 0.0;
    for (const auto& alpha : multi_indices_of_order(nt.d(), k)) {
      worst = std::max(worst, tuple_power(nt, alpha).norm());
    }
    if (worst <= tol * std::pow(base, static_cast<double>(k))) return k;
  }
  return std::nullopt;
}

SNDecomposition split_SN(const CommutingTuple& t, const DecompositionOptions& options) {
  JointSpectralDecomposition dec = joint_decomposition(t, options);
  const Index n = t.n();
  std::vector<Matrix> s_ops(t.d(), Matrix::Zero(n, n));
  for (std::size_t i = 0; i < dec.points.size(); ++i) {
    for (std::size_t j = 0; j < t.d(); ++j) s_ops[j] += dec.points[i](static_cast<Index>(j)) * dec.projections[i];
  }
  std::vector<Matrix> n_ops;
  for (std::size_t j = 0; j < t.d(); ++j) n_ops.push_back(t[j] - s_ops[j]);

  // The split identities are certified below at kSplitTol; construction only
  // rejects gross failures.
  CommutingTuple s(std::move(s_ops), kSplitTol);
  CommutingTuple nt(std::move(n_ops), kSplitTol);

  SNDiagnostics diag;
  diag.scale = 1.0 + t.max_norm();
  for (std::size_t j = 0; j < t.d(); ++j) {
    diag.reconstruction = std::max(diag.reconstruction, (s[j] + nt[j] - t[j]).norm() / diag.scale);
    for (std::size_t k = 0; k < t.d(); ++k) {
      diag.commutation = std::max(diag.commutation, (s[j] * nt[k] - nt[k] * s[j]).norm() / diag.scale);
    }
  }
  diag.nilpotency_order = numerical_nilpotency_order(nt);
  return SNDecomposition{std::move(s), std::move(nt), std::move(dec), diag};
}

TheoremVerification verify_decomposition_theorem(const CommutingTuple& t, const Matrix& a,
                                                 unsigned m, double tol,
                                                 const DecompositionOptions& options) {
  const CheckReport pre = check_A_m_isometric(t, a, m, tol);
  if (!pre.passed) {
    throw Error(ErrorKind::InputNotAmIsometry,
                "tuple is not (A," + std::to_string(m) + ")-isometric: residual " +
                    std::to_string(pre.residual) + " > " + std::to_string(tol));
  }
  SNDecomposition split = split_SN(t, options);
  VerificationReport report;
  report.add("input_A_m_isometry", pre);
  report.add("spherical_A_isometry", check_spherical_A_isometry(split.s, a, tol));
  const unsigned order = static_cast<unsigned>(t.n());
  const CheckReport nil = check_A_n_nilpotent(split.n, identity(t.n()), order, kSplitTol);
  report.add("nilpotent", nil.residual, kSplitTol,
             split.diagnostics.nilpotency_order
                 ? "nilpotency order " + std::to_string(*split.diagnostics.nilpotency_order)
                 : std::string("not nilpotent"));
  report.add("commutation", split.diagnostics.commutation, kSplitTol, "max ||S_j N_k - N_k S_j|| / scale");
  report.add("reconstruction", split.diagnostics.reconstruction, kSplitTol, "max ||S_j + N_j - T_j|| / scale");
  return {std::move(report), std::move(split)};
}

namespace {

bool same_tuple(const CommutingTuple& a, const CommutingTuple& b) {
  if (a.d() != b.d() || a.n() != b.n()) return false;
  for (std::size_t j = 0; j < a.d(); ++j) {
    if (a[j] != b[j]) return false;
  }
  return true;
}

}  // namespace

VerificationReport verify_radical_inclusion(const HereditaryPolynomial& f, const Matrix& a,
                                            const CommutingTuple& x, const CommutingTuple& y,
                                            unsigned power, double tol,
                                            const DecompositionOptions& options) {
  if (power == 0) throw Error(ErrorKind::InvalidArgument, "power must be positive");
  const double scale = a_scale(a);
  const double pre = evaluate(f.pow(power), a, x, y).norm() / scale;
  if (pre > tol) {
    throw Error(ErrorKind::PreconditionFailed,
                "f^" + std::to_string(power) + " does not annihilate: residual " + std::to_string(pre));
  }
  const SNDecomposition sx = split_SN(x, options);
  const bool same = same_tuple(x, y);
  const CommutingTuple& u = sx.s;
  std::optional<SNDecomposition> sy;
  if (!same) sy.emplace(split_SN(y, options));
  const CommutingTuple& v = same ? sx.s : sy->s;

  VerificationReport report;
  report.add("precondition_power_root", pre, tol);
  report.add("semisimple_root", evaluate(f, a, u, v).norm() / scale, tol,
             "||f(A; U, V)||_F / (1 + ||A||_F)");
  return report;
}

VerificationReport verify_radical_inclusion(const HereditaryPolynomial& f, const Matrix& a,
                                            const CommutingTuple& t, unsigned power, double tol,
                                            const DecompositionOptions& options) {
  return verify_radical_inclusion(f, a, t, t, power, tol, options);
}

VerificationReport verify_pairing_vanishing(const HereditaryPolynomial& f, const Matrix& a,
                                            const CommutingTuple& x, const CommutingTuple& y,
                                            unsigned trials, double tol,
                                            const PairingOptions& options) {
  if (trials == 0) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  const double pre = evaluate(f.pow(options.power), a, x, y).norm() / a_scale(a);
  if (pre > tol) {
    throw Error(ErrorKind::PreconditionFailed, "f^" + std::to_string(options.power) +
                                                   " does not annihilate: residual " + std::to_string(pre));
  }
  const auto dx = joint_decomposition(x, options.decomposition);
  const bool same = same_tuple(x, y);
  std::optional<JointSpectralDecomposition> dy_storage;
  if (!same) dy_storage.emplace(joint_decomposition(y, options.decomposition));
  const auto& dy = same ? dx : *dy_storage;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&](const Basis& b) {
    Vector c(b.dim());
    for (Index i = 0; i < c.size(); ++i) c(i) = Complex(normal(rng), normal(rng));
    Vector v = b.vectors * c;
    return Vector(v / v.norm());
  };
  std::uniform_int_distribution<std::size_t> pick_x(0, dx.points.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_y(0, dy.points.size() - 1);

  const double a_norm = a.norm();
  double worst = 0.0;
  bool ok = true;
  for (unsigned t = 0; t < trials; ++t) {
    const std::size_t i = pick_x(rng);
    const std::size_t k = pick_y(rng);
    const Vector u = random_vector(dx.blocks[i]);
    const Vector v = random_vector(dy.blocks[k]);
    const Complex fv = f(dx.points[i].conjugate(), dy.points[k]);
    const double lhs = std::abs(fv * u.dot(a * v));
    const double weight = a_norm * u.norm() * v.norm() * (1.0 + std::abs(fv));
    if (lhs > tol * weight) ok = false;
    if (weight > 0) worst = std::max(worst, lhs / weight);
  }
  VerificationReport report;
  report.add("precondition_power_root", pre, tol);
  report.checks.push_back({"pairing_vanishing",
                           {ok, worst, tol,
                            std::to_string(trials) + " sampled pairs; residual is the worst "
                                                     "|f(conj(l),w) <Av,u>| / (||A|| ||u|| ||v|| (1+|f|))"}});
  return report;
}

}  // namespace herop
