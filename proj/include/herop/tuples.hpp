#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "herop/commuting_tuple.hpp"
#include "herop/hereditary.hpp"

namespace herop {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr unsigned kMaxIsometryOrder = 25;

// passed <=> residual <= tolerance_used
struct CheckReport {
  bool passed = false;
  double residual = 0.0;
  double tolerance_used = 0.0;
  std::string detail;
};

struct NamedCheck {
  std::string name;
  CheckReport report;
};

// Ordered list of named checks; passes when every check passes.
struct VerificationReport {
  std::vector<NamedCheck> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.report.passed) return false;
    }
    return true;
  }
  const CheckReport& at(std::string_view name) const;
  void add(std::string name, double residual, double tol, std::string detail = {}) {
    checks.push_back({std::move(name), {residual <= tol, residual, tol, std::move(detail)}});
  }
  void add(std::string name, CheckReport r) { checks.push_back({std::move(name), std::move(r)}); }
};

// Residuals below are normalized by 1 + ||A||_F, so A = 0 passes everything.
double a_scale(const Matrix& a);

// ||p_m(A; T, T)||_F / (1 + ||A||_F); A = I is the plain m-isometry check.
CheckReport check_A_m_isometric(const CommutingTuple& t, const Matrix& a, unsigned m,
                                double tol = kDefaultTol);

// ||sum_j T_j^* A T_j - A||_F / (1 + ||A||_F)
CheckReport check_spherical_A_isometry(const CommutingTuple& t, const Matrix& a,
                                       double tol = kDefaultTol);

// max_{|alpha| = n} ||A N^alpha||_F / (1 + ||A||_F)
CheckReport check_A_n_nilpotent(const CommutingTuple& nt, const Matrix& a, unsigned n,
                                double tol = kDefaultTol);

// Least m <= m_max for which the (A,m) check passes. A tuple passing at m is
// strict when it fails at m - 1.
std::optional<unsigned> isometry_order(const CommutingTuple& t, const Matrix& a, unsigned m_max,
                                       double tol = kDefaultTol);

// Least k <= n + 1 for which the (A,k)-nilpotency check passes.
std::optional<unsigned> nilpotency_order(const CommutingTuple& nt, const Matrix& a,
                                         double tol = kDefaultTol);

// Worst residual over the toral family for (m_1, ..., m_d) summing to m.
CheckReport check_toral(const CommutingTuple& t, const Matrix& a, unsigned m,
                        double tol = kDefaultTol);

// Hereditary root of (xy - 1)^m (x - y)^n, d = 1 only.
CheckReport check_isosymmetric(const CommutingTuple& t, unsigned m, unsigned n,
                               double tol = kDefaultTol);

}  // namespace herop
