#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "herop/commuting_tuple.hpp"
#include "herop/matcore.hpp"

namespace herop {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> components) : c_(std::move(components)) {}

  static MultiIndex zero(std::size_t d) { return MultiIndex(std::vector<unsigned>(d, 0)); }
  static MultiIndex unit(std::size_t d, std::size_t j);

  std::size_t dim() const { return c_.size(); }
  unsigned operator[](std::size_t j) const { return c_[j]; }
  const std::vector<unsigned>& components() const { return c_; }

  // |alpha|
  unsigned order() const;
  // alpha! as a double; exact for |alpha| <= 20, larger orders are rejected.
  double factorial() const;

  MultiIndex operator+(const MultiIndex& other) const;
  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<unsigned> c_;
};

// All multi-indices of length d and order k, lexicographically ascending.
std::vector<MultiIndex> multi_indices_of_order(std::size_t d, unsigned k);

// Polynomial in commuting variables x_1..x_d, y_1..y_d stored as a sparse map
// (alpha, beta) -> c, meaning c * x^alpha * y^beta. Coefficients with modulus
// <= kPruneThreshold are dropped.
class HereditaryPolynomial {
 public:
  static constexpr double kPruneThreshold = 1e-14;

  using Key = std::pair<MultiIndex, MultiIndex>;
  using Terms = std::map<Key, Complex>;

  explicit HereditaryPolynomial(std::size_t dim);

  static HereditaryPolynomial constant(std::size_t dim, Complex c);
  static HereditaryPolynomial monomial(const MultiIndex& alpha, const MultiIndex& beta,
                                       Complex c = 1.0);
  static HereditaryPolynomial x(std::size_t dim, std::size_t j);
  static HereditaryPolynomial y(std::size_t dim, std::size_t j);

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  Complex coefficient(const MultiIndex& alpha, const MultiIndex& beta) const;
  bool is_zero() const { return terms_.empty(); }

  bool depends_only_on_x() const;
  bool depends_only_on_y() const;

  void add_term(const MultiIndex& alpha, const MultiIndex& beta, Complex c);

  // Scalar value f(x, y) at points of C^d.
  Complex operator()(const Vector& x, const Vector& y) const;

  HereditaryPolynomial pow(unsigned k) const;

  // For f depending only on y, the polynomial f-bar(x) = sum conj(c_a) x^a.
  HereditaryPolynomial conjugate_to_x() const;

  HereditaryPolynomial& operator+=(const HereditaryPolynomial& other);
  HereditaryPolynomial& operator-=(const HereditaryPolynomial& other);
  HereditaryPolynomial& operator*=(Complex s);

  friend HereditaryPolynomial operator+(HereditaryPolynomial a, const HereditaryPolynomial& b) {
    return a += b;
  }
  friend HereditaryPolynomial operator-(HereditaryPolynomial a, const HereditaryPolynomial& b) {
    return a -= b;
  }
  friend HereditaryPolynomial operator*(HereditaryPolynomial a, Complex s) { return a *= s; }
  friend HereditaryPolynomial operator*(Complex s, HereditaryPolynomial a) { return a *= s; }
  friend HereditaryPolynomial operator*(const HereditaryPolynomial& a,
                                        const HereditaryPolynomial& b);
  friend bool operator==(const HereditaryPolynomial&, const HereditaryPolynomial&) = default;

  // Text form: "(a+bi) x^[a1,...,ad] y^[b1,...,bd] + ..." in lexicographic
  // (alpha, beta) order, "0" for the zero polynomial. Numbers use the shortest
  // round-trip representation, so parse(to_string(f)) == f exactly.
  std::string to_string() const;
  // `dim` is required only for "0"; otherwise it is inferred and checked.
  static HereditaryPolynomial parse(std::string_view text,
                                    std::optional<std::size_t> dim = std::nullopt);

 private:
  std::size_t dim_;
  Terms terms_;
};

HereditaryPolynomial poly_mul(const HereditaryPolynomial& f, const HereditaryPolynomial& g);

// (sum_j x_j y_j - 1)^m
HereditaryPolynomial m_isometry_polynomial(std::size_t d, unsigned m);

// (1 - x_1 y_1)^{m_1} ... (1 - x_d y_d)^{m_d} for every composition
// m_1 + ... + m_d = m into non-negative parts, compositions in lexicographic order
// of (m_1, ..., m_d) descending, i.e. (m,0,..) first.
std::vector<HereditaryPolynomial> toral_polynomials(std::size_t d, unsigned m);

// (xy - 1)^m (x - y)^n in one variable pair.
HereditaryPolynomial isosymmetry_polynomial(unsigned m, unsigned n);

// X^alpha = X_1^{alpha_1} ... X_d^{alpha_d}
Matrix tuple_power(const CommutingTuple& x, const MultiIndex& alpha);

// f(A; X, Y) = sum c_{alpha,beta} (X^alpha)^* A Y^beta
Matrix evaluate(const HereditaryPolynomial& f, const Matrix& a, const CommutingTuple& x,
                const CommutingTuple& y);

// h(Y) for h depending only on y; g(X^*) for g depending only on x.
Matrix evaluate_in_y(const HereditaryPolynomial& h, const CommutingTuple& y);
Matrix evaluate_in_x_adjoint(const HereditaryPolynomial& g, const CommutingTuple& x);

}  // namespace herop
