#include "herop/hereditary.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "herop/error.hpp"

namespace herop {

MultiIndex MultiIndex::unit(std::size_t d, std::size_t j) {
  std::vector<unsigned> c(d, 0);
  c.at(j) = 1;
  return MultiIndex(std::move(c));
}

unsigned MultiIndex::order() const {
  unsigned s = 0;
  for (auto v : c_) s += v;
  return s;
}

double MultiIndex::factorial() const {
  if (order() > 20) {
    throw Error(ErrorKind::InvalidArgument, "multi-index factorial guarded to |alpha| <= 20");
  }
  double f = 1.0;
  for (auto v : c_) {
    for (unsigned k = 2; k <= v; ++k) f *= k;
  }
  return f;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw Error(ErrorKind::Dimension, "multi-index length mismatch");
  std::vector<unsigned> c = c_;
  for (std::size_t j = 0; j < c.size(); ++j) c[j] += other.c_[j];
  return MultiIndex(std::move(c));
}

std::vector<MultiIndex> multi_indices_of_order(std::size_t d, unsigned k) {
  std::vector<MultiIndex> out;
  std::vector<unsigned> c(d, 0);
  auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
    if (pos + 1 == d) {
      c[pos] = left;
      out.emplace_back(c);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      c[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  if (d == 0) return out;
  rec(rec, 0, k);
  return out;
}

HereditaryPolynomial::HereditaryPolynomial(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "polynomial dimension must be positive");
}

HereditaryPolynomial HereditaryPolynomial::constant(std::size_t dim, Complex c) {
  HereditaryPolynomial p(dim);
  p.add_term(MultiIndex::zero(dim), MultiIndex::zero(dim), c);
  return p;
}

HereditaryPolynomial HereditaryPolynomial::monomial(const MultiIndex& alpha,
                                                    const MultiIndex& beta, Complex c) {
  HereditaryPolynomial p(alpha.dim());
  p.add_term(alpha, beta, c);
  return p;
}

HereditaryPolynomial HereditaryPolynomial::x(std::size_t dim, std::size_t j) {
  return monomial(MultiIndex::unit(dim, j), MultiIndex::zero(dim));
}

HereditaryPolynomial HereditaryPolynomial::y(std::size_t dim, std::size_t j) {
  return monomial(MultiIndex::zero(dim), MultiIndex::unit(dim, j));
}

Complex HereditaryPolynomial::coefficient(const MultiIndex& alpha, const MultiIndex& beta) const {
  auto it = terms_.find({alpha, beta});
  return it == terms_.end() ? Complex{} : it->second;
}

bool HereditaryPolynomial::depends_only_on_x() const {
  for (const auto& [key, c] : terms_) {
    if (key.second.order() != 0) return false;
  }
  return true;
}

bool HereditaryPolynomial::depends_only_on_y() const {
  for (const auto& [key, c] : terms_) {
    if (key.first.order() != 0) return false;
  }
  return true;
}

void HereditaryPolynomial::add_term(const MultiIndex& alpha, const MultiIndex& beta, Complex c) {
  if (alpha.dim() != dim_ || beta.dim() != dim_) {
    throw Error(ErrorKind::Dimension, "term multi-index length does not match polynomial dimension");
  }
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw Error(ErrorKind::NonFinite, "polynomial coefficient is not finite");
  }
  auto [it, inserted] = terms_.try_emplace({alpha, beta}, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) <= kPruneThreshold) terms_.erase(it);
}

namespace {

Complex power_product(const Vector& v, const MultiIndex& a) {
  Complex r = 1.0;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    for (unsigned k = 0; k < a[j]; ++k) r *= v(static_cast<Index>(j));
  }
  return r;
}

}  // namespace

Complex HereditaryPolynomial::operator()(const Vector& x, const Vector& y) const {
  if (static_cast<std::size_t>(x.size()) != dim_ || static_cast<std::size_t>(y.size()) != dim_) {
    throw Error(ErrorKind::Dimension, "evaluation point dimension mismatch");
  }
  Complex s = 0.0;
  for (const auto& [key, c] : terms_) s += c * power_product(x, key.first) * power_product(y, key.second);
  return s;
}

HereditaryPolynomial operator*(const HereditaryPolynomial& a, const HereditaryPolynomial& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::Dimension, "polynomial dimension mismatch");
  HereditaryPolynomial p(a.dim());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      p.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    }
  }
  return p;
}

HereditaryPolynomial poly_mul(const HereditaryPolynomial& f, const HereditaryPolynomial& g) {
  return f * g;
}

HereditaryPolynomial HereditaryPolynomial::pow(unsigned k) const {
  HereditaryPolynomial r = constant(dim_, 1.0);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

HereditaryPolynomial HereditaryPolynomial::conjugate_to_x() const {
  if (!depends_only_on_y()) {
    throw Error(ErrorKind::InvalidArgument, "conjugate_to_x requires a polynomial in y only");
  }
  HereditaryPolynomial p(dim_);
  for (const auto& [key, c] : terms_) p.add_term(key.second, key.first, std::conj(c));
  return p;
}

HereditaryPolynomial& HereditaryPolynomial::operator+=(const HereditaryPolynomial& other) {
  if (dim_ != other.dim_) throw Error(ErrorKind::Dimension, "polynomial dimension mismatch");
  for (const auto& [key, c] : other.terms_) add_term(key.first, key.second, c);
  return *this;
}

HereditaryPolynomial& HereditaryPolynomial::operator-=(const HereditaryPolynomial& other) {
  if (dim_ != other.dim_) throw Error(ErrorKind::Dimension, "polynomial dimension mismatch");
  for (const auto& [key, c] : other.terms_) add_term(key.first, key.second, -c);
  return *this;
}

HereditaryPolynomial& HereditaryPolynomial::operator*=(Complex s) {
  Terms scaled;
  for (const auto& [key, c] : terms_) {
    const Complex v = c * s;
    if (std::abs(v) > kPruneThreshold) scaled.emplace(key, v);
  }
  terms_ = std::move(scaled);
  return *this;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_index(std::string& out, const MultiIndex& a) {
  out += '[';
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (j) out += ',';
    out += std::to_string(a[j]);
  }
  out += ']';
}

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n')) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect_literal(std::string_view lit) {
    skip_ws();
    if (s_.substr(pos_, lit.size()) != lit) fail("expected '" + std::string(lit) + "'");
    pos_ += lit.size();
  }

  double number() {
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    double v = 0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return v;
  }

  Complex coefficient() {
    expect('(');
    skip_ws();
    const double re = number();
    skip_ws();
    if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) fail("expected sign of imaginary part");
    const bool negative = s_[pos_] == '-';
    ++pos_;
    double im = number();
    if (negative) im = -im;
    expect('i');
    expect(')');
    return {re, im};
  }

  MultiIndex index() {
    expect('[');
    std::vector<unsigned> c;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') fail("empty multi-index");
    while (true) {
      skip_ws();
      unsigned v = 0;
      auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (res.ec != std::errc{}) fail("malformed multi-index entry");
      pos_ = static_cast<std::size_t>(res.ptr - s_.data());
      c.push_back(v);
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    expect(']');
    return MultiIndex(std::move(c));
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::Parse, msg + " at offset " + std::to_string(pos_));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string HereditaryPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) out += " + ";
    first = false;
    out += '(';
    append_number(out, c.real());
    if (!std::signbit(c.imag())) out += '+';
    append_number(out, c.imag());
    out += "i) x^";
    append_index(out, key.first);
    out += " y^";
    append_index(out, key.second);
  }
  return out;
}

HereditaryPolynomial HereditaryPolynomial::parse(std::string_view text,
                                                 std::optional<std::size_t> dim) {
  TermParser p(text);
  if (p.at_end()) throw Error(ErrorKind::Parse, "empty polynomial text");
  {
    std::string_view trimmed = text;
    while (!trimmed.empty() && trimmed.front() == ' ') trimmed.remove_prefix(1);
    while (!trimmed.empty() && trimmed.back() == ' ') trimmed.remove_suffix(1);
    if (trimmed == "0") {
      if (!dim) throw Error(ErrorKind::Parse, "zero polynomial needs an explicit dimension");
      return HereditaryPolynomial(*dim);
    }
  }
  std::optional<HereditaryPolynomial> poly;
  while (true) {
    const Complex c = p.coefficient();
    p.expect_literal("x^");
    MultiIndex alpha = p.index();
    p.expect_literal("y^");
    MultiIndex beta = p.index();
    if (!poly) {
      const std::size_t d = alpha.dim();
      if (dim && *dim != d) p.fail("multi-index length differs from requested dimension");
      poly.emplace(d);
    }
    if (alpha.dim() != poly->dim() || beta.dim() != poly->dim()) {
      p.fail("inconsistent multi-index lengths");
    }
    poly->add_term(alpha, beta, c);
    if (p.at_end()) break;
    p.expect('+');
  }
  return *poly;
}

HereditaryPolynomial m_isometry_polynomial(std::size_t d, unsigned m) {
  if (d == 0 || m == 0) throw Error(ErrorKind::InvalidArgument, "m_isometry_polynomial needs d, m >= 1");
  HereditaryPolynomial base = HereditaryPolynomial::constant(d, -1.0);
  for (std::size_t j = 0; j < d; ++j) {
    base.add_term(MultiIndex::unit(d, j), MultiIndex::unit(d, j), 1.0);
  }
  return base.pow(m);
}

std::vector<HereditaryPolynomial> toral_polynomials(std::size_t d, unsigned m) {
  if (d == 0 || m == 0) throw Error(ErrorKind::InvalidArgument, "toral_polynomials needs d, m >= 1");
  std::vector<HereditaryPolynomial> factors;
  for (std::size_t j = 0; j < d; ++j) {
    HereditaryPolynomial f = HereditaryPolynomial::constant(d, 1.0);
    f.add_term(MultiIndex::unit(d, j), MultiIndex::unit(d, j), -1.0);
    factors.push_back(std::move(f));
  }
  auto compositions = multi_indices_of_order(d, m);
  std::vector<HereditaryPolynomial> out;
  out.reserve(compositions.size());
  for (auto it = compositions.rbegin(); it != compositions.rend(); ++it) {
    HereditaryPolynomial p = HereditaryPolynomial::constant(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) p = p * factors[j].pow((*it)[j]);
    out.push_back(std::move(p));
  }
  return out;
}

HereditaryPolynomial isosymmetry_polynomial(unsigned m, unsigned n) {
  if (m + n == 0) throw Error(ErrorKind::InvalidArgument, "isosymmetry_polynomial needs m + n >= 1");
  HereditaryPolynomial iso = HereditaryPolynomial::monomial(MultiIndex({1}), MultiIndex({1}));
  iso.add_term(MultiIndex({0}), MultiIndex({0}), -1.0);
  HereditaryPolynomial sym = HereditaryPolynomial::x(1, 0) - HereditaryPolynomial::y(1, 0);
  return iso.pow(m) * sym.pow(n);
}

namespace {

// X^alpha memoized over multi-index predecessors; one cache per evaluation.
class PowerCache {
 public:
  explicit PowerCache(const CommutingTuple& t) : t_(t) {}

  const Matrix& get(const MultiIndex& alpha) {
    auto it = cache_.find(alpha);
    if (it != cache_.end()) return it->second;
    std::size_t last = alpha.dim();
    for (std::size_t j = alpha.dim(); j-- > 0;) {
      if (alpha[j] != 0) {
        last = j;
        break;
      }
    }
    if (last == alpha.dim()) return cache_.emplace(alpha, identity(t_.n())).first->second;
    std::vector<unsigned> prev = alpha.components();
    --prev[last];
    Matrix value = get(MultiIndex(std::move(prev))) * t_[last];
    return cache_.emplace(alpha, std::move(value)).first->second;
  }

 private:
  const CommutingTuple& t_;
  std::map<MultiIndex, Matrix> cache_;
};

void require_index_dim(const MultiIndex& a, const CommutingTuple& t) {
  if (a.dim() != t.d()) {
    throw Error(ErrorKind::Dimension, "multi-index length " + std::to_string(a.dim()) +
                                          " does not match tuple length " + std::to_string(t.d()));
  }
}

}  // namespace

Matrix tuple_power(const CommutingTuple& x, const MultiIndex& alpha) {
  require_index_dim(alpha, x);
  PowerCache cache(x);
  return cache.get(alpha);
}

Matrix evaluate(const HereditaryPolynomial& f, const Matrix& a, const CommutingTuple& x,
                const CommutingTuple& y) {
  if (f.dim() != x.d() || f.dim() != y.d()) {
    throw Error(ErrorKind::Dimension, "polynomial dimension must match both tuple lengths");
  }
  if (x.n() != y.n() || a.rows() != x.n() || a.cols() != x.n()) {
    throw Error(ErrorKind::Dimension, "A, X and Y must act on the same space");
  }
  PowerCache xp(x);
  PowerCache yp(y);
  const Index n = x.n();
  Matrix result = Matrix::Zero(n, n);
  // Terms are sorted by alpha first, so each (X^alpha)^* A is applied once to
  // the accumulated right factor sum_beta c Y^beta.
  auto it = f.terms().begin();
  while (it != f.terms().end()) {
    const MultiIndex& alpha = it->first.first;
    Matrix right = Matrix::Zero(n, n);
    for (; it != f.terms().end() && it->first.first == alpha; ++it) {
      right += it->second * yp.get(it->first.second);
    }
    result += xp.get(alpha).adjoint() * (a * right);
  }
  return result;
}

Matrix evaluate_in_y(const HereditaryPolynomial& h, const CommutingTuple& y) {
  if (!h.depends_only_on_y()) throw Error(ErrorKind::InvalidArgument, "polynomial depends on x");
  if (h.dim() != y.d()) throw Error(ErrorKind::Dimension, "polynomial dimension mismatch");
  PowerCache yp(y);
  Matrix r = Matrix::Zero(y.n(), y.n());
  for (const auto& [key, c] : h.terms()) r += c * yp.get(key.second);
  return r;
}

Matrix evaluate_in_x_adjoint(const HereditaryPolynomial& g, const CommutingTuple& x) {
  if (!g.depends_only_on_x()) throw Error(ErrorKind::InvalidArgument, "polynomial depends on y");
  if (g.dim() != x.d()) throw Error(ErrorKind::Dimension, "polynomial dimension mismatch");
  PowerCache xp(x);
  Matrix r = Matrix::Zero(x.n(), x.n());
  for (const auto& [key, c] : g.terms()) r += c * xp.get(key.first).adjoint();
  return r;
}

}  // namespace herop
