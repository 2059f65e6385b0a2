#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zmc/exact_matrix.hpp"
#include "zmc/quadext.hpp"

namespace zmc {

/// Exponent vector of a monomial; length equals the owning polynomial's nvars.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(int nvars) : exps_(static_cast<std::size_t>(nvars), 0) {}
  explicit Monomial(std::vector<int> exps);

  int nvars() const noexcept { return static_cast<int>(exps_.size()); }
  int degree() const noexcept { return degree_; }
  /// 0-based exponent access.
  int operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const noexcept { return exps_; }

  bool divides(const Monomial& other) const;
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// a / b; requires b.divides(a).
  friend Monomial operator/(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

/// Graded lexicographic order with x1 > x2 > ...; sorts larger monomials first.
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over Q(sqrt(d)) in a fixed number of variables.
///
/// No stored coefficient is zero and all coefficients share one radicand. The
/// term map iterates from the leading (grlex-largest) monomial down.
class Poly {
 public:
  using Terms = std::map<Monomial, QuadExt, GrlexDescending>;

  explicit Poly(int nvars = 1);

  static Poly constant(int nvars, const QuadExt& c);
  /// x_index with a 1-based index.
  static Poly variable(int nvars, int index);
  static Poly monomial(const Monomial& m, const QuadExt& c);
  static Poly from_terms(int nvars, Terms terms);

  int nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t nterms() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Maximum total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  bool is_constant() const { return is_zero() || (nterms() == 1 && degree() == 0); }
  std::uint64_t radicand() const noexcept { return d_; }

  const Monomial& leading_monomial() const;
  const QuadExt& leading_coefficient() const;
  QuadExt coefficient(const Monomial& m) const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const QuadExt& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const QuadExt& c) { return a *= c; }
  friend Poly operator*(const QuadExt& c, Poly a) { return a *= c; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// In-place p += c * m * q, the inner step of multiplication and division.
  void add_scaled_product(const QuadExt& c, const Monomial& m, const Poly& q);

 private:
  void check_compatible(const Poly& o) const;
  void add_term(const Monomial& m, const QuadExt& c);

  int nvars_;
  Terms terms_;
  std::uint64_t d_ = 1;
};

Poly add(const Poly& p, const Poly& q);
Poly mul(const Poly& p, const Poly& q);
Poly scale(const Poly& p, const QuadExt& c);
Poly pow(const Poly& p, unsigned exponent);

/// Partial derivative with respect to x_var (1-based).
Poly diff(const Poly& p, int var);

struct DivisionResult {
  Poly quotient;
  Poly remainder;
};

/// Multivariate division by a single divisor in grlex order: g = q*f + r with no
/// monomial of r divisible by the leading monomial of f.
DivisionResult divide(const Poly& g, const Poly& f);

QuadExt eval_exact(const Poly& p, std::span<const QuadExt> x);
double eval_float(const Poly& p, std::span<const double> x);

/// p(M x): substitutes x_i by the i-th row of M applied to x.
Poly compose_linear(const Poly& p, const ExactMatrix& m);

/// Renders p in the polynomial text grammar; parse(render(p)) == p.
std::string render(const Poly& p);

/// Parses polynomial text. Grammar:
///   poly   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*'? factor)*
///   factor := rational | 'sqrt' '(' posint ')' | var ('^' posint)? | '(' poly ')'
///   var    := 'x' posint ; rational := int ('/' posint)?
Poly parse(std::string_view text, int nvars);

/// Double-precision copy of a polynomial for repeated point evaluation.
class FloatPoly {
 public:
  FloatPoly() = default;
  explicit FloatPoly(const Poly& p);

  int nvars() const noexcept { return nvars_; }
  double operator()(std::span<const double> x) const;

 private:
  int nvars_ = 0;
  int max_exp_ = 0;
  std::vector<double> coeffs_;
  std::vector<int> exps_;  // nterms * nvars, row-major
};

}  // namespace zmc
