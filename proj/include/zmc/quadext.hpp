#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace zmc {

/// Exact element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).
///
/// The radicand d is square-free. A scalar whose surd part is zero is plain
/// rational and always carries d = 1, so equality is structural. Two scalars
/// with non-zero surd parts over different radicands refuse to combine.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(long value) : rat_(value) {}  // NOLINT(google-explicit-constructor)
  QuadExt(mpq_class value);             // NOLINT(google-explicit-constructor)
  QuadExt(mpq_class rat, mpq_class surd, std::uint64_t radicand);

  /// sqrt(r) for a non-negative rational r, rationalized into Q(sqrt(d)).
  static QuadExt sqrt_of(const mpq_class& r);
  static QuadExt sqrt_of(long num, long den = 1) { return sqrt_of(mpq_class(num, den)); }

  const mpq_class& rational_part() const noexcept { return rat_; }
  const mpq_class& surd_part() const noexcept { return surd_; }
  std::uint64_t radicand() const noexcept { return d_; }

  bool is_zero() const { return sgn(rat_) == 0 && sgn(surd_) == 0; }
  bool is_rational() const { return sgn(surd_) == 0; }
  bool is_one() const { return is_rational() && rat_ == 1; }

  /// Sign of the real number a + b*sqrt(d), decided exactly.
  int sign() const;

  QuadExt conjugate() const;
  /// Field norm a^2 - d*b^2.
  mpq_class norm() const;
  QuadExt inverse() const;

  double to_double() const;
  /// Text in the polynomial grammar, e.g. "3", "-1/2", "1/2 sqrt(6)", "(1 + sqrt(2))".
  std::string to_string() const;

  QuadExt operator-() const;
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }

  friend bool operator==(const QuadExt& a, const QuadExt& b) {
    return a.d_ == b.d_ && a.rat_ == b.rat_ && a.surd_ == b.surd_;
  }
  friend bool operator!=(const QuadExt& a, const QuadExt& b) { return !(a == b); }

 private:
  /// Radicand shared by a and b when they may combine; throws otherwise.
  static std::uint64_t common_radicand(const QuadExt& a, const QuadExt& b);
  void normalize();

  mpq_class rat_{0};
  mpq_class surd_{0};
  std::uint64_t d_ = 1;
};

/// Square-free decomposition n = c^2 * d. Returns d and stores c.
std::uint64_t squarefree_part(std::uint64_t n, std::uint64_t* square_root_factor = nullptr);

/// Radicand shared by both values or 1; throws surd_mismatch if incompatible.
std::uint64_t merge_radicand(std::uint64_t a, std::uint64_t b);

}  // namespace zmc
