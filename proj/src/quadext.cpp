#include "zmc/quadext.hpp"

#include <cmath>
#include <utility>

#include "zmc/error.hpp"

namespace zmc {

std::uint64_t squarefree_part(std::uint64_t n, std::uint64_t* square_root_factor) {
  if (n == 0) throw Error(Errc::invalid_argument, "squarefree_part: zero has no square-free part");
  std::uint64_t c = 1;
  std::uint64_t d = 1;
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) c *= p;
    if (e % 2 == 1) d *= p;
  }
  d *= n;  // leftover prime factor (or 1)
  if (square_root_factor) *square_root_factor = c;
  return d;
}

std::uint64_t merge_radicand(std::uint64_t a, std::uint64_t b) {
  if (a == 1) return b;
  if (b == 1 || a == b) return a;
  throw Error(Errc::surd_mismatch, "incompatible surds: sqrt(" + std::to_string(a) + ") and sqrt(" +
                                       std::to_string(b) + ") cannot share one coefficient field");
}

QuadExt::QuadExt(mpq_class value) : rat_(std::move(value)) { rat_.canonicalize(); }

QuadExt::QuadExt(mpq_class rat, mpq_class surd, std::uint64_t radicand)
    : rat_(std::move(rat)), surd_(std::move(surd)), d_(radicand) {
  if (radicand == 0) throw Error(Errc::invalid_argument, "radicand must be positive");
  rat_.canonicalize();
  surd_.canonicalize();
  std::uint64_t c = 1;
  d_ = squarefree_part(radicand, &c);
  surd_ *= mpq_class(mpz_class(static_cast<unsigned long>(c)));
  normalize();
}

QuadExt QuadExt::sqrt_of(const mpq_class& r) {
  if (sgn(r) < 0) throw Error(Errc::domain, "sqrt of a negative rational is not real");
  if (sgn(r) == 0) return QuadExt{};
  // sqrt(p/q) = sqrt(p*q)/q
  const mpz_class pq = r.get_num() * r.get_den();
  if (!pq.fits_ulong_p()) throw Error(Errc::invalid_argument, "radicand too large");
  const std::uint64_t n = pq.get_ui();
  std::uint64_t c = 1;
  const std::uint64_t d = squarefree_part(n, &c);
  mpq_class coeff(mpz_class(static_cast<unsigned long>(c)), r.get_den());
  coeff.canonicalize();
  if (d == 1) return QuadExt(coeff);
  return QuadExt(mpq_class(0), coeff, d);
}

void QuadExt::normalize() {
  if (sgn(surd_) == 0 || d_ == 1) {
    rat_ += surd_;  // d == 1 folds sqrt(1) = 1
    surd_ = 0;
    d_ = 1;
  }
}

std::uint64_t QuadExt::common_radicand(const QuadExt& a, const QuadExt& b) {
  return merge_radicand(a.d_, b.d_);
}

int QuadExt::sign() const {
  const int sa = sgn(rat_);
  const int sb = sgn(surd_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // opposite signs: compare a^2 against b^2 d
  const mpq_class lhs = rat_ * rat_;
  const mpq_class rhs = surd_ * surd_ * mpq_class(mpz_class(static_cast<unsigned long>(d_)));
  const int c = cmp(lhs, rhs);
  return c > 0 ? sa : (c < 0 ? sb : 0);
}

QuadExt QuadExt::conjugate() const {
  QuadExt r = *this;
  r.surd_ = -r.surd_;
  return r;
}

mpq_class QuadExt::norm() const {
  return rat_ * rat_ - surd_ * surd_ * mpq_class(mpz_class(static_cast<unsigned long>(d_)));
}

QuadExt QuadExt::inverse() const {
  if (is_zero()) throw Error(Errc::division_by_zero, "division by zero scalar");
  const mpq_class n = norm();
  QuadExt r = conjugate();
  r.rat_ /= n;
  r.surd_ /= n;
  return r;
}

double QuadExt::to_double() const {
  return rat_.get_d() + surd_.get_d() * std::sqrt(static_cast<double>(d_));
}

namespace {

std::string rational_text(const mpq_class& q) { return q.get_str(); }

std::string surd_text(const mpq_class& b, std::uint64_t d) {
  const std::string root = "sqrt(" + std::to_string(d) + ")";
  if (b == 1) return root;
  if (b == -1) return "-" + root;
  return rational_text(b) + " " + root;
}

}  // namespace

std::string QuadExt::to_string() const {
  if (is_rational()) return rational_text(rat_);
  if (sgn(rat_) == 0) return surd_text(surd_, d_);
  const bool neg = sgn(surd_) < 0;
  return "(" + rational_text(rat_) + (neg ? " - " : " + ") + surd_text(neg ? mpq_class(-surd_) : surd_, d_) +
         ")";
}

QuadExt QuadExt::operator-() const {
  QuadExt r = *this;
  r.rat_ = -r.rat_;
  r.surd_ = -r.surd_;
  return r;
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  d_ = common_radicand(*this, o);
  rat_ += o.rat_;
  surd_ += o.surd_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) {
  d_ = common_radicand(*this, o);
  rat_ -= o.rat_;
  surd_ -= o.surd_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  const std::uint64_t d = common_radicand(*this, o);
  if (o.is_rational()) {
    rat_ *= o.rat_;
    surd_ *= o.rat_;
  } else if (is_rational()) {
    surd_ = rat_ * o.surd_;
    rat_ *= o.rat_;
  } else {
    const mpq_class dd(mpz_class(static_cast<unsigned long>(d)));
    mpq_class a = rat_ * o.rat_ + surd_ * o.surd_ * dd;
    mpq_class b = rat_ * o.surd_ + surd_ * o.rat_;
    rat_ = std::move(a);
    surd_ = std::move(b);
  }
  d_ = d;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) {
  if (o.is_zero()) throw Error(Errc::division_by_zero, "division by zero scalar");
  if (o.is_rational()) {
    rat_ /= o.rat_;
    surd_ /= o.rat_;
    return *this;
  }
  return *this *= o.inverse();
}

}  // namespace zmc
