#include "zmc/poly.hpp"

#include <algorithm>
#include <cmath>

#include "zmc/error.hpp"

namespace zmc {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
  for (int e : exps_) {
    if (e < 0) throw Error(Errc::invalid_argument, "negative exponent in monomial");
    degree_ += e;
  }
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (std::size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] += b.exps_[i];
  r.degree_ += b.degree_;
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (std::size_t i = 0; i < r.exps_.size(); ++i) r.exps_[i] -= b.exps_[i];
  r.degree_ -= b.degree_;
  return r;
}

bool GrlexDescending::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  return a.exponents() > b.exponents();
}

// -------------------------------------------------------------------- Poly

Poly::Poly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw Error(Errc::invalid_argument, "polynomial needs at least one variable");
}

Poly Poly::constant(int nvars, const QuadExt& c) {
  Poly p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 1 || index > nvars)
    throw Error(Errc::dimension, "variable x" + std::to_string(index) + " outside 1.." + std::to_string(nvars));
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  e[static_cast<std::size_t>(index - 1)] = 1;
  return monomial(Monomial(std::move(e)), QuadExt(1));
}

Poly Poly::monomial(const Monomial& m, const QuadExt& c) {
  Poly p(m.nvars());
  p.add_term(m, c);
  return p;
}

Poly Poly::from_terms(int nvars, Terms terms) {
  Poly p(nvars);
  for (auto& [m, c] : terms) {
    if (m.nvars() != nvars) throw Error(Errc::dimension, "monomial length differs from nvars");
    p.add_term(m, c);
  }
  return p;
}

int Poly::degree() const {
  if (terms_.empty()) return -1;
  return terms_.begin()->first.degree();  // grlex leads with the highest degree
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = degree();
  return terms_.rbegin()->first.degree() == d;
}

const Monomial& Poly::leading_monomial() const {
  if (terms_.empty()) throw Error(Errc::domain, "zero polynomial has no leading term");
  return terms_.begin()->first;
}

const QuadExt& Poly::leading_coefficient() const {
  if (terms_.empty()) throw Error(Errc::domain, "zero polynomial has no leading term");
  return terms_.begin()->second;
}

QuadExt Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? QuadExt{} : it->second;
}

void Poly::check_compatible(const Poly& o) const {
  if (nvars_ != o.nvars_)
    throw Error(Errc::dimension, "polynomials in " + std::to_string(nvars_) + " and " + std::to_string(o.nvars_) +
                                     " variables");
  merge_radicand(d_, o.d_);
}

void Poly::add_term(const Monomial& m, const QuadExt& c) {
  if (c.is_zero()) return;
  d_ = merge_radicand(d_, c.radicand());
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  if (d_ != 1 && std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_rational(); }))
    d_ = 1;
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  if (d_ != 1 && std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_rational(); }))
    d_ = 1;
  return *this;
}

void Poly::add_scaled_product(const QuadExt& c, const Monomial& m, const Poly& q) {
  if (c.is_zero()) return;
  for (const auto& [qm, qc] : q.terms_) add_term(m * qm, c * qc);
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_compatible(b);
  const Poly& outer = a.nterms() <= b.nterms() ? a : b;
  const Poly& inner = a.nterms() <= b.nterms() ? b : a;
  Poly r(a.nvars_);
  for (const auto& [m, c] : outer.terms_) r.add_scaled_product(c, m, inner);
  if (r.d_ != 1 &&
      std::all_of(r.terms_.begin(), r.terms_.end(), [](const auto& t) { return t.second.is_rational(); }))
    r.d_ = 1;
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const QuadExt& c) {
  if (c.is_zero()) {
    terms_.clear();
    d_ = 1;
    return *this;
  }
  d_ = merge_radicand(d_, c.radicand());
  std::uint64_t d = 1;
  for (auto& [m, v] : terms_) {
    v *= c;
    d = merge_radicand(d, v.radicand());
  }
  d_ = d;
  return *this;
}

// --------------------------------------------------------------- free ops

Poly add(const Poly& p, const Poly& q) { return p + q; }
Poly mul(const Poly& p, const Poly& q) { return p * q; }
Poly scale(const Poly& p, const QuadExt& c) { return p * c; }

Poly pow(const Poly& p, unsigned exponent) {
  Poly result = Poly::constant(p.nvars(), QuadExt(1));
  Poly base = p;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

Poly diff(const Poly& p, int var) {
  if (var < 1 || var > p.nvars())
    throw Error(Errc::dimension, "derivative index " + std::to_string(var) + " outside 1.." + std::to_string(p.nvars()));
  const auto i = static_cast<std::size_t>(var - 1);
  Poly::Terms out;
  for (const auto& [m, c] : p.terms()) {
    const int e = m[static_cast<int>(i)];
    if (e == 0) continue;
    std::vector<int> exps = m.exponents();
    exps[i] -= 1;
    out.emplace(Monomial(std::move(exps)), c * QuadExt(e));
  }
  return Poly::from_terms(p.nvars(), std::move(out));
}

DivisionResult divide(const Poly& g, const Poly& f) {
  if (f.is_zero()) throw Error(Errc::division_by_zero, "division by the zero polynomial");
  if (g.nvars() != f.nvars()) throw Error(Errc::dimension, "divide: nvars differ");
  merge_radicand(g.radicand(), f.radicand());

  const Monomial& lm = f.leading_monomial();
  const QuadExt lc_inv = f.leading_coefficient().inverse();
  Poly work = g;
  Poly quotient(g.nvars());
  Poly::Terms rem;
  while (!work.is_zero()) {
    const Monomial m = work.leading_monomial();
    const QuadExt c = work.leading_coefficient();
    if (lm.divides(m)) {
      const Monomial t = m / lm;
      const QuadExt tc = c * lc_inv;
      quotient += Poly::monomial(t, tc);
      work.add_scaled_product(-tc, t, f);
    } else {
      rem.emplace(m, c);
      work -= Poly::monomial(m, c);
    }
  }
  return {std::move(quotient), Poly::from_terms(g.nvars(), std::move(rem))};
}

QuadExt eval_exact(const Poly& p, std::span<const QuadExt> x) {
  if (static_cast<int>(x.size()) != p.nvars())
    throw Error(Errc::dimension, "eval_exact: point has " + std::to_string(x.size()) + " coordinates, expected " +
                                     std::to_string(p.nvars()));
  // powers[i][e] = x_i^e, built lazily up to the largest exponent seen
  std::vector<std::vector<QuadExt>> powers(x.size(), std::vector<QuadExt>{QuadExt(1)});
  QuadExt total;
  for (const auto& [m, c] : p.terms()) {
    QuadExt term = c;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int e = m[static_cast<int>(i)];
      if (e == 0) continue;
      auto& pw = powers[i];
      while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * x[i]);
      term *= pw[static_cast<std::size_t>(e)];
    }
    total += term;
  }
  return total;
}

double eval_float(const Poly& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.nvars())
    throw Error(Errc::dimension, "eval_float: point has " + std::to_string(x.size()) + " coordinates, expected " +
                                     std::to_string(p.nvars()));
  return FloatPoly(p)(x);
}

Poly compose_linear(const Poly& p, const ExactMatrix& m) {
  const int n = p.nvars();
  if (m.rows() != static_cast<std::size_t>(n) || m.cols() != static_cast<std::size_t>(n))
    throw Error(Errc::dimension, "compose_linear: matrix must be nvars x nvars");
  std::vector<std::vector<Poly>> powers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Poly row(n);
    for (int j = 0; j < n; ++j) {
      const auto& a = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (!a.is_zero()) row += Poly::variable(n, j + 1) * a;
    }
    powers[static_cast<std::size_t>(i)] = {Poly::constant(n, QuadExt(1)), std::move(row)};
  }
  Poly out(n);
  for (const auto& [mono, c] : p.terms()) {
    Poly term = Poly::constant(n, c);
    for (int i = 0; i < n; ++i) {
      const int e = mono[i];
      if (e == 0) continue;
      auto& pw = powers[static_cast<std::size_t>(i)];
      while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * pw[1]);
      term *= pw[static_cast<std::size_t>(e)];
    }
    out += term;
  }
  return out;
}

// ------------------------------------------------------------- rendering

namespace {

std::string monomial_text(const Monomial& m) {
  std::string s;
  for (int i = 0; i < m.nvars(); ++i) {
    const int e = m[i];
    if (e == 0) continue;
    if (!s.empty()) s += ' ';
    s += 'x' + std::to_string(i + 1);
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

std::string term_text(const Monomial& m, const QuadExt& c) {
  if (m.degree() == 0) return c.to_string();
  const std::string mono = monomial_text(m);
  if (c.is_one()) return mono;
  if (c == QuadExt(-1)) return "-" + mono;
  return c.to_string() + " " + mono;
}

}  // namespace

std::string render(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    std::string t = term_text(m, c);
    if (out.empty()) {
      out = std::move(t);
    } else if (t.front() == '-') {
      out += " - ";
      out.append(t, 1);
    } else {
      out += " + ";
      out += t;
    }
  }
  return out;
}

// -------------------------------------------------------------- FloatPoly

FloatPoly::FloatPoly(const Poly& p) : nvars_(p.nvars()) {
  coeffs_.reserve(p.nterms());
  exps_.reserve(p.nterms() * static_cast<std::size_t>(nvars_));
  for (const auto& [m, c] : p.terms()) {
    coeffs_.push_back(c.to_double());
    for (int i = 0; i < nvars_; ++i) {
      exps_.push_back(m[i]);
      max_exp_ = std::max(max_exp_, m[i]);
    }
  }
}

double FloatPoly::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_) throw Error(Errc::dimension, "FloatPoly: wrong point dimension");
  const auto stride = static_cast<std::size_t>(max_exp_ + 1);
  std::vector<double> pw(static_cast<std::size_t>(nvars_) * stride);
  for (std::size_t i = 0; i < x.size(); ++i) {
    pw[i * stride] = 1.0;
    for (std::size_t e = 1; e < stride; ++e) pw[i * stride + e] = pw[i * stride + e - 1] * x[i];
  }
  double total = 0.0;
  const auto nv = static_cast<std::size_t>(nvars_);
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double v = coeffs_[t];
    const int* e = &exps_[t * nv];
    for (std::size_t i = 0; i < nv; ++i)
      if (e[i] != 0) v *= pw[i * stride + static_cast<std::size_t>(e[i])];
    total += v;
  }
  return total;
}

}  // namespace zmc
