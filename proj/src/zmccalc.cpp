#include "zmc/zmccalc.hpp"

#include <cmath>

#include "zmc/error.hpp"

namespace zmc {

AmbientSig AmbientSig::make(int s, int epsilon, int nvars) {
  if (nvars < 1) throw Error(Errc::invalid_argument, "signature needs nvars >= 1");
  if (s < 0 || s >= nvars)
    throw Error(Errc::invalid_argument, "signature index s=" + std::to_string(s) + " must lie in 0.." +
                                            std::to_string(nvars - 1));
  if (epsilon != 1 && epsilon != -1) throw Error(Errc::invalid_argument, "epsilon must be +1 or -1");
  return AmbientSig{s, epsilon, nvars};
}

double AmbientSig::inner(std::span<const double> a, std::span<const double> b) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += metric_sign(static_cast<int>(i)) * a[i] * b[i];
  return acc;
}

std::string AmbientSig::name() const { return std::to_string(s) + "," + std::to_string(epsilon); }

namespace {

void check_dims(const Poly& f, const AmbientSig& sig) {
  if (f.nvars() != sig.nvars)
    throw Error(Errc::dimension, "polynomial has " + std::to_string(f.nvars()) + " variables, signature expects " +
                                     std::to_string(sig.nvars));
}

Poly residual_from_parts(const Poly& f, const AmbientSig& sig, const Poly& w, const Poly& lap) {
  Poly g = w * lap * QuadExt(2);
  for (int i = 1; i <= f.nvars(); ++i) {
    Poly t = diff(w, i) * diff(f, i);
    if (sig.metric_sign(i - 1) < 0)
      g += t;
    else
      g -= t;
  }
  return g;
}

}  // namespace

std::vector<Poly> gradient(const Poly& f) {
  std::vector<Poly> g;
  g.reserve(static_cast<std::size_t>(f.nvars()));
  for (int i = 1; i <= f.nvars(); ++i) g.push_back(diff(f, i));
  return g;
}

std::vector<Poly> hessian(const Poly& f) {
  const int n = f.nvars();
  std::vector<Poly> grad = gradient(f);
  std::vector<Poly> h(static_cast<std::size_t>(n * n), Poly(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Poly d = diff(grad[static_cast<std::size_t>(i)], j + 1);
      h[static_cast<std::size_t>(j * n + i)] = d;
      h[static_cast<std::size_t>(i * n + j)] = std::move(d);
    }
  return h;
}

Poly laplacian_sig(const Poly& f, const AmbientSig& sig) {
  check_dims(f, sig);
  Poly lap(f.nvars());
  for (int i = 1; i <= f.nvars(); ++i) {
    Poly second = diff(diff(f, i), i);
    if (sig.metric_sign(i - 1) < 0)
      lap -= second;
    else
      lap += second;
  }
  return lap;
}

double laplacian_in_basis(const Poly& f, std::span<const std::vector<double>> basis, const AmbientSig& sig,
                          std::span<const double> x, double basis_tol) {
  check_dims(f, sig);
  const auto n = static_cast<std::size_t>(f.nvars());
  if (basis.size() != n || x.size() != n) throw Error(Errc::dimension, "basis and point must have nvars entries");
  for (const auto& v : basis)
    if (v.size() != n) throw Error(Errc::dimension, "basis vector of wrong length");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double expected = i == j ? sig.metric_sign(static_cast<int>(i)) : 0.0;
      const double got = sig.inner(basis[i], basis[j]);
      if (std::abs(got - expected) > basis_tol)
        throw Error(Errc::invalid_argument, "basis is not pseudo-orthonormal: <B v" + std::to_string(i + 1) +
                                                ", v" + std::to_string(j + 1) + "> = " + std::to_string(got));
    }

  const std::vector<Poly> hess = hessian(f);
  std::vector<double> d2(n * n);
  for (std::size_t k = 0; k < n * n; ++k) d2[k] = eval_float(hess[k], x);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = basis[i];
    double q = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) q += d2[a * n + b] * v[a] * v[b];
    total += sig.metric_sign(static_cast<int>(i)) * q;
  }
  return total;
}

Poly w_poly(const Poly& f, const AmbientSig& sig) {
  check_dims(f, sig);
  Poly w(f.nvars());
  for (int i = 1; i <= f.nvars(); ++i) {
    const Poly fi = diff(f, i);
    Poly sq = fi * fi;
    if (sig.metric_sign(i - 1) < 0)
      w -= sq;
    else
      w += sq;
  }
  return w;
}

Poly zmc_residual(const Poly& f, const AmbientSig& sig) {
  check_dims(f, sig);
  if (!f.is_homogeneous()) throw Error(Errc::domain, "zmc_residual: polynomial is not homogeneous");
  if (f.degree() < 2) throw Error(Errc::domain, "zmc_residual: degree must be at least 2");
  return residual_from_parts(f, sig, w_poly(f, sig), laplacian_sig(f, sig));
}

ZmcReport conjecture_check(const Poly& f, const AmbientSig& sig) {
  if (f.is_zero()) throw Error(Errc::domain, "conjecture_check: zero polynomial");
  check_dims(f, sig);
  if (!f.is_homogeneous()) throw Error(Errc::domain, "conjecture_check: polynomial is not homogeneous");
  if (f.degree() < 2) throw Error(Errc::domain, "conjecture_check: degree must be at least 2");

  ZmcReport r;
  r.w = w_poly(f, sig);
  r.laplacian = laplacian_sig(f, sig);
  r.residual_g = residual_from_parts(f, sig, r.w, r.laplacian);
  auto [q, rem] = divide(r.residual_g, f);
  r.divides = rem.is_zero();
  r.quotient_h = r.divides ? std::move(q) : Poly(f.nvars());
  r.remainder = std::move(rem);
  return r;
}

}  // namespace zmc
