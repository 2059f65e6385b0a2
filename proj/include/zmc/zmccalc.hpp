#pragma once

#include <span>
#include <string>
#include <vector>

#include "zmc/poly.hpp"

namespace zmc {

/// Ambient pseudo-sphere K_{s,eps} = { x : <B_s x, x> = eps } in R^{nvars}, where
/// B_s = diag(-I_s, I_{nvars-s}).
///
/// (2,-1) is anti de Sitter, (1,1) de Sitter, (1,-1) hyperbolic space and
/// (0,1) the round sphere.
struct AmbientSig {
  int s = 0;
  int epsilon = 1;
  int nvars = 1;

  static AmbientSig make(int s, int epsilon, int nvars);

  /// Diagonal entry of B_s for the 0-based coordinate i.
  int metric_sign(int i) const { return i < s ? -1 : 1; }
  /// <B_s a, b>
  double inner(std::span<const double> a, std::span<const double> b) const;
  std::string name() const;

  friend bool operator==(const AmbientSig&, const AmbientSig&) = default;
};

std::vector<Poly> gradient(const Poly& f);

/// Hessian entries d^2 f / dx_i dx_j, row-major, nvars x nvars.
std::vector<Poly> hessian(const Poly& f);

/// Signature Laplacian: -sum_{i<=s} f_ii + sum_{i>s} f_ii.
Poly laplacian_sig(const Poly& f, const AmbientSig& sig);

/// Basis form sum_i b_ii <D^2 f(x) v_i, v_i> of the signature Laplacian at x.
/// The basis must satisfy <B_s v_i, v_j> = b_ij to within basis_tol.
double laplacian_in_basis(const Poly& f, std::span<const std::vector<double>> basis, const AmbientSig& sig,
                          std::span<const double> x, double basis_tol = 1e-10);

/// w = <B_s grad f, grad f>.
Poly w_poly(const Poly& f, const AmbientSig& sig);

/// Residual 2 w Lap_s(f) - <grad w, B_s grad f>. f must be homogeneous of degree >= 2.
Poly zmc_residual(const Poly& f, const AmbientSig& sig);

struct ZmcReport {
  Poly residual_g;
  bool divides = false;
  Poly quotient_h;  // meaningful iff divides
  Poly remainder;
  Poly w;
  Poly laplacian;
};

/// Residual followed by exact division by f. divides == true certifies that f
/// cuts out zero-mean-curvature hypersurfaces in both K_{s,1} and K_{s,-1}.
ZmcReport conjecture_check(const Poly& f, const AmbientSig& sig);

}  // namespace zmc
