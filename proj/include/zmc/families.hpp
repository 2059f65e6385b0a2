#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zmc/error.hpp"
#include "zmc/poly.hpp"
#include "zmc/zmccalc.hpp"

namespace zmc {

enum class FamilyKind {
  ads_quadric,   // ads:m,n,k
  lawson,        // lawson:k,n
  ds_quadric_a,  // ds1:m,n
  ds_quadric_b,  // ds2:m
  clifford,      // clifford:p,q
};

/// One member of a known zero-mean-curvature family.
///
/// Coordinates are laid out as (x1, x2, y, z, u) for ads, (x1, x2, x3, y, z)
/// for ds1, (x1, x2, x3, y) for ds2 and (y, z) with y in R^{p+1}, z in R^{q+1}
/// for clifford.
struct FamilySpec {
  FamilyKind kind = FamilyKind::ads_quadric;
  int a = 1;  // m | k | m | m | p
  int b = 1;  // n | n | n | - | q
  int c = 0;  // k |   |   |   |

  static FamilySpec ads(int m, int n, int k);
  static FamilySpec lawson(int k, int n);
  static FamilySpec ds1(int m, int n);
  static FamilySpec ds2(int m);
  static FamilySpec clifford(int p, int q);
  /// Parses "ads:m,n,k", "lawson:k,n", "ds1:m,n", "ds2:m" or "clifford:p,q".
  static FamilySpec parse(std::string_view text);

  /// Throws invalid_argument when the parameters leave the family.
  void validate() const;
  std::string name() const;
  std::vector<int> params() const;
  int nvars() const;
  AmbientSig sig() const;
  int degree() const;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

Poly make_poly(const FamilySpec& spec);

/// 2((x1 - x3)^k (x2 - x4)^n + (x1 + x3)^k (x2 + x4)^n) for any k, n >= 1; the
/// family itself additionally needs gcd(k, n) = 1 and n odd.
Poly lawson_polynomial(int k, int n);

// ------------------------------------------------------------ parametrized patches

enum class PatchKind { phi, rho };

/// phi(s,t) = (cosh s cosh nt, sinh s sinh kt, cosh s sinh nt, -cosh kt sinh s)
/// rho(s,t) = (cosh nt sinh s, cosh s sinh kt, sinh s sinh nt, -cosh s cosh kt)
/// T is any real type supporting cosh/sinh by argument-dependent lookup.
template <typename T>
std::array<T, 4> patch_point(PatchKind kind, int k, int n, const T& s, const T& t) {
  using std::cosh;
  using std::sinh;
  const T kt = t * k;
  const T nt = t * n;
  if (kind == PatchKind::phi) return {cosh(s) * cosh(nt), sinh(s) * sinh(kt), cosh(s) * sinh(nt), -(cosh(kt) * sinh(s))};
  return {cosh(nt) * sinh(s), cosh(s) * sinh(kt), sinh(s) * sinh(nt), -(cosh(s) * cosh(kt))};
}

/// Explicit immersion of a Lawson-type surface: phi for k < n (in K_{2,-1}),
/// rho for k > n (in K_{2,1}).
class SurfacePatch {
 public:
  SurfacePatch(PatchKind kind, int k, int n);
  static SurfacePatch for_family(const FamilySpec& spec);

  PatchKind kind() const noexcept { return kind_; }
  int k() const noexcept { return k_; }
  int n() const noexcept { return n_; }
  /// Value of <B_2 p, p> on the patch.
  int constraint_value() const noexcept { return kind_ == PatchKind::phi ? -1 : 1; }

  /// Throws domain error for |s| or |t| above 300 (hyperbolic overflow).
  std::array<double, 4> eval(double s, double t) const;

 private:
  PatchKind kind_;
  int k_;
  int n_;
};

std::array<double, 4> eval_patch(const SurfacePatch& patch, double s, double t);

// ------------------------------------------------------------- closed-form samples

/// Number of free coordinates closed_form_sample expects for the family:
/// ads (x1, x2, u...), ds1 (x1, x2, x3), ds2 (x2, x3), clifford none.
/// Lawson has no closed form and returns nullopt.
std::optional<int> free_coordinate_count(const FamilySpec& spec);

/// Point on f = 0 and <B_s p, p> = eps built from the family's closed-form
/// solution for the squared block norms; block directions come from `seed`.
/// Throws infeasible if a required squared norm is negative.
std::vector<double> closed_form_sample(const FamilySpec& spec, std::span<const double> free, std::uint64_t seed);

/// Free coordinates drawn strictly inside the feasible region.
std::vector<double> random_free_coordinates(const FamilySpec& spec, std::mt19937_64& rng);

// ------------------------------------------------------------------ expectations

struct ExpectedCurvature {
  double value = 0.0;
  int multiplicity = 0;
};

/// Principal curvatures and w on the surface predicted for a family, as
/// functions of the sampled point. Values are defined up to a global sign.
class SpectrumOracle {
 public:
  explicit SpectrumOracle(FamilySpec spec) : spec_(spec) {}

  /// False for families with no closed-form spectrum (Lawson).
  bool has_curvatures() const;
  std::vector<ExpectedCurvature> curvatures(std::span<const double> p) const;
  std::optional<double> w_on_surface(std::span<const double> p) const;

 private:
  FamilySpec spec_;
};

SpectrumOracle spectrum_oracle(const FamilySpec& spec);

/// All coprime (k, n) with n odd and k + n <= max_order.
std::vector<FamilySpec> lawson_grid(int max_order);

}  // namespace zmc
