#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "zmc/families.hpp"
#include "zmc/poly.hpp"
#include "zmc/zmccalc.hpp"

namespace zmc {

/// f together with its gradient and Hessian compiled for floating evaluation.
class HypersurfaceModel {
 public:
  HypersurfaceModel(Poly f, AmbientSig sig);

  const Poly& poly() const noexcept { return f_; }
  const AmbientSig& sig() const noexcept { return sig_; }
  int nvars() const noexcept { return sig_.nvars; }
  int degree() const noexcept { return degree_; }

  double value(std::span<const double> x) const;
  Eigen::VectorXd gradient(std::span<const double> x) const;
  Eigen::MatrixXd hessian(std::span<const double> x) const;
  /// w(x) = <B_s grad f, grad f>
  double w(std::span<const double> x) const;
  /// |w| above 1e-8 (1 + |x|^2)^(deg-1) counts as regular.
  double regularity_threshold(std::span<const double> x) const;

  Eigen::VectorXd metric_diagonal() const;

 private:
  Poly f_;
  AmbientSig sig_;
  int degree_;
  FloatPoly value_;
  std::vector<FloatPoly> grad_;
  std::vector<FloatPoly> hess_;  // upper triangle, row-major
};

struct VarietyPoint {
  std::vector<double> coords;
  double f_residual = 0.0;
  double constraint_residual = 0.0;  // <B_s x, x> - eps
  double w_value = 0.0;
  bool regular = false;
};

/// Evaluates residuals and w at coords.
VarietyPoint evaluate_point(const HypersurfaceModel& model, std::vector<double> coords);

/// True when both residuals meet |f| <= tol (1 + |x|^deg) and |<Bx,x> - eps| <= tol (1 + |x|^2).
bool on_variety(const HypersurfaceModel& model, const VarietyPoint& p, double tol = 1e-10);

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 100;
};

/// Least-norm Gauss-Newton on (f(x), <B_s x, x> - eps) = 0.
VarietyPoint newton_project(const HypersurfaceModel& model, std::span<const double> seed, NewtonOptions opts = {});

/// Columns span the Euclidean null space of the rows grad f(p) and B_s p.
Eigen::MatrixXd tangent_frame(const HypersurfaceModel& model, const VarietyPoint& p);

struct InducedMetric {
  Eigen::MatrixXd gram;
  int num_negative = 0;
  int num_positive = 0;

  bool riemannian() const { return num_negative == 0; }
  bool lorentzian() const { return num_negative == 1; }
};

/// G_ij = <B_s v_i, v_j>; throws domain error when |det G| < 1e-12.
InducedMetric induced_metric(const Eigen::MatrixXd& frame, const AmbientSig& sig);

/// nu = B_s grad f / sqrt|w|
Eigen::VectorXd gauss_map(const HypersurfaceModel& model, const VarietyPoint& p);

/// S = G^-1 H with H_ij = <D^2 f(p) v_i, v_j> / sqrt|w(p)|, in the coordinates of `frame`.
Eigen::MatrixXd shape_operator(const HypersurfaceModel& model, const VarietyPoint& p, const Eigen::MatrixXd& frame);

struct CurvatureCluster {
  double value = 0.0;
  double imag = 0.0;
  int multiplicity = 0;
  /// Signature of the induced metric restricted to the cluster's eigenvectors.
  int timelike_dims = 0;
  int spacelike_dims = 0;
};

struct CurvatureSpectrum {
  std::vector<std::complex<double>> eigenvalues;
  std::vector<CurvatureCluster> clusters;
  std::pair<int, int> metric_signature{0, 0};  // (negative, positive)
  double mean_curvature = 0.0;
  double eigenvector_condition = 1.0;
  bool defective = false;
};

CurvatureSpectrum curvature_spectrum(const HypersurfaceModel& model, const VarietyPoint& p);

/// Compares clusters against expected (value, multiplicity) pairs, allowing one
/// global sign flip. Values match when |got - want| <= rel_tol * max(1, |want|).
bool spectrum_matches(const CurvatureSpectrum& spectrum, std::span<const ExpectedCurvature> expected, double rel_tol);

/// Draws a regular point of a family's surface: closed form where the family has
/// one, otherwise Newton projection from perturbed patch points or random seeds.
VarietyPoint sample_family_point(const FamilySpec& spec, const HypersurfaceModel& model, std::uint64_t seed,
                                 NewtonOptions opts = {});

/// Regular point of an arbitrary variety by Newton from random seeds; throws
/// no_convergence after `attempts` failures.
VarietyPoint sample_variety_point(const HypersurfaceModel& model, std::uint64_t seed, int attempts = 200,
                                  NewtonOptions opts = {});

}  // namespace zmc
