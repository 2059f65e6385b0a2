#include "zmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zmc/error.hpp"

namespace zmc {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

void require_regular(const HypersurfaceModel& model, const VarietyPoint& p) {
  if (!(std::abs(p.w_value) > model.regularity_threshold(p.coords)))
    throw Error(Errc::domain, "point is not regular: |w| = " + std::to_string(std::abs(p.w_value)) +
                                  " is below the regularity threshold");
}

}  // namespace

// --------------------------------------------------------- HypersurfaceModel

HypersurfaceModel::HypersurfaceModel(Poly f, AmbientSig sig)
    : f_(std::move(f)), sig_(sig), degree_(f_.degree()), value_(f_) {
  if (f_.nvars() != sig_.nvars) throw Error(Errc::dimension, "model: polynomial and signature disagree on nvars");
  if (f_.is_zero()) throw Error(Errc::domain, "model: zero polynomial");
  const int n = f_.nvars();
  std::vector<Poly> g = zmc::gradient(f_);
  for (const auto& gi : g) grad_.emplace_back(gi);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) hess_.emplace_back(diff(g[static_cast<std::size_t>(i)], j + 1));
}

double HypersurfaceModel::value(std::span<const double> x) const { return value_(x); }

Eigen::VectorXd HypersurfaceModel::gradient(std::span<const double> x) const {
  Eigen::VectorXd g(nvars());
  for (int i = 0; i < nvars(); ++i) g(i) = grad_[static_cast<std::size_t>(i)](x);
  return g;
}

Eigen::MatrixXd HypersurfaceModel::hessian(std::span<const double> x) const {
  const int n = nvars();
  Eigen::MatrixXd h(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = hess_[k++](x);
      h(i, j) = v;
      h(j, i) = v;
    }
  return h;
}

Eigen::VectorXd HypersurfaceModel::metric_diagonal() const {
  Eigen::VectorXd b(nvars());
  for (int i = 0; i < nvars(); ++i) b(i) = sig_.metric_sign(i);
  return b;
}

double HypersurfaceModel::w(std::span<const double> x) const {
  const Eigen::VectorXd g = gradient(x);
  return g.dot(metric_diagonal().cwiseProduct(g));
}

double HypersurfaceModel::regularity_threshold(std::span<const double> x) const {
  return 1e-8 * std::pow(1.0 + norm2(x), std::max(degree_ - 1, 0));
}

// ------------------------------------------------------------------- points

VarietyPoint evaluate_point(const HypersurfaceModel& model, std::vector<double> coords) {
  if (static_cast<int>(coords.size()) != model.nvars()) throw Error(Errc::dimension, "point has wrong dimension");
  VarietyPoint p;
  p.f_residual = model.value(coords);
  double q = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) q += model.sig().metric_sign(static_cast<int>(i)) * coords[i] * coords[i];
  p.constraint_residual = q - model.sig().epsilon;
  p.w_value = model.w(coords);
  p.regular = std::abs(p.w_value) > model.regularity_threshold(coords);
  p.coords = std::move(coords);
  return p;
}

bool on_variety(const HypersurfaceModel& model, const VarietyPoint& p, double tol) {
  const double r2 = norm2(p.coords);
  return std::abs(p.f_residual) <= tol * (1.0 + std::pow(std::sqrt(r2), model.degree())) &&
         std::abs(p.constraint_residual) <= tol * (1.0 + r2);
}

VarietyPoint newton_project(const HypersurfaceModel& model, std::span<const double> seed, NewtonOptions opts) {
  if (static_cast<int>(seed.size()) != model.nvars()) throw Error(Errc::dimension, "newton seed has wrong dimension");
  if (!(opts.tol > 0.0)) throw Error(Errc::invalid_argument, "newton tolerance must be positive");
  for (double v : seed)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "newton seed must be finite");

  const Eigen::VectorXd bdiag = model.metric_diagonal();
  std::vector<double> x(seed.begin(), seed.end());
  const auto step = [&](std::vector<double>& y, const VarietyPoint& p) {
    const Eigen::VectorXd g = model.gradient(y);
    const Eigen::VectorXd c = 2.0 * bdiag.cwiseProduct(as_vector(y));
    const double gg = g.squaredNorm();
    const double cc = c.squaredNorm();
    const double gc = g.dot(c);
    const double det = gg * cc - gc * gc;
    if (gg < 1e-28 || cc < 1e-28 || det <= 1e-14 * gg * cc)
      throw Error(Errc::rank_deficient, "newton: Jacobian rank < 2 (gradient of f parallel to B x or vanishing)");
    // least-norm step J^T (J J^T)^-1 F
    const double l1 = (cc * p.f_residual - gc * p.constraint_residual) / det;
    const double l2 = (gg * p.constraint_residual - gc * p.f_residual) / det;
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] -= l1 * g(static_cast<Eigen::Index>(i)) + l2 * c(static_cast<Eigen::Index>(i));
  };
  // scaled residual used to decide whether a polishing step still helps
  const auto size = [&](const VarietyPoint& p) {
    double r2 = 0.0;
    for (double v : p.coords) r2 += v * v;
    return std::abs(p.f_residual) / (1.0 + std::pow(r2, 0.5 * model.degree())) +
           std::abs(p.constraint_residual) / (1.0 + r2);
  };
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    VarietyPoint p = evaluate_point(model, x);
    if (on_variety(model, p, opts.tol)) {
      for (int polish = 0; polish < 3 && size(p) > 0.0; ++polish) {
        std::vector<double> y = x;
        step(y, p);
        VarietyPoint q = evaluate_point(model, y);
        if (!(size(q) < size(p))) break;
        x = std::move(y);
        p = std::move(q);
      }
      return p;
    }
    if (iter == opts.max_iter) break;
    step(x, p);
    for (double v : x)
      if (!std::isfinite(v)) throw Error(Errc::no_convergence, "newton diverged");
  }
  throw Error(Errc::no_convergence, "newton: no convergence in " + std::to_string(opts.max_iter) + " iterations");
}

// ----------------------------------------------------------------- geometry

Eigen::MatrixXd tangent_frame(const HypersurfaceModel& model, const VarietyPoint& p) {
  require_regular(model, p);
  const int n = model.nvars();
  Eigen::MatrixXd rows(2, n);
  rows.row(0) = model.gradient(p.coords).transpose();
  rows.row(1) = model.metric_diagonal().cwiseProduct(as_vector(p.coords)).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(1) <= 1e-12 * sv(0))
    throw Error(Errc::internal, "tangent_frame: grad f is parallel to B_s p at a regular point");
  return svd.matrixV().rightCols(n - 2);
}

InducedMetric induced_metric(const Eigen::MatrixXd& frame, const AmbientSig& sig) {
  Eigen::VectorXd b(frame.rows());
  for (Eigen::Index i = 0; i < frame.rows(); ++i) b(i) = sig.metric_sign(static_cast<int>(i));
  InducedMetric im;
  im.gram = frame.transpose() * b.asDiagonal() * frame;
  if (std::abs(im.gram.determinant()) < 1e-12)
    throw Error(Errc::domain, "degenerate induced metric (|det G| < 1e-12)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im.gram, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) < 0)
      ++im.num_negative;
    else
      ++im.num_positive;
  }
  return im;
}

Eigen::VectorXd gauss_map(const HypersurfaceModel& model, const VarietyPoint& p) {
  require_regular(model, p);
  const Eigen::VectorXd g = model.gradient(p.coords);
  return model.metric_diagonal().cwiseProduct(g) / std::sqrt(std::abs(model.w(p.coords)));
}

Eigen::MatrixXd shape_operator(const HypersurfaceModel& model, const VarietyPoint& p, const Eigen::MatrixXd& frame) {
  require_regular(model, p);
  const InducedMetric im = induced_metric(frame, model.sig());
  const Eigen::MatrixXd h =
      frame.transpose() * model.hessian(p.coords) * frame / std::sqrt(std::abs(model.w(p.coords)));
  return im.gram.partialPivLu().solve(h);
}

CurvatureSpectrum curvature_spectrum(const HypersurfaceModel& model, const VarietyPoint& p) {
  const Eigen::MatrixXd frame = tangent_frame(model, p);
  const InducedMetric im = induced_metric(frame, model.sig());
  const Eigen::MatrixXd s = shape_operator(model, p, frame);
  const auto dim = s.rows();

  CurvatureSpectrum out;
  out.metric_signature = {im.num_negative, im.num_positive};
  out.mean_curvature = s.trace() / static_cast<double>(dim);

  Eigen::EigenSolver<Eigen::MatrixXd> es(s, true);
  if (es.info() != Eigen::Success) throw Error(Errc::no_convergence, "eigenvalue QR iteration did not converge");
  const Eigen::VectorXcd ev = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs);
    const auto& sv = svd.singularValues();
    out.eigenvector_condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    out.defective = !(out.eigenvector_condition <= 1e8);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });
  for (auto i : order) out.eigenvalues.push_back(ev(i));

  const double spread = out.eigenvalues.back().real() - out.eigenvalues.front().real();
  const double merge_tol = std::max(1e-6 * spread, 1e-9);
  const Eigen::VectorXd bdiag = model.metric_diagonal();

  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && std::abs(ev(order[end]) - ev(order[end - 1])) <= merge_tol) ++end;
    CurvatureCluster c;
    c.multiplicity = static_cast<int>(end - start);
    Eigen::MatrixXd e(frame.rows(), c.multiplicity);
    for (std::size_t i = start; i < end; ++i) {
      c.value += ev(order[i]).real();
      c.imag += ev(order[i]).imag();
      e.col(static_cast<Eigen::Index>(i - start)) = frame * vecs.col(order[i]).real();
    }
    c.value /= c.multiplicity;
    c.imag /= c.multiplicity;
    if (std::abs(c.imag) <= merge_tol) {
      const Eigen::MatrixXd gc = e.transpose() * bdiag.asDiagonal() * e;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(0.5 * (gc + gc.transpose()), Eigen::EigenvaluesOnly);
      const double scale = std::max(ges.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
      for (Eigen::Index i = 0; i < ges.eigenvalues().size(); ++i) {
        const double g = ges.eigenvalues()(i);
        if (g < -1e-12 * scale) ++c.timelike_dims;
        if (g > 1e-12 * scale) ++c.spacelike_dims;
      }
    }
    out.clusters.push_back(c);
    start = end;
  }
  return out;
}

bool spectrum_matches(const CurvatureSpectrum& spectrum, std::span<const ExpectedCurvature> expected, double rel_tol) {
  if (spectrum.defective) return false;
  int total = 0;
  for (const auto& e : expected) total += e.multiplicity;
  int have = 0;
  for (const auto& c : spectrum.clusters) have += c.multiplicity;
  if (total != have) return false;

  for (double sign : {1.0, -1.0}) {
    std::vector<bool> used(spectrum.clusters.size(), false);
    bool ok = true;
    for (const auto& e : expected) {
      const double want = sign * e.value;
      bool found = false;
      for (std::size_t i = 0; i < spectrum.clusters.size(); ++i) {
        const auto& c = spectrum.clusters[i];
        if (used[i] || c.multiplicity != e.multiplicity) continue;
        if (std::abs(c.imag) > rel_tol) continue;
        if (std::abs(c.value - want) <= rel_tol * std::max(1.0, std::abs(want))) {
          used[i] = true;
          found = true;
          break;
        }
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (ok && std::all_of(used.begin(), used.end(), [](bool u) { return u; })) return true;
  }
  return false;
}

// ----------------------------------------------------------------- sampling

VarietyPoint sample_variety_point(const HypersurfaceModel& model, std::uint64_t seed, int attempts,
                                  NewtonOptions opts) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int eps = model.sig().epsilon;
  for (int a = 0; a < attempts; ++a) {
    std::vector<double> x(static_cast<std::size_t>(model.nvars()));
    for (auto& v : x) v = normal(rng);
    double q = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) q += model.sig().metric_sign(static_cast<int>(i)) * x[i] * x[i];
    if (q * eps > 0.0)
      for (auto& v : x) v /= std::sqrt(std::abs(q));
    try {
      VarietyPoint p = newton_project(model, x, opts);
      if (p.regular) return p;
    } catch (const Error& e) {
      if (e.code() != Errc::no_convergence && e.code() != Errc::rank_deficient) throw;
    }
  }
  throw Error(Errc::no_convergence,
              "no regular point found after " + std::to_string(attempts) + " Newton attempts");
}

VarietyPoint sample_family_point(const FamilySpec& spec, const HypersurfaceModel& model, std::uint64_t seed,
                                 NewtonOptions opts) {
  std::mt19937_64 rng(seed);
  if (free_coordinate_count(spec)) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const auto free = random_free_coordinates(spec, rng);
      VarietyPoint p = evaluate_point(model, closed_form_sample(spec, free, rng()));
      if (p.regular) return p;
    }
    throw Error(Errc::no_convergence, spec.name() + ": closed-form sampler produced no regular point");
  }
  if (spec.kind == FamilyKind::lawson && spec.a != spec.b) {
    const SurfacePatch patch = SurfacePatch::for_family(spec);
    std::uniform_real_distribution<double> param(-1.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1e-3);
    for (int attempt = 0; attempt < 100; ++attempt) {
      const auto base = patch.eval(param(rng), param(rng));
      std::vector<double> x(base.begin(), base.end());
      for (auto& v : x) v += noise(rng) * (1.0 + std::abs(v));
      try {
        VarietyPoint p = newton_project(model, x, opts);
        if (p.regular) return p;
      } catch (const Error& e) {
        if (e.code() != Errc::no_convergence && e.code() != Errc::rank_deficient) throw;
      }
    }
    throw Error(Errc::no_convergence, spec.name() + ": no regular point near the patch");
  }
  return sample_variety_point(model, rng(), 200, opts);
}

}  // namespace zmc
