// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "zmc/error.hpp"
#include "zmc/families.hpp"
#include "zmc/geometry.hpp"
#include "zmc/quadform.hpp"
#include "zmc/zmccalc.hpp"

using namespace zmc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& what) {
    if (pass) detail << what;
    pass = false;
  }
};

struct Criterion {
  int id;
  const char* title;
  double time_budget;  // seconds, 0 for none
  std::function<void(Outcome&)> body;
};

FamilySpec family(const char* text) { return FamilySpec::parse(text); }

const std::vector<FamilySpec>& spectrum_families() {
  static const std::vector<FamilySpec> f{family("ads:1,1,0"), family("ads:2,3,0"), family("ads:1,1,1"),
                                         family("ads:2,3,2"), family("ds1:1,2"),   family("ds1:2,2"),
                                         family("ds2:1"),     family("ds2:4")};
  return f;
}

constexpr int kSamples = 50;

double closed_form_w(const FamilySpec& spec, const std::vector<double>& p) {
  switch (spec.kind) {
    case FamilyKind::ads_quadric: {
      double u2 = 0.0;
      for (int i = 0; i < spec.c; ++i) u2 += p[std::size_t(2 + spec.a + spec.b + i)] * p[std::size_t(2 + spec.a + spec.b + i)];
      return -4.0 * (1.0 + u2);
    }
    case FamilyKind::ds_quadric_a: return 4.0 * (1.0 + p[0] * p[0]);
    default: return 4.0;
  }
}

void residual_identities(Outcome& out) {
  std::vector<FamilySpec> all;
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n) {
      for (int k = 0; k <= 3; ++k) all.push_back(FamilySpec::ads(m, n, k));
      all.push_back(FamilySpec::ds1(m, n));
    }
  for (int m = 1; m <= 6; ++m) all.push_back(FamilySpec::ds2(m));
  for (const auto& spec : all) {
    const ZmcReport r = conjecture_check(make_poly(spec), spec.sig());
    if (!r.divides || !r.remainder.is_zero() || r.quotient_h != Poly::constant(spec.nvars(), QuadExt(-16)))
      out.fail(spec.name() + " does not give h = -16");
  }
  out.detail << all.size() << " families";
}

void lawson_residuals(Outcome& out) {
  const auto grid = lawson_grid(9);
  for (const auto& spec : grid)
    for (int eps : {-1, 1})
      if (!conjecture_check(make_poly(spec), AmbientSig::make(2, eps, 4)).divides)
        out.fail(spec.name() + " does not divide");
  const std::pair<int, int> closed_form[] = {{2, 1}, {4, 1}, {1, 3}, {1, 5}, {2, 3}, {4, 3}, {2, 5}};
  for (const auto& [k, n] : closed_form) {
    const FamilySpec spec = FamilySpec::lawson(k, n);
    const ZmcReport r = conjecture_check(make_poly(spec), spec.sig());
    if (!r.divides || r.quotient_h != oracle::lawson_h(k, n)) out.fail(spec.name() + " h differs from the formula");
  }
  if (out.pass) out.detail << grid.size() << " grid families, 7 closed-form quotients";
}

void clifford_regression(Outcome& out) {
  int count = 0;
  for (int p = 1; p <= 5; ++p)
    for (int q = 1; p + q <= 6; ++q) {
      const int nvars = p + q + 2;
      Poly f(nvars);
      for (int i = 1; i <= p + 1; ++i) f += oracle::cst(nvars, QuadExt(q)) * oracle::var(nvars, i) * oracle::var(nvars, i);
      for (int i = p + 2; i <= nvars; ++i) f += oracle::cst(nvars, QuadExt(-p)) * oracle::var(nvars, i) * oracle::var(nvars, i);
      const FamilySpec spec = FamilySpec::clifford(p, q);
      if (make_poly(spec) != f) out.fail(spec.name() + " polynomial differs");
      const ZmcReport r = conjecture_check(f, AmbientSig::make(0, 1, nvars));
      // frozen: h = -16 p q
      if (!r.divides || r.quotient_h != Poly::constant(nvars, QuadExt(-16L * p * q)))
        out.fail(spec.name() + " regression mismatch");
      ++count;
    }
  if (out.pass) out.detail << count << " families";
}

struct SampledFamily {
  FamilySpec spec;
  HypersurfaceModel model;
  std::vector<VarietyPoint> points;
};

const std::vector<SampledFamily>& sampled() {
  static const std::vector<SampledFamily> data = [] {
    std::vector<SampledFamily> v;
    for (const auto& spec : spectrum_families()) {
      SampledFamily s{spec, HypersurfaceModel(make_poly(spec), spec.sig()), {}};
      for (int i = 1; i <= kSamples; ++i) s.points.push_back(sample_family_point(spec, s.model, 1000 + i));
      v.push_back(std::move(s));
    }
    return v;
  }();
  return data;
}

void spectra(Outcome& out) {
  double worst_h = 0.0;
  for (const auto& s : sampled()) {
    const SpectrumOracle oracle = spectrum_oracle(s.spec);
    for (const auto& p : s.points) {
      const CurvatureSpectrum sp = curvature_spectrum(s.model, p);
      worst_h = std::max(worst_h, std::abs(sp.mean_curvature));
      if (!spectrum_matches(sp, oracle.curvatures(p.coords), 1e-6)) out.fail(s.spec.name() + " spectrum mismatch");
      if (std::abs(sp.mean_curvature) > 1e-8) out.fail(s.spec.name() + " |H| above 1e-8");
    }
  }
  out.detail << spectrum_families().size() << " families x " << kSamples << " points, max |H| " << worst_h;
}

void w_closed_forms(Outcome& out) {
  double worst = 0.0;
  for (const auto& s : sampled())
    for (const auto& p : s.points) {
      const double want = closed_form_w(s.spec, p.coords);
      const double err = std::abs(p.w_value - want) / std::abs(want);
      worst = std::max(worst, err);
      if (err > 1e-10) out.fail(s.spec.name() + " w mismatch");
    }
  out.detail << "max rel err " << worst;
}

void fundamental_forms(Outcome& out) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Real h("1e-20");
  double worst = 0.0;
  for (const auto& [kind, k, n] : {std::tuple{PatchKind::phi, 2, 3}, std::tuple{PatchKind::rho, 5, 3}})
    for (int i = 0; i < 100; ++i) {
      const double s = u(rng), t = u(rng);
      const auto fd = oracle::patch_fundamental_form_fd<Real>(kind, k, n, Real(s), Real(t), h);
      const auto want = oracle::patch_fundamental_form(kind, k, n, s);
      for (int c = 0; c < 3; ++c) {
        const double err = oracle::rel_err(fd[std::size_t(c)].convert_to<double>(), want[std::size_t(c)]);
        worst = std::max(worst, err);
        if (err > 1e-6) out.fail(std::string(kind == PatchKind::phi ? "phi" : "rho") + " form mismatch");
      }
    }
  out.detail << "200 parameter pairs, max rel err " << worst;
}

void signature_gates(Outcome& out) {
  for (const auto& s : sampled()) {
    const bool ads = s.spec.kind == FamilyKind::ads_quadric;
    const Eigen::VectorXd b = s.model.metric_diagonal();
    for (const auto& p : s.points) {
      const Eigen::MatrixXd frame = tangent_frame(s.model, p);
      const InducedMetric g = induced_metric(frame, s.spec.sig());
      const int dim = s.spec.nvars() - 2;
      if (g.num_negative != (ads ? 0 : 1) || g.num_positive != dim - g.num_negative)
        out.fail(s.spec.name() + " wrong induced signature");
      if (ads) continue;
      const bool first = s.spec.kind == FamilyKind::ds_quadric_a;
      const Eigen::VectorXd v =
          first ? oracle::ds1_zero_direction(p.coords) : oracle::ds2_sqrt_m_direction(s.spec, p.coords);
      const Eigen::VectorXd c = oracle::frame_coordinates(frame, v);
      const Eigen::MatrixXd shape = shape_operator(s.model, p, frame);
      const double kappa = first ? 0.0 : std::sqrt(double(s.spec.a));
      const double gap = std::min((shape * c - kappa * c).norm(), (shape * c + kappa * c).norm());
      if ((frame * c - v).norm() > 1e-10 * v.norm() || gap > 1e-8 * c.norm())
        out.fail(s.spec.name() + " oracle direction is not a principal direction");
      if (v.dot(b.cwiseProduct(v)) >= 0.0) out.fail(s.spec.name() + " principal direction is not time-like");
    }
  }
  if (out.pass) out.detail << "all " << spectrum_families().size() * kSamples << " samples";
}

void laplacian_in_basis_check(Outcome& out) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int s = trial % 3;
    const int nvars = 3 + (trial / 3) % 4;
    const AmbientSig sig = AmbientSig::make(s, 1, nvars);
    const Poly f = oracle::random_poly(rng, nvars, 4, 8);
    const auto basis = oracle::random_pseudo_orthonormal_basis(rng, sig);
    std::vector<double> x(static_cast<std::size_t>(nvars));
    for (auto& xi : x) xi = coord(rng);
    const double got = laplacian_in_basis(f, basis, sig, x);
    const double want = eval_float(laplacian_sig(f, sig), x);
    const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
    worst = std::max(worst, err);
    if (err > 1e-8) out.fail("basis and coordinate Laplacians differ");
  }
  out.detail << "200 triples, max rel err " << worst;
}

void classification_round_trip(Outcome& out) {
  std::mt19937_64 rng(9);
  int count = 0;
  for (int total = 2; total <= 6; ++total)
    for (int m = 1; m < total; ++m)
      for (int n = 1; m + n <= total; ++n) {
        const FamilySpec spec = FamilySpec::ads(m, n, total - m - n);
        const Poly f = make_poly(spec);
        for (int trial = 0; trial < 20; ++trial) {
          const ExactMatrix iso = oracle::random_isometry(rng, spec.sig(), 6);
          if (!oracle::is_isometry(iso, spec.sig())) out.fail("generator produced a non-isometry");
          const Classification c = classify_candidate(compose_linear(f, iso), spec.sig());
          if (c.verdict != Verdict::matches_ads || !c.match || !(*c.match == spec))
            out.fail(spec.name() + " not re-identified");
          ++count;
        }
      }
  out.detail << count << " transformed quadrics";
}

void shape_operator_fd(Outcome& out) {
  std::vector<FamilySpec> families = spectrum_families();
  for (const char* extra : {"lawson:2,3", "lawson:5,3", "lawson:1,3", "clifford:1,2"}) families.push_back(family(extra));
  double worst = 0.0;
  for (const auto& spec : families) {
    const HypersurfaceModel model(make_poly(spec), spec.sig());
    for (int i = 1; i <= 20; ++i) {
      const VarietyPoint p = sample_family_point(spec, model, 5000 + i);
      const Eigen::MatrixXd frame = tangent_frame(model, p);
      const Eigen::MatrixXd analytic = frame * shape_operator(model, p, frame);
      const Eigen::MatrixXd fd = oracle::gauss_map_derivative_fd(model, p, frame);
      const double err = (analytic - fd).cwiseAbs().maxCoeff() / std::max(1.0, analytic.cwiseAbs().maxCoeff());
      worst = std::max(worst, err);
      if (err > 1e-4) out.fail(spec.name() + " finite differences disagree");
    }
  }
  out.detail << families.size() << " families x 20 points, max rel err " << worst;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "residual identities h = -16", 5.0, residual_identities},
      {2, "Lawson residuals and closed-form quotients", 60.0, lawson_residuals},
      {3, "Clifford regression", 0.0, clifford_regression},
      {4, "spectra against oracles", 30.0, spectra},
      {5, "w closed forms on the surface", 0.0, w_closed_forms},
      {6, "first fundamental forms of phi and rho", 0.0, fundamental_forms},
      {7, "signature gates", 0.0, signature_gates},
      {8, "Laplacian in a pseudo-orthonormal basis", 0.0, laplacian_in_basis_check},
      {9, "classification round trip", 0.0, classification_round_trip},
      {10, "finite-difference shape operator", 0.0, shape_operator_fd},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_budget > 0.0 && secs > c.time_budget) out.fail("over the time budget");
    failures += out.pass ? 0 : 1;
    std::printf("%s  [%2d] %-42s %8.3f s  %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                out.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
