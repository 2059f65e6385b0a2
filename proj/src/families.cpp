#include "zmc/families.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace zmc {

namespace {

[[noreturn]] void bad_family(const std::string& what) { throw Error(Errc::invalid_argument, what); }

// sum of x_i^2 over the 1-based index range [first, first + count)
Poly block_norm2(int nvars, int first, int count) {
  Poly acc(nvars);
  for (int i = first; i < first + count; ++i) {
    Poly v = Poly::variable(nvars, i);
    acc += v * v;
  }
  return acc;
}

Poly var(int nvars, int i) { return Poly::variable(nvars, i); }

std::vector<int> parse_ints(std::string_view body, std::string_view full) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string_view item = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    int v = 0;
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last)
      bad_family("malformed family string '" + std::string(full) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// unit vector of the given dimension drawn from the rotation-invariant distribution
std::vector<double> random_direction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    double n2 = 0.0;
    for (auto& x : v) {
      x = normal(rng);
      n2 += x * x;
    }
    if (n2 < 1e-12) continue;
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= inv;
    return v;
  }
}

void put_block(std::vector<double>& p, int first0, double norm2, std::mt19937_64& rng, int dim) {
  const double r = std::sqrt(norm2);
  const auto dir = random_direction(dim, rng);
  for (int i = 0; i < dim; ++i) p[static_cast<std::size_t>(first0 + i)] = r * dir[static_cast<std::size_t>(i)];
}

[[noreturn]] void infeasible(const std::string& what) { throw Error(Errc::infeasible, what); }

}  // namespace

// --------------------------------------------------------------- FamilySpec

FamilySpec FamilySpec::ads(int m, int n, int k) {
  FamilySpec s{FamilyKind::ads_quadric, m, n, k};
  s.validate();
  return s;
}

FamilySpec FamilySpec::lawson(int k, int n) {
  FamilySpec s{FamilyKind::lawson, k, n, 0};
  s.validate();
  return s;
}

FamilySpec FamilySpec::ds1(int m, int n) {
  FamilySpec s{FamilyKind::ds_quadric_a, m, n, 0};
  s.validate();
  return s;
}

FamilySpec FamilySpec::ds2(int m) {
  FamilySpec s{FamilyKind::ds_quadric_b, m, 0, 0};
  s.validate();
  return s;
}

FamilySpec FamilySpec::clifford(int p, int q) {
  FamilySpec s{FamilyKind::clifford, p, q, 0};
  s.validate();
  return s;
}

FamilySpec FamilySpec::parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) bad_family("family string '" + std::string(text) + "' lacks ':'");
  const std::string_view tag = text.substr(0, colon);
  const std::vector<int> v = parse_ints(text.substr(colon + 1), text);
  auto want = [&](std::size_t n) {
    if (v.size() != n)
      bad_family("family '" + std::string(tag) + "' takes " + std::to_string(n) + " parameters, got " +
                 std::to_string(v.size()));
  };
  if (tag == "ads") {
    want(3);
    return ads(v[0], v[1], v[2]);
  }
  if (tag == "lawson") {
    want(2);
    return lawson(v[0], v[1]);
  }
  if (tag == "ds1") {
    want(2);
    return ds1(v[0], v[1]);
  }
  if (tag == "ds2") {
    want(1);
    return ds2(v[0]);
  }
  if (tag == "clifford") {
    want(2);
    return clifford(v[0], v[1]);
  }
  bad_family("unknown family '" + std::string(tag) + "'");
}

void FamilySpec::validate() const {
  switch (kind) {
    case FamilyKind::ads_quadric:
      if (a < 1 || b < 1 || c < 0) bad_family("ads needs m, n >= 1 and k >= 0");
      return;
    case FamilyKind::lawson:
      if (a < 1 || b < 1) bad_family("lawson needs k, n >= 1");
      if (std::gcd(a, b) != 1) bad_family("lawson needs coprime k and n");
      if (b % 2 == 0) bad_family("lawson needs odd n");
      return;
    case FamilyKind::ds_quadric_a:
      if (a < 1 || b < 1) bad_family("ds1 needs m, n >= 1");
      return;
    case FamilyKind::ds_quadric_b:
      if (a < 1) bad_family("ds2 needs m >= 1");
      return;
    case FamilyKind::clifford:
      if (a < 1 || b < 1) bad_family("clifford needs p, q >= 1");
      return;
  }
  bad_family("unknown family kind");
}

std::string FamilySpec::name() const {
  std::string out;
  switch (kind) {
    case FamilyKind::ads_quadric: out = "ads:"; break;
    case FamilyKind::lawson: out = "lawson:"; break;
    case FamilyKind::ds_quadric_a: out = "ds1:"; break;
    case FamilyKind::ds_quadric_b: out = "ds2:"; break;
    case FamilyKind::clifford: out = "clifford:"; break;
  }
  const auto p = params();
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + std::to_string(p[i]);
  return out;
}

std::vector<int> FamilySpec::params() const {
  switch (kind) {
    case FamilyKind::ads_quadric: return {a, b, c};
    case FamilyKind::ds_quadric_b: return {a};
    default: return {a, b};
  }
}

int FamilySpec::nvars() const {
  switch (kind) {
    case FamilyKind::ads_quadric: return 2 + a + b + c;
    case FamilyKind::lawson: return 4;
    case FamilyKind::ds_quadric_a: return 3 + a + b;
    case FamilyKind::ds_quadric_b: return 3 + a;
    case FamilyKind::clifford: return a + b + 2;
  }
  return 0;
}

AmbientSig FamilySpec::sig() const {
  switch (kind) {
    case FamilyKind::ads_quadric: return AmbientSig::make(2, -1, nvars());
    case FamilyKind::lawson: return AmbientSig::make(2, a < b ? -1 : 1, nvars());
    case FamilyKind::ds_quadric_a:
    case FamilyKind::ds_quadric_b: return AmbientSig::make(1, 1, nvars());
    case FamilyKind::clifford: return AmbientSig::make(0, 1, nvars());
  }
  return {};
}

int FamilySpec::degree() const { return kind == FamilyKind::lawson ? a + b : 2; }

// ---------------------------------------------------------------- make_poly

Poly lawson_polynomial(int k, int n) {
  if (k < 1 || n < 1) throw Error(Errc::invalid_argument, "lawson polynomial needs k, n >= 1");
  const Poly x1 = var(4, 1), x2 = var(4, 2), x3 = var(4, 3), x4 = var(4, 4);
  const auto ku = static_cast<unsigned>(k), nu = static_cast<unsigned>(n);
  Poly f = pow(x1 - x3, ku) * pow(x2 - x4, nu) + pow(x1 + x3, ku) * pow(x2 + x4, nu);
  return f * QuadExt(2);
}

Poly make_poly(const FamilySpec& spec) {
  spec.validate();
  const int nv = spec.nvars();
  switch (spec.kind) {
    case FamilyKind::ads_quadric: {
      const int m = spec.a, n = spec.b;
      // 2 x1 x2 + (m-n)/sqrt(mn) x2^2 + sqrt(n/m)|y|^2 - sqrt(m/n)|z|^2
      const QuadExt mid = QuadExt(m - n) * QuadExt::sqrt_of(1, m * n);
      Poly f = var(nv, 1) * var(nv, 2) * QuadExt(2);
      f += var(nv, 2) * var(nv, 2) * mid;
      f += block_norm2(nv, 3, m) * QuadExt::sqrt_of(n, m);
      f -= block_norm2(nv, 3 + m, n) * QuadExt::sqrt_of(m, n);
      return f;
    }
    case FamilyKind::lawson: return lawson_polynomial(spec.a, spec.b);
    case FamilyKind::ds_quadric_a: {
      const int m = spec.a, n = spec.b;
      // 2 x3 x2 + (n-m)/sqrt(mn) x2^2 + sqrt(n/m)|y|^2 - sqrt(m/n)|z|^2
      const QuadExt mid = QuadExt(n - m) * QuadExt::sqrt_of(1, m * n);
      Poly f = var(nv, 2) * var(nv, 3) * QuadExt(2);
      f += var(nv, 2) * var(nv, 2) * mid;
      f += block_norm2(nv, 4, m) * QuadExt::sqrt_of(n, m);
      f -= block_norm2(nv, 4 + m, n) * QuadExt::sqrt_of(m, n);
      return f;
    }
    case FamilyKind::ds_quadric_b: {
      const int m = spec.a;
      // sqrt(m) x1^2 + 2 x2 x3 - (m-1)/sqrt(m) x3^2 + 1/sqrt(m) |y|^2
      const QuadExt inv_root = QuadExt::sqrt_of(1, m);
      Poly f = var(nv, 1) * var(nv, 1) * QuadExt::sqrt_of(m);
      f += var(nv, 2) * var(nv, 3) * QuadExt(2);
      f -= var(nv, 3) * var(nv, 3) * (QuadExt(m - 1) * inv_root);
      f += block_norm2(nv, 4, m) * inv_root;
      return f;
    }
    case FamilyKind::clifford: {
      const int p = spec.a, q = spec.b;
      return block_norm2(nv, 1, p + 1) * QuadExt(q) - block_norm2(nv, p + 2, q + 1) * QuadExt(p);
    }
  }
  throw Error(Errc::internal, "unhandled family kind");
}

// ------------------------------------------------------------------ patches

SurfacePatch::SurfacePatch(PatchKind kind, int k, int n) : kind_(kind), k_(k), n_(n) {
  if (k < 1 || n < 1) throw Error(Errc::invalid_argument, "patch needs k, n >= 1");
  if (n % 2 == 0) throw Error(Errc::invalid_argument, "patch needs odd n");
}

SurfacePatch SurfacePatch::for_family(const FamilySpec& spec) {
  if (spec.kind != FamilyKind::lawson) throw Error(Errc::invalid_argument, "patches exist only for lawson families");
  if (spec.a == spec.b) throw Error(Errc::invalid_argument, "lawson:1,1 has neither a phi nor a rho patch");
  return SurfacePatch(spec.a < spec.b ? PatchKind::phi : PatchKind::rho, spec.a, spec.b);
}

std::array<double, 4> SurfacePatch::eval(double s, double t) const {
  if (!std::isfinite(s) || !std::isfinite(t)) throw Error(Errc::domain, "patch parameters must be finite");
  if (std::abs(s) > 300.0 || std::max(k_, n_) * std::abs(t) > 300.0)
    throw Error(Errc::domain, "hyperbolic arguments beyond |300| overflow the patch");
  return patch_point<double>(kind_, k_, n_, s, t);
}

std::array<double, 4> eval_patch(const SurfacePatch& patch, double s, double t) { return patch.eval(s, t); }

// ------------------------------------------------------------- closed forms

std::optional<int> free_coordinate_count(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::ads_quadric: return 2 + spec.c;
    case FamilyKind::ds_quadric_a: return 3;
    case FamilyKind::ds_quadric_b: return 2;
    case FamilyKind::clifford: return 0;
    case FamilyKind::lawson: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> closed_form_sample(const FamilySpec& spec, std::span<const double> free, std::uint64_t seed) {
  spec.validate();
  const auto nfree = free_coordinate_count(spec);
  if (!nfree) throw Error(Errc::invalid_argument, spec.name() + " has no closed-form sampler");
  if (static_cast<int>(free.size()) != *nfree)
    throw Error(Errc::dimension, spec.name() + " expects " + std::to_string(*nfree) + " free coordinates");
  for (double v : free)
    if (!std::isfinite(v)) throw Error(Errc::invalid_argument, "free coordinates must be finite");

  std::mt19937_64 rng(seed);
  std::vector<double> p(static_cast<std::size_t>(spec.nvars()), 0.0);
  switch (spec.kind) {
    case FamilyKind::ads_quadric: {
      const double m = spec.a, n = spec.b;
      const double x1 = free[0], x2 = free[1];
      double unorm = 1.0;
      for (int i = 0; i < spec.c; ++i) unorm += free[static_cast<std::size_t>(2 + i)] * free[static_cast<std::size_t>(2 + i)];
      const double a = std::sqrt(m) * x1 - std::sqrt(n) * x2;
      const double b = std::sqrt(m) * x2 + std::sqrt(n) * x1;
      const double y2 = (a * a - m * unorm) / (m + n);
      const double z2 = (b * b - n * unorm) / (m + n);
      if (y2 < 0.0 || z2 < 0.0)
        infeasible(spec.name() + ": need |sqrt(m) x1 - sqrt(n) x2| >= " + std::to_string(std::sqrt(m * unorm)) +
                   " and |sqrt(m) x2 + sqrt(n) x1| >= " + std::to_string(std::sqrt(n * unorm)) + " (got " +
                   std::to_string(std::abs(a)) + ", " + std::to_string(std::abs(b)) + ")");
      p[0] = x1;
      p[1] = x2;
      put_block(p, 2, y2, rng, spec.a);
      put_block(p, 2 + spec.a, z2, rng, spec.b);
      for (int i = 0; i < spec.c; ++i) p[static_cast<std::size_t>(2 + spec.a + spec.b + i)] = free[static_cast<std::size_t>(2 + i)];
      return p;
    }
    case FamilyKind::ds_quadric_a: {
      const double m = spec.a, n = spec.b;
      const double x1 = free[0], x2 = free[1], x3 = free[2];
      const double unorm = 1.0 + x1 * x1;
      const double a = std::sqrt(m) * x3 + std::sqrt(n) * x2;
      const double b = std::sqrt(m) * x2 - std::sqrt(n) * x3;
      const double y2 = (m * unorm - a * a) / (m + n);
      const double z2 = (n * unorm - b * b) / (m + n);
      if (y2 < 0.0 || z2 < 0.0)
        infeasible(spec.name() + ": need |sqrt(m) x3 + sqrt(n) x2| <= " + std::to_string(std::sqrt(m * unorm)) +
                   " and |sqrt(m) x2 - sqrt(n) x3| <= " + std::to_string(std::sqrt(n * unorm)) + " (got " +
                   std::to_string(std::abs(a)) + ", " + std::to_string(std::abs(b)) + ")");
      p[0] = x1;
      p[1] = x2;
      p[2] = x3;
      put_block(p, 3, y2, rng, spec.a);
      put_block(p, 3 + spec.a, z2, rng, spec.b);
      return p;
    }
    case FamilyKind::ds_quadric_b: {
      const double m = spec.a;
      const double x2 = free[0], x3 = free[1];
      const double a = std::sqrt(m) * x2 + x3;
      const double b = std::sqrt(m) * x3 - x2;
      const double y2 = (m - a * a) / (m + 1.0);
      const double x1sq = (b * b - 1.0) / (m + 1.0);
      if (y2 < 0.0 || x1sq < 0.0)
        infeasible(spec.name() + ": need |sqrt(m) x2 + x3| <= " + std::to_string(std::sqrt(m)) +
                   " and |sqrt(m) x3 - x2| >= 1 (got " + std::to_string(std::abs(a)) + ", " +
                   std::to_string(std::abs(b)) + ")");
      put_block(p, 0, x1sq, rng, 1);
      p[1] = x2;
      p[2] = x3;
      put_block(p, 3, y2, rng, spec.a);
      return p;
    }
    case FamilyKind::clifford: {
      const double pp = spec.a, q = spec.b;
      put_block(p, 0, pp / (pp + q), rng, spec.a + 1);
      put_block(p, spec.a + 1, q / (pp + q), rng, spec.b + 1);
      return p;
    }
    case FamilyKind::lawson: break;
  }
  throw Error(Errc::internal, "unhandled family kind");
}

std::vector<double> random_free_coordinates(const FamilySpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sign = [&] { return unit(rng) < 0.5 ? -1.0 : 1.0; };
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  switch (spec.kind) {
    case FamilyKind::ads_quadric: {
      const double m = spec.a, n = spec.b;
      std::vector<double> out(static_cast<std::size_t>(2 + spec.c));
      double unorm = 1.0;
      for (int i = 0; i < spec.c; ++i) {
        const double u = between(-1.0, 1.0);
        out[static_cast<std::size_t>(2 + i)] = u;
        unorm += u * u;
      }
      // (a, b) = (sqrt(m) x1 - sqrt(n) x2, sqrt(n) x1 + sqrt(m) x2) is a scaled rotation
      const double a = sign() * std::sqrt(m * unorm) * between(1.05, 2.0);
      const double b = sign() * std::sqrt(n * unorm) * between(1.05, 2.0);
      out[0] = (std::sqrt(m) * a + std::sqrt(n) * b) / (m + n);
      out[1] = (-std::sqrt(n) * a + std::sqrt(m) * b) / (m + n);
      return out;
    }
    case FamilyKind::ds_quadric_a: {
      const double m = spec.a, n = spec.b;
      const double x1 = between(-2.0, 2.0);
      const double unorm = 1.0 + x1 * x1;
      const double a = std::sqrt(m * unorm) * between(-0.9, 0.9);
      const double b = std::sqrt(n * unorm) * between(-0.9, 0.9);
      return {x1, (std::sqrt(n) * a + std::sqrt(m) * b) / (m + n), (std::sqrt(m) * a - std::sqrt(n) * b) / (m + n)};
    }
    case FamilyKind::ds_quadric_b: {
      const double m = spec.a;
      const double a = std::sqrt(m) * between(-0.9, 0.9);
      const double b = sign() * between(1.05, 2.5);
      return {(std::sqrt(m) * a - b) / (m + 1.0), (a + std::sqrt(m) * b) / (m + 1.0)};
    }
    case FamilyKind::clifford: return {};
    case FamilyKind::lawson: break;
  }
  throw Error(Errc::invalid_argument, spec.name() + " has no closed-form sampler");
}

// ------------------------------------------------------------------- oracle

bool SpectrumOracle::has_curvatures() const { return spec_.kind != FamilyKind::lawson; }

std::vector<ExpectedCurvature> SpectrumOracle::curvatures(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != spec_.nvars()) throw Error(Errc::dimension, "oracle point has wrong dimension");
  switch (spec_.kind) {
    case FamilyKind::ads_quadric: {
      const double m = spec_.a, n = spec_.b;
      double unorm = 1.0;
      for (int i = 0; i < spec_.c; ++i) {
        const double u = p[static_cast<std::size_t>(2 + spec_.a + spec_.b + i)];
        unorm += u * u;
      }
      std::vector<ExpectedCurvature> out;
      if (spec_.c > 0) out.push_back({0.0, spec_.c});
      out.push_back({-std::sqrt(n / (m * unorm)), spec_.a});
      out.push_back({std::sqrt(m / (n * unorm)), spec_.b});
      return out;
    }
    case FamilyKind::ds_quadric_a: {
      const double m = spec_.a, n = spec_.b;
      const double unorm = 1.0 + p[0] * p[0];
      return {{0.0, 1}, {-std::sqrt(n / (m * unorm)), spec_.a}, {std::sqrt(m / (n * unorm)), spec_.b}};
    }
    case FamilyKind::ds_quadric_b: {
      const double m = spec_.a;
      return {{std::sqrt(m), 1}, {-1.0 / std::sqrt(m), spec_.a}};
    }
    case FamilyKind::clifford: {
      const double pp = spec_.a, q = spec_.b;
      return {{std::sqrt(q / pp), spec_.a}, {-std::sqrt(pp / q), spec_.b}};
    }
    case FamilyKind::lawson: break;
  }
  throw Error(Errc::invalid_argument, spec_.name() + " has no closed-form spectrum");
}

std::optional<double> SpectrumOracle::w_on_surface(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != spec_.nvars()) throw Error(Errc::dimension, "oracle point has wrong dimension");
  switch (spec_.kind) {
    case FamilyKind::ads_quadric: {
      double unorm = 1.0;
      for (int i = 0; i < spec_.c; ++i) {
        const double u = p[static_cast<std::size_t>(2 + spec_.a + spec_.b + i)];
        unorm += u * u;
      }
      return -4.0 * unorm;
    }
    case FamilyKind::ds_quadric_a: return 4.0 * (1.0 + p[0] * p[0]);
    case FamilyKind::ds_quadric_b: return 4.0;
    case FamilyKind::clifford: return 4.0 * spec_.a * spec_.b;
    case FamilyKind::lawson: return std::nullopt;
  }
  return std::nullopt;
}

SpectrumOracle spectrum_oracle(const FamilySpec& spec) {
  spec.validate();
  return SpectrumOracle(spec);
}

std::vector<FamilySpec> lawson_grid(int max_order) {
  std::vector<FamilySpec> out;
  for (int n = 1; n < max_order; n += 2)
    for (int k = 1; k + n <= max_order; ++k)
      if (std::gcd(k, n) == 1) out.push_back(FamilySpec::lawson(k, n));
  return out;
}

}  // namespace zmc
