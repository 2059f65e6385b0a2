#include "zmc/jobs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "zmc/error.hpp"
#include "zmc/quadform.hpp"

namespace zmc {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::invalid_argument, what); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(seed * 0x100000001b3ULL + index);
}

/// Runs body(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body body) {
  const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(threads, static_cast<int>(n))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Subject {
  std::string name;  // family name or "poly"
  std::optional<FamilySpec> family;
  Poly poly;
  AmbientSig sig;
};

std::vector<Subject> resolve_subjects(const RunConfig& c) {
  std::vector<Subject> out;
  std::vector<FamilySpec> specs;
  for (const auto& f : c.families) specs.push_back(FamilySpec::parse(f));
  for (const auto& g : c.grids) {
    auto more = expand_grid(g);
    specs.insert(specs.end(), more.begin(), more.end());
  }
  for (const auto& spec : specs) {
    AmbientSig sig = spec.sig();
    if (c.sig) {
      if (c.sig->first != sig.s)
        config_error("--sig " + std::to_string(c.sig->first) + "," + std::to_string(c.sig->second) +
                     " conflicts with " + spec.name() + " (s = " + std::to_string(sig.s) + ")");
      sig = AmbientSig::make(sig.s, c.sig->second, sig.nvars);
    }
    out.push_back({spec.name(), spec, make_poly(spec), sig});
  }
  if (c.poly_text) {
    Poly f = parse(*c.poly_text, c.nvars);
    out.push_back({"poly", std::nullopt, f, AmbientSig::make(c.sig->first, c.sig->second, c.nvars)});
  }
  return out;
}

json family_fields(const Subject& s) {
  json j;
  j["family"] = s.family ? json(s.name) : json(nullptr);
  j["params"] = s.family ? json(s.family->params()) : json(nullptr);
  j["poly"] = render(s.poly);
  j["s"] = s.sig.s;
  j["epsilon"] = s.sig.epsilon;
  j["nvars"] = s.sig.nvars;
  j["degree"] = s.poly.degree();
  return j;
}

VarietyPoint sample_for(const Subject& s, const HypersurfaceModel& model, std::uint64_t seed, const Tolerances& tol) {
  NewtonOptions opts;
  opts.tol = tol.newton;
  if (s.family) return sample_family_point(*s.family, model, seed, opts);
  return sample_variety_point(model, seed, 200, opts);
}

std::vector<VarietyPoint> sample_points(const Subject& s, const HypersurfaceModel& model, const RunConfig& c,
                                        int threads) {
  std::vector<VarietyPoint> pts(static_cast<std::size_t>(c.count));
  parallel_for(pts.size(), threads, [&](std::size_t i) { pts[i] = sample_for(s, model, point_seed(c.seed, i), c.tol); });
  return pts;
}

// ---------------------------------------------------------------- verify

Poly absolute_coefficients(const Poly& p) {
  Poly::Terms t;
  for (const auto& [m, c] : p.terms()) t.emplace(m, c.sign() < 0 ? -c : c);
  return Poly::from_terms(p.nvars(), std::move(t));
}

// Passing needs the exact identity and a regular point of the surface: a
// residual that divides f says nothing when f = 0 misses the pseudo-sphere.
json verify_subject(const Subject& s, const RunConfig& c, int threads, bool& pass) {
  const ZmcReport rep = conjecture_check(s.poly, s.sig);
  json j = family_fields(s);
  j.update(report_to_json(rep));

  const HypersurfaceModel model(s.poly, s.sig);
  const FloatPoly g(rep.residual_g);
  const FloatPoly g_scale(absolute_coefficients(rep.residual_g));
  const int want = std::max(1, std::min(c.count, 16));
  struct Probe {
    double abs = 0.0, rel = 0.0;
  };
  std::vector<std::optional<Probe>> vals(static_cast<std::size_t>(want));
  parallel_for(vals.size(), threads, [&](std::size_t i) {
    try {
      const VarietyPoint p = sample_for(s, model, point_seed(c.seed, i), c.tol);
      std::vector<double> mag(p.coords.size());
      std::transform(p.coords.begin(), p.coords.end(), mag.begin(), [](double x) { return std::abs(x); });
      const double a = std::abs(g(p.coords));
      const double scale = g_scale(mag);
      vals[i] = Probe{a, scale > 0 ? a / scale : a};
    } catch (const Error& e) {
      if (e.code() != Errc::no_convergence && e.code() != Errc::rank_deficient && e.code() != Errc::infeasible) throw;
    }
  });
  json ov;
  int converged = 0;
  double worst = 0.0, worst_rel = 0.0;
  for (const auto& v : vals)
    if (v) {
      ++converged;
      worst = std::max(worst, v->abs);
      worst_rel = std::max(worst_rel, v->rel);
    }
  ov["requested"] = want;
  ov["converged"] = converged;
  ov["max_abs_residual"] = converged ? json(worst) : json(nullptr);
  ov["max_rel_residual"] = converged ? json(worst_rel) : json(nullptr);
  j["on_variety"] = ov;
  j["surface_found"] = converged > 0;
  pass = rep.divides && converged > 0;
  j["pass"] = pass;
  if (!pass)
    j["reason"] = !rep.divides ? "residual is not a multiple of f"
                               : "no regular point of f = 0 on the pseudo-sphere was found";
  return j;
}

// -------------------------------------------------------------- spectrum

struct PointOutcome {
  json doc;
  bool ok = false;
  std::string failure;
  std::vector<std::string> csv_cells;
};

PointOutcome spectrum_at(const Subject& s, const HypersurfaceModel& model, const VarietyPoint& p,
                         const Tolerances& tol) {
  PointOutcome out;
  out.doc = point_to_json(p);
  out.doc["regular"] = p.regular;
  for (double x : p.coords) out.csv_cells.push_back(json(x).dump());
  if (!on_variety(model, p, tol.residual)) {
    out.failure = "point is off the variety";
    out.doc["ok"] = false;
    return out;
  }
  if (!p.regular) {
    out.failure = "point is not regular";
    out.doc["ok"] = false;
    return out;
  }
  const CurvatureSpectrum sp = curvature_spectrum(model, p);
  json eig = json::array();
  for (const auto& e : sp.eigenvalues) eig.push_back({e.real(), e.imag()});
  json clusters = json::array();
  for (const auto& cl : sp.clusters)
    clusters.push_back({{"value", cl.value},
                        {"imag", cl.imag},
                        {"multiplicity", cl.multiplicity},
                        {"timelike_dims", cl.timelike_dims},
                        {"spacelike_dims", cl.spacelike_dims}});
  out.doc["eigenvalues"] = eig;
  out.doc["clusters"] = clusters;
  out.doc["signature"] = {sp.metric_signature.first, sp.metric_signature.second};
  out.doc["mean_curvature"] = sp.mean_curvature;
  out.doc["defective"] = sp.defective;
  out.doc["eigenvector_condition"] = sp.eigenvector_condition;

  const bool h_ok = std::abs(sp.mean_curvature) <= tol.mean_curvature;
  bool spectrum_ok = true;
  if (s.family) {
    const SpectrumOracle oracle = spectrum_oracle(*s.family);
    if (auto w = oracle.w_on_surface(p.coords)) out.doc["w_expected"] = *w;
    if (oracle.has_curvatures()) {
      const auto expected = oracle.curvatures(p.coords);
      json ej = json::array();
      for (const auto& e : expected) ej.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
      out.doc["expected"] = ej;
      spectrum_ok = spectrum_matches(sp, expected, tol.spectrum);
      out.doc["spectrum_match"] = spectrum_ok;
    }
  }
  out.doc["mean_curvature_ok"] = h_ok;
  out.ok = h_ok && spectrum_ok;
  out.doc["ok"] = out.ok;
  if (!spectrum_ok)
    out.failure = "principal curvatures differ from the family prediction";
  else if (!h_ok)
    out.failure = "|H| exceeds " + json(tol.mean_curvature).dump();

  out.csv_cells.push_back(json(p.f_residual).dump());
  out.csv_cells.push_back(json(p.constraint_residual).dump());
  out.csv_cells.push_back(json(p.w_value).dump());
  out.csv_cells.push_back(json(sp.mean_curvature).dump());
  out.csv_cells.push_back(std::to_string(sp.metric_signature.first));
  out.csv_cells.push_back(std::to_string(sp.metric_signature.second));
  out.csv_cells.push_back(out.ok ? "1" : "0");
  for (const auto& cl : sp.clusters) {
    out.csv_cells.push_back(json(cl.value).dump());
    out.csv_cells.push_back(std::to_string(cl.multiplicity));
  }
  return out;
}

std::string format_csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json spectrum_subject(const Subject& s, const RunConfig& c, int threads, bool& pass, std::string& csv) {
  const HypersurfaceModel model(s.poly, s.sig);
  std::vector<VarietyPoint> pts = c.points_json ? parse_point_batch(json::parse(*c.points_json), model)
                                                : sample_points(s, model, c, threads);
  std::vector<PointOutcome> outcomes(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { outcomes[i] = spectrum_at(s, model, pts[i], c.tol); });

  json j = family_fields(s);
  j["seed"] = c.seed;
  j["count"] = pts.size();
  json arr = json::array();
  pass = true;
  double worst_h = 0.0;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    json d = outcomes[i].doc;
    d["index"] = i;
    if (d.contains("mean_curvature")) worst_h = std::max(worst_h, std::abs(d["mean_curvature"].get<double>()));
    if (!outcomes[i].ok) {
      ++failures;
      if (pass) j["first_failure"] = {{"index", i}, {"reason", outcomes[i].failure}, {"point", d}};
      pass = false;
    }
    arr.push_back(std::move(d));
  }
  j["points"] = arr;
  j["failures"] = failures;
  j["max_abs_mean_curvature"] = worst_h;
  j["all_match"] = pass;

  std::ostringstream os;
  for (int i = 1; i <= s.sig.nvars; ++i) os << 'x' << i << ',';
  os << "f_residual,constraint_residual,w,mean_curvature,sig_neg,sig_pos,ok,clusters...\n";
  for (const auto& o : outcomes) {
    for (std::size_t k = 0; k < o.csv_cells.size(); ++k) os << (k ? "," : "") << o.csv_cells[k];
    os << '\n';
  }
  csv += os.str();
  return j;
}

// ----------------------------------------------------------------- sample

json sample_subject(const Subject& s, const RunConfig& c, int threads, std::string& csv) {
  const HypersurfaceModel model(s.poly, s.sig);
  const auto pts = sample_points(s, model, c, threads);
  json arr = json::array();
  std::ostringstream os;
  for (int i = 1; i <= s.sig.nvars; ++i) os << 'x' << i << ',';
  os << "f_residual,constraint_residual,w\n";
  for (const auto& p : pts) {
    arr.push_back(point_to_json(p));
    for (double x : p.coords) os << format_csv_number(x) << ',';
    os << format_csv_number(p.f_residual) << ',' << format_csv_number(p.constraint_residual) << ','
       << format_csv_number(p.w_value) << '\n';
  }
  csv += os.str();
  return arr;
}

// --------------------------------------------------------------- classify

json classification_to_json(const Classification& cl) {
  json j;
  j["verdict"] = to_string(cl.verdict);
  j["divides"] = cl.divides;
  j["reducibility"] = to_string(cl.reducibility);
  j["match"] = cl.match ? json(cl.match->name()) : json(nullptr);
  j["params"] = cl.match ? json(cl.match->params()) : json(nullptr);
  json all = json::array();
  for (const auto& m : cl.all_matches) all.push_back(m.name());
  j["all_matches"] = all;
  j["reason"] = cl.reason;
  return j;
}

json classify_subject(const Subject& s, bool& pass) {
  const Classification cl = classify_candidate(s.poly, s.sig);
  json j = family_fields(s);
  j["classification"] = classification_to_json(cl);
  pass = cl.verdict == Verdict::matches_ads;
  if (pass && s.family) pass = cl.match && *cl.match == *s.family;
  return j;
}

json pack(std::vector<json> docs) {
  if (docs.size() == 1) return std::move(docs.front());
  json out;
  out["reports"] = std::move(docs);
  return out;
}

void write_json(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent, depth + 1);
      }
      os << '\n' << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << '\n' << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      os << format_csv_number(v);
      return;
    }
    default: os << j.dump(); return;
  }
}

}  // namespace

// ------------------------------------------------------------------ public

std::optional<Command> parse_command(std::string_view name) {
  if (name == "verify") return Command::verify;
  if (name == "spectrum") return Command::spectrum;
  if (name == "sample") return Command::sample;
  if (name == "classify") return Command::classify;
  if (name == "report") return Command::report;
  return std::nullopt;
}

const char* to_string(Command c) {
  switch (c) {
    case Command::verify: return "verify";
    case Command::spectrum: return "spectrum";
    case Command::sample: return "sample";
    case Command::classify: return "classify";
    case Command::report: return "report";
  }
  return "?";
}

int resolve_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ZMC_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) n = std::min(n > 0 ? n : cap, cap);
    }
  }
  return std::max(1, n);
}

void validate(const RunConfig& c) {
  if (c.count < 1) config_error("--count must be at least 1");
  if (!(c.tol.residual > 0) || !(c.tol.spectrum > 0) || !(c.tol.newton > 0) || !(c.tol.mean_curvature > 0))
    config_error("tolerances must be positive");
  const bool has_family = !c.families.empty() || !c.grids.empty();
  if (c.poly_text) {
    if (c.nvars < 1) config_error("--poly needs --nvars");
    if (!c.sig) config_error("--poly needs --sig s,eps");
  }
  if (c.command == Command::report) {
    if (c.poly_text) config_error("report takes families only");
    if (!has_family) config_error("report needs at least one --family or --grid");
  } else {
    if (!has_family && !c.poly_text) config_error(std::string(to_string(c.command)) + " needs --family or --poly");
  }
  if (c.points_json && c.command != Command::spectrum) config_error("--points applies to spectrum only");
  if (c.sig && c.sig->second != 1 && c.sig->second != -1) config_error("--sig epsilon must be 1 or -1");
  if (c.poly_text && (c.sig->first < 0 || c.sig->first >= c.nvars))
    config_error("--sig index must satisfy 0 <= s < nvars");
  for (const auto& f : c.families) {
    const FamilySpec spec = FamilySpec::parse(f);
    if (c.command == Command::classify && spec.sig().s != 2) config_error("classify works in signature (2,-1) only");
  }
  if (c.command == Command::classify && c.sig && *c.sig != std::pair{2, -1})
    config_error("classify works in signature (2,-1) only");
  for (const auto& g : c.grids) expand_grid(g);
}

std::vector<FamilySpec> expand_grid(std::string_view grid) {
  const FamilySpec bound = [&] {
    // grids reuse the family grammar for their bounds; lawson and clifford take one bound
    const std::size_t colon = grid.find(':');
    const std::string_view tag = grid.substr(0, colon);
    if (tag == "lawson" || tag == "clifford") {
      const int v = std::atoi(std::string(grid.substr(colon + 1)).c_str());
      if (v < 2) config_error("grid '" + std::string(grid) + "' needs a bound >= 2");
      return tag == "lawson" ? FamilySpec{FamilyKind::lawson, v, 0, 0} : FamilySpec{FamilyKind::clifford, v, 0, 0};
    }
    return FamilySpec::parse(grid);
  }();
  std::vector<FamilySpec> out;
  switch (bound.kind) {
    case FamilyKind::ads_quadric:
      for (int m = 1; m <= bound.a; ++m)
        for (int n = 1; n <= bound.b; ++n)
          for (int k = 0; k <= bound.c; ++k) out.push_back(FamilySpec::ads(m, n, k));
      break;
    case FamilyKind::lawson: out = lawson_grid(bound.a); break;
    case FamilyKind::ds_quadric_a:
      for (int m = 1; m <= bound.a; ++m)
        for (int n = 1; n <= bound.b; ++n) out.push_back(FamilySpec::ds1(m, n));
      break;
    case FamilyKind::ds_quadric_b:
      for (int m = 1; m <= bound.a; ++m) out.push_back(FamilySpec::ds2(m));
      break;
    case FamilyKind::clifford:
      for (int p = 1; p < bound.a; ++p)
        for (int q = 1; p + q <= bound.a; ++q) out.push_back(FamilySpec::clifford(p, q));
      break;
  }
  return out;
}

std::string dump_json(const json& doc) {
  std::ostringstream os;
  write_json(os, doc, 2, 0);
  os << '\n';
  return os.str();
}

json point_to_json(const VarietyPoint& p) {
  return {{"coords", p.coords},
          {"f_residual", p.f_residual},
          {"constraint_residual", p.constraint_residual},
          {"w", p.w_value}};
}

std::vector<VarietyPoint> parse_point_batch(const json& batch, const HypersurfaceModel& model) {
  if (!batch.is_array()) config_error("point batch must be a JSON array");
  std::vector<VarietyPoint> out;
  for (const auto& item : batch) {
    if (!item.is_object() || !item.contains("coords") || !item["coords"].is_array())
      config_error("point batch entries need a 'coords' array");
    std::vector<double> coords = item["coords"].get<std::vector<double>>();
    if (static_cast<int>(coords.size()) != model.nvars())
      config_error("point batch entry has " + std::to_string(coords.size()) + " coordinates, expected " +
                   std::to_string(model.nvars()));
    out.push_back(evaluate_point(model, std::move(coords)));
  }
  return out;
}

json report_to_json(const ZmcReport& r) {
  json j;
  j["divides"] = r.divides;
  j["h"] = r.divides ? json(render(r.quotient_h)) : json(nullptr);
  j["h_degree"] = r.divides ? r.quotient_h.degree() : -1;
  j["remainder_nterms"] = r.remainder.nterms();
  j["residual_nterms"] = r.residual_g.nterms();
  j["residual_degree"] = r.residual_g.degree();
  j["w"] = render(r.w);
  j["laplacian"] = render(r.laplacian);
  return j;
}

RunResult run_command(const RunConfig& c) {
  validate(c);
  const int threads = resolve_threads(c.threads);
  const std::vector<Subject> subjects = resolve_subjects(c);
  RunResult result;
  std::vector<json> docs;
  bool all_pass = true;

  switch (c.command) {
    case Command::verify:
      for (const auto& s : subjects) {
        bool pass = false;
        docs.push_back(verify_subject(s, c, threads, pass));
        all_pass = all_pass && pass;
      }
      result.document = pack(std::move(docs));
      break;
    case Command::spectrum:
      for (const auto& s : subjects) {
        bool pass = false;
        docs.push_back(spectrum_subject(s, c, threads, pass, result.csv));
        all_pass = all_pass && pass;
      }
      result.document = pack(std::move(docs));
      break;
    case Command::sample:
      for (const auto& s : subjects) docs.push_back(sample_subject(s, c, threads, result.csv));
      result.document = pack(std::move(docs));
      break;
    case Command::classify:
      for (const auto& s : subjects) {
        bool pass = false;
        docs.push_back(classify_subject(s, pass));
        all_pass = all_pass && pass;
      }
      result.document = pack(std::move(docs));
      break;
    case Command::report: {
      json families = json::array();
      for (const auto& s : subjects) {
        json entry;
        entry["family"] = s.name;
        bool ok = true;
        try {
          bool vpass = false;
          json v = verify_subject(s, c, threads, vpass);
          entry["verify"] = v;
          bool spass = false;
          std::string scratch;
          json sp = spectrum_subject(s, c, threads, spass, scratch);
          entry["spectrum"] = {{"all_match", sp["all_match"]},
                               {"points_checked", sp["count"]},
                               {"failures", sp["failures"]},
                               {"max_abs_mean_curvature", sp["max_abs_mean_curvature"]}};
          if (sp.contains("first_failure")) entry["spectrum"]["first_failure"] = sp["first_failure"];
          ok = vpass && spass;
          if (s.family && s.family->kind == FamilyKind::ads_quadric && s.sig.epsilon == -1) {
            bool cpass = false;
            entry["classification"] = classify_subject(s, cpass)["classification"];
            ok = ok && cpass;
          }
        } catch (const Error& e) {
          entry["error"] = e.what();
          ok = false;
        }
        entry["pass"] = ok;
        all_pass = all_pass && ok;
        families.push_back(std::move(entry));
      }
      result.document = {{"seed", c.seed}, {"count", c.count}, {"families", families}, {"all_pass", all_pass}};
      break;
    }
  }
  result.exit_code = all_pass ? 0 : 1;
  return result;
}

}  // namespace zmc
