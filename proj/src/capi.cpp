#include "zmc/zmc.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "zmc/error.hpp"
#include "zmc/families.hpp"
#include "zmc/jobs.hpp"
#include "zmc/poly.hpp"
#include "zmc/zmccalc.hpp"

struct zmc_poly {
  zmc::Poly value;
};

struct zmc_job {
  zmc::RunConfig config;
};

namespace {

thread_local std::string last_error;

zmc_status status_of(zmc::Errc code) {
  switch (code) {
    case zmc::Errc::parse: return ZMC_ERR_PARSE;
    case zmc::Errc::dimension: return ZMC_ERR_DIMENSION;
    case zmc::Errc::surd_mismatch: return ZMC_ERR_SURD;
    case zmc::Errc::invalid_argument: return ZMC_ERR_ARGUMENT;
    case zmc::Errc::domain:
    case zmc::Errc::division_by_zero: return ZMC_ERR_DOMAIN;
    case zmc::Errc::no_convergence:
    case zmc::Errc::rank_deficient:
    case zmc::Errc::infeasible: return ZMC_ERR_NUMERIC;
    case zmc::Errc::internal: return ZMC_ERR_INTERNAL;
  }
  return ZMC_ERR_INTERNAL;
}

template <typename Fn>
zmc_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return ZMC_OK;
  } catch (const zmc::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return ZMC_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ZMC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ZMC_ERR_INTERNAL;
  }
}

zmc_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return ZMC_ERR_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

zmc_poly* wrap(zmc::Poly p) { return new zmc_poly{std::move(p)}; }

zmc::AmbientSig sig_for(const zmc_poly* f, int s, int epsilon) {
  return zmc::AmbientSig::make(s, epsilon, f->value.nvars());
}

}  // namespace

extern "C" {

const char* zmc_last_error(void) { return last_error.c_str(); }

const char* zmc_version(void) { return "1.0.0"; }

void zmc_string_free(char* s) { std::free(s); }

zmc_status zmc_poly_parse(const char* text, int nvars, zmc_poly** out) {
  if (!text || !out) return null_argument("text/out");
  return guarded([&] { *out = wrap(zmc::parse(text, nvars)); });
}

zmc_status zmc_poly_family(const char* family, zmc_poly** out) {
  if (!family || !out) return null_argument("family/out");
  return guarded([&] { *out = wrap(zmc::make_poly(zmc::FamilySpec::parse(family))); });
}

void zmc_poly_free(zmc_poly* p) { delete p; }

zmc_status zmc_poly_render(const zmc_poly* p, char** out) {
  if (!p || !out) return null_argument("poly/out");
  return guarded([&] { *out = copy_string(zmc::render(p->value)); });
}

int zmc_poly_nvars(const zmc_poly* p) { return p ? p->value.nvars() : 0; }

int zmc_poly_degree(const zmc_poly* p) { return p ? p->value.degree() : -1; }

size_t zmc_poly_nterms(const zmc_poly* p) { return p ? p->value.nterms() : 0; }

zmc_status zmc_poly_add(const zmc_poly* a, const zmc_poly* b, zmc_poly** out) {
  if (!a || !b || !out) return null_argument("a/b/out");
  return guarded([&] { *out = wrap(zmc::add(a->value, b->value)); });
}

zmc_status zmc_poly_mul(const zmc_poly* a, const zmc_poly* b, zmc_poly** out) {
  if (!a || !b || !out) return null_argument("a/b/out");
  return guarded([&] { *out = wrap(zmc::mul(a->value, b->value)); });
}

zmc_status zmc_poly_diff(const zmc_poly* p, int var, zmc_poly** out) {
  if (!p || !out) return null_argument("poly/out");
  return guarded([&] { *out = wrap(zmc::diff(p->value, var)); });
}

zmc_status zmc_poly_divide(const zmc_poly* g, const zmc_poly* f, zmc_poly** quotient, zmc_poly** remainder) {
  if (!g || !f || !quotient || !remainder) return null_argument("g/f/quotient/remainder");
  return guarded([&] {
    auto r = zmc::divide(g->value, f->value);
    *quotient = wrap(std::move(r.quotient));
    *remainder = wrap(std::move(r.remainder));
  });
}

zmc_status zmc_poly_eval(const zmc_poly* p, const double* x, size_t n, double* out) {
  if (!p || !out || (!x && n)) return null_argument("poly/x/out");
  return guarded([&] {
    if (n != static_cast<size_t>(p->value.nvars()))
      throw zmc::Error(zmc::Errc::dimension, "eval: expected " + std::to_string(p->value.nvars()) + " coordinates");
    *out = zmc::eval_float(p->value, {x, n});
  });
}

zmc_status zmc_residual(const zmc_poly* f, int s, int epsilon, zmc_poly** out) {
  if (!f || !out) return null_argument("f/out");
  return guarded([&] { *out = wrap(zmc::zmc_residual(f->value, sig_for(f, s, epsilon))); });
}

zmc_status zmc_conjecture_check(const zmc_poly* f, int s, int epsilon, int* divides, zmc_poly** h) {
  if (!f || !divides) return null_argument("f/divides");
  return guarded([&] {
    auto report = zmc::conjecture_check(f->value, sig_for(f, s, epsilon));
    *divides = report.divides ? 1 : 0;
    if (h) *h = report.divides ? wrap(std::move(report.quotient_h)) : nullptr;
  });
}

zmc_job* zmc_job_new(void) { return new (std::nothrow) zmc_job{}; }

void zmc_job_free(zmc_job* job) { delete job; }

zmc_status zmc_job_set_command(zmc_job* job, zmc_command command) {
  if (!job) return null_argument("job");
  if (command < ZMC_CMD_VERIFY || command > ZMC_CMD_REPORT) {
    last_error = "unknown command";
    return ZMC_ERR_ARGUMENT;
  }
  job->config.command = static_cast<zmc::Command>(command);
  return ZMC_OK;
}

zmc_status zmc_job_add_family(zmc_job* job, const char* family) {
  if (!job || !family) return null_argument("job/family");
  return guarded([&] {
    zmc::FamilySpec::parse(family);
    job->config.families.emplace_back(family);
  });
}

zmc_status zmc_job_add_grid(zmc_job* job, const char* grid) {
  if (!job || !grid) return null_argument("job/grid");
  return guarded([&] {
    zmc::expand_grid(grid);
    job->config.grids.emplace_back(grid);
  });
}

zmc_status zmc_job_set_poly(zmc_job* job, const char* text, int nvars) {
  if (!job || !text) return null_argument("job/text");
  return guarded([&] {
    zmc::parse(text, nvars);
    job->config.poly_text = text;
    job->config.nvars = nvars;
  });
}

zmc_status zmc_job_set_sig(zmc_job* job, int s, int epsilon) {
  if (!job) return null_argument("job");
  if (s < 0 || (epsilon != 1 && epsilon != -1)) {
    last_error = "signature needs s >= 0 and epsilon = +-1";
    return ZMC_ERR_ARGUMENT;
  }
  job->config.sig = std::make_pair(s, epsilon);
  return ZMC_OK;
}

zmc_status zmc_job_set_count(zmc_job* job, int count) {
  if (!job) return null_argument("job");
  if (count < 1) {
    last_error = "count must be at least 1";
    return ZMC_ERR_ARGUMENT;
  }
  job->config.count = count;
  return ZMC_OK;
}

zmc_status zmc_job_set_seed(zmc_job* job, uint64_t seed) {
  if (!job) return null_argument("job");
  job->config.seed = seed;
  return ZMC_OK;
}

zmc_status zmc_job_set_tolerance(zmc_job* job, zmc_tolerance which, double value) {
  if (!job) return null_argument("job");
  if (!(value > 0.0) || !std::isfinite(value)) {
    last_error = "tolerances must be positive and finite";
    return ZMC_ERR_ARGUMENT;
  }
  auto& t = job->config.tol;
  switch (which) {
    case ZMC_TOL_RESIDUAL: t.residual = value; break;
    case ZMC_TOL_SPECTRUM: t.spectrum = value; break;
    case ZMC_TOL_NEWTON: t.newton = value; break;
    case ZMC_TOL_MEAN_CURVATURE: t.mean_curvature = value; break;
    default: last_error = "unknown tolerance"; return ZMC_ERR_ARGUMENT;
  }
  return ZMC_OK;
}

zmc_status zmc_job_set_points(zmc_job* job, const char* json) {
  if (!job || !json) return null_argument("job/json");
  return guarded([&] {
    if (!nlohmann::json::parse(json).is_array())
      throw zmc::Error(zmc::Errc::invalid_argument, "point batch must be a JSON array");
    job->config.points_json = json;
  });
}

zmc_status zmc_job_set_threads(zmc_job* job, int threads) {
  if (!job) return null_argument("job");
  job->config.threads = threads;
  return ZMC_OK;
}

zmc_status zmc_job_run(zmc_job* job, int* verdict, char** json, char** csv) {
  if (!job || !verdict) return null_argument("job/verdict");
  return guarded([&] {
    const auto result = zmc::run_command(job->config);
    std::string doc = zmc::dump_json(result.document);
    char* json_out = json ? copy_string(doc) : nullptr;
    char* csv_out = nullptr;
    try {
      if (csv) csv_out = copy_string(result.csv);
    } catch (...) {
      std::free(json_out);
      throw;
    }
    *verdict = result.exit_code;
    if (json) *json = json_out;
    if (csv) *csv = csv_out;
  });
}

}  // extern "C"
