// zmc: batch front end for the zero-mean-curvature toolkit.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "zmc/zmc.h"

namespace {

constexpr int kExitMath = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::vector<std::string> families;
  std::vector<std::string> grids;
  std::optional<std::string> poly;
  int nvars = 0;
  std::optional<std::string> sig;
  int count = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string points;
  std::optional<double> tol_residual, tol_spectrum, tol_newton, tol_mean;
  int threads = 0;
};

void add_common(CLI::App* cmd, Options& o, bool sampling) {
  cmd->add_option("--family", o.families, "family such as ads:2,3,1, lawson:2,3, ds1:1,2, ds2:4, clifford:1,2");
  cmd->add_option("--poly", o.poly, "polynomial text, e.g. \"x1^2 + x2^2 - x3^2\"");
  cmd->add_option("--nvars", o.nvars, "number of variables for --poly");
  cmd->add_option("--sig", o.sig, "ambient signature s,eps");
  cmd->add_option("--out", o.out, "write the result here instead of stdout");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--tol-residual", o.tol_residual, "on-variety residual tolerance");
  cmd->add_option("--tol-spectrum", o.tol_spectrum, "relative principal curvature tolerance");
  cmd->add_option("--tol-newton", o.tol_newton, "Newton stopping tolerance");
  cmd->add_option("--tol-mean-curvature", o.tol_mean, "|H| gate");
  cmd->add_option("--threads", o.threads, "worker threads (default: ZMC_THREADS or all cores)");
  if (sampling) {
    cmd->add_option("--count", o.count, "sample count");
    cmd->add_option("--seed", o.seed, "random seed");
  }
}

int fail(zmc_status st) {
  std::cerr << "zmc: " << zmc_last_error() << '\n';
  return st == ZMC_ERR_NUMERIC || st == ZMC_ERR_INTERNAL ? kExitMath : kExitUsage;
}

bool parse_sig(const std::string& text, int& s, int& eps) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return false;
  try {
    std::size_t used = 0;
    s = std::stoi(text.substr(0, comma), &used);
    if (used != comma) return false;
    eps = std::stoi(text.substr(comma + 1), &used);
    return used == text.size() - comma - 1;
  } catch (const std::exception&) {
    return false;
  }
}

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct JobHandle {
  zmc_job* job = zmc_job_new();
  ~JobHandle() { zmc_job_free(job); }
};

int run(zmc_command command, const Options& o) {
  JobHandle h;
  if (!h.job) {
    std::cerr << "zmc: out of memory\n";
    return kExitUsage;
  }
  zmc_status st = zmc_job_set_command(h.job, command);
  for (const auto& f : o.families)
    if (st == ZMC_OK) st = zmc_job_add_family(h.job, f.c_str());
  for (const auto& g : o.grids)
    if (st == ZMC_OK) st = zmc_job_add_grid(h.job, g.c_str());
  if (st == ZMC_OK && o.poly) st = zmc_job_set_poly(h.job, o.poly->c_str(), o.nvars);
  if (st == ZMC_OK && o.sig) {
    int s = 0, eps = 0;
    if (!parse_sig(*o.sig, s, eps)) {
      std::cerr << "zmc: --sig expects s,eps such as 2,-1\n";
      return kExitUsage;
    }
    st = zmc_job_set_sig(h.job, s, eps);
  }
  if (st == ZMC_OK) st = zmc_job_set_count(h.job, o.count);
  if (st == ZMC_OK) st = zmc_job_set_seed(h.job, o.seed);
  if (st == ZMC_OK) st = zmc_job_set_threads(h.job, o.threads);
  if (st == ZMC_OK && o.tol_residual) st = zmc_job_set_tolerance(h.job, ZMC_TOL_RESIDUAL, *o.tol_residual);
  if (st == ZMC_OK && o.tol_spectrum) st = zmc_job_set_tolerance(h.job, ZMC_TOL_SPECTRUM, *o.tol_spectrum);
  if (st == ZMC_OK && o.tol_newton) st = zmc_job_set_tolerance(h.job, ZMC_TOL_NEWTON, *o.tol_newton);
  if (st == ZMC_OK && o.tol_mean) st = zmc_job_set_tolerance(h.job, ZMC_TOL_MEAN_CURVATURE, *o.tol_mean);
  if (st == ZMC_OK && !o.points.empty()) {
    const auto text = slurp(o.points);
    if (!text) {
      std::cerr << "zmc: cannot read " << o.points << '\n';
      return kExitUsage;
    }
    st = zmc_job_set_points(h.job, text->c_str());
  }
  if (st != ZMC_OK) return fail(st);

  int verdict = 0;
  char* json = nullptr;
  char* csv = nullptr;
  st = zmc_job_run(h.job, &verdict, &json, &csv);
  if (st != ZMC_OK) return fail(st);
  std::string text = o.format == "csv" ? csv : json;
  zmc_string_free(json);
  zmc_string_free(csv);
  if (o.format == "csv" && text.empty()) {
    std::cerr << "zmc: " << (command == ZMC_CMD_VERIFY ? "verify" : "this command") << " has no CSV projection\n";
    return kExitUsage;
  }

  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!(f << text)) {
      std::cerr << "zmc: cannot write " << o.out << '\n';
      return kExitUsage;
    }
  }
  return verdict == 0 ? 0 : kExitMath;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-mean-curvature hypersurfaces in pseudo-spheres: exact checks and numeric spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", zmc_version());

  Options o;
  struct Sub {
    const char* name;
    const char* help;
    zmc_command command;
    bool sampling;
  };
  const Sub subs[] = {
      {"verify", "check that the residual is a multiple of f", ZMC_CMD_VERIFY, true},
      {"spectrum", "sample points and compare principal curvatures with the family prediction", ZMC_CMD_SPECTRUM,
       true},
      {"sample", "sample points on the variety", ZMC_CMD_SAMPLE, true},
      {"classify", "identify an order-two candidate among the anti de Sitter quadrics", ZMC_CMD_CLASSIFY, false},
      {"report", "verify, spectrum and classification for a list of families", ZMC_CMD_REPORT, true},
  };
  std::vector<std::pair<CLI::App*, zmc_command>> commands;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, o, s.sampling);
    if (s.command == ZMC_CMD_REPORT)
      cmd->add_option("--grid", o.grids, "family grid: ads:M,N,K  lawson:D  ds1:M,N  ds2:M  clifford:S");
    if (s.command == ZMC_CMD_SPECTRUM) cmd->add_option("--points", o.points, "JSON point batch to use instead of sampling");
    commands.emplace_back(cmd, s.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  for (const auto& [cmd, command] : commands)
    if (cmd->parsed()) return run(command, o);
  return kExitUsage;
}
