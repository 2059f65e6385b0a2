#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zmc/families.hpp"
#include "zmc/geometry.hpp"
#include "zmc/zmccalc.hpp"

namespace zmc {

enum class Command { verify, spectrum, sample, classify, report };

std::optional<Command> parse_command(std::string_view name);
const char* to_string(Command c);

struct Tolerances {
  double residual = 1e-10;        // on-variety residual factor
  double spectrum = 1e-6;         // relative curvature match
  double newton = 1e-12;          // Newton stopping tolerance
  double mean_curvature = 1e-8;   // |H| gate
};

struct RunConfig {
  Command command = Command::verify;
  std::vector<std::string> families;
  std::vector<std::string> grids;  // "ads:M,N,K", "lawson:D", "ds1:M,N", "ds2:M", "clifford:S"
  std::optional<std::string> poly_text;
  int nvars = 0;
  std::optional<std::pair<int, int>> sig;  // (s, epsilon)
  int count = 10;
  std::uint64_t seed = 1;
  Tolerances tol;
  std::optional<std::string> points_json;  // point batch to use instead of sampling
  int threads = 0;                         // 0: ZMC_THREADS or hardware concurrency
};

/// Throws invalid_argument describing the first configuration problem.
void validate(const RunConfig& config);

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 mathematical failure
  nlohmann::json document;
  std::string csv;
};

RunResult run_command(const RunConfig& config);

/// Families named by a grid string such as "ads:3,3,2" (all m<=3, n<=3, k<=2).
std::vector<FamilySpec> expand_grid(std::string_view grid);

/// JSON text with every float written to 17 significant digits; keys sorted.
std::string dump_json(const nlohmann::json& doc);

nlohmann::json point_to_json(const VarietyPoint& p);
/// Reads [{coords, ...}] and re-evaluates residuals against the model.
std::vector<VarietyPoint> parse_point_batch(const nlohmann::json& batch, const HypersurfaceModel& model);

nlohmann::json report_to_json(const ZmcReport& report);

/// Worker count honoring ZMC_THREADS.
int resolve_threads(int requested);

}  // namespace zmc
