#pragma once

// Command-line front end: maximize, count, rank1, norm2, separability, bench.
//
// Exit codes: 0 success, 1 I/O or input validation error, 2 solver error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spheremax/algsolver.hpp"
#include "spheremax/apps.hpp"
#include "spheremax/io.hpp"

namespace spheremax::cli {

/// 1 for input, format and I/O failures; 2 for everything the solvers raise.
int exit_code(ErrorCode code) noexcept;

struct RunConfig {
  std::string command;
  std::string inputPath;
  Method method = Method::Auto;
  Chart chart = Chart::Sphere;
  double tol = 1e-14;
  std::int64_t maxIters = 100000;
  std::uint64_t seed = 0;
  std::int64_t budgetReductions = 1'000'000;
  std::string outputPath;  // empty: standard output
  bool emitPoints = false;
  bool force = false;
};

AppOptions app_options(const RunConfig& cfg);

/// SPHEREMAX_SEED if set, else 0.  Throws InvalidInput if it is not an
/// unsigned integer.
std::uint64_t default_seed();

Json maximize_report(const Form& form, const RunConfig& cfg);
Json rank1_report(const Form& form, const RunConfig& cfg);
Json norm2_report(const Matrix& a, const RunConfig& cfg);
Json separability_report(const DensityState& rho, const RunConfig& cfg);

struct BenchRow {
  Dims dims;
  std::string status = "ok";  // "ok" or the error code that stopped the row
  std::string message;
  std::size_t quotientDim = 0;
  std::size_t classes = 0;   // quotientDim / 2^r
  std::string expected;      // counting formula, decimal
  bool matches = false;
  StageTimings timings;
  double total = 0;
  double maxValue = 0;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
};

/// "default" = (2,2,2) (2,2,3) (2,2,4) (2,2,5) (2,3,3); "full" adds (3,3,3)
/// and (2,3,4); otherwise rows like "2,2,2;2,3,3".  "" is the empty sweep.
std::vector<Dims> parse_sweep(const std::string& text);

/// Sphere-chart pipeline on a seeded random integer form (entries in
/// [-9, 9]) per row.  Rows that fail are marked and the sweep continues.
BenchReport run_bench(const std::vector<Dims>& sweep, std::uint64_t seed, const GroebnerOptions& groebner = {});

Json bench_to_json(const BenchReport& report);
std::string bench_table(const BenchReport& report);

/// Parses arguments, runs one command and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spheremax::cli
