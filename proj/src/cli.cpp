#include "spheremax/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "spheremax/chowcount.hpp"
#include "spheremax/error.hpp"

namespace spheremax::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr int kPowerStarts = 50;

Json point_json(const std::vector<VectorXd>& vectors, double value, double residual) {
  Json p;
  p["vectors"] = Json::array();
  for (const auto& v : vectors) p["vectors"].push_back(vector_to_json(v));
  p["value"] = value;
  p["residual"] = residual;
  return p;
}

Json timings_json(const StageTimings& t) {
  Json j;
  j["build"] = t.build;
  j["groebner"] = t.groebner;
  j["eigen"] = t.eigen;
  j["total"] = t.build + t.groebner + t.eigen;
  return j;
}

std::string dims_label(const Dims& dims) {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + ")";
}

std::vector<std::int64_t> to_int64(const Dims& dims) { return {dims.begin(), dims.end()}; }

Chart parse_chart(const std::string& name) {
  if (name == "sphere") return Chart::Sphere;
  if (name == "affine") return Chart::Affine;
  throw Error(ErrorCode::InvalidInput, "unknown chart '" + name + "' (sphere, affine)");
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.outputPath.empty()) out << text;
  else write_text_file(cfg.outputPath, text);
}

void emit_json(const RunConfig& cfg, const Json& report, std::ostream& out) {
  emit(cfg, rounded(report).dump(2) + "\n", out);
}

}  // namespace

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotAState:
    case ErrorCode::IoError: return 1;
    default: return 2;
  }
}

AppOptions app_options(const RunConfig& cfg) {
  AppOptions o;
  o.method = cfg.method;
  o.iteration.seed = cfg.seed;
  o.iteration.tol = cfg.tol;
  o.iteration.maxIters = cfg.maxIters;
  o.solve.seed = cfg.seed;
  o.solve.force = cfg.force;
  o.solve.emitPoints = cfg.emitPoints;
  o.solve.groebner.maxReductions = cfg.budgetReductions;
  o.powerStarts = kPowerStarts;
  return o;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("SPHEREMAX_SEED");
  if (!env || !*env) return 0;
  const std::string s(env);
  if (s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::InvalidInput, "SPHEREMAX_SEED must be an unsigned integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "SPHEREMAX_SEED out of range: '" + s + "'");
  }
}

Json maximize_report(const Form& form, const RunConfig& cfg) {
  const AppOptions opts = app_options(cfg);
  // The affine chart only exists for the exact solver.
  const Method method = cfg.method == Method::Auto && cfg.chart == Chart::Affine ? Method::Algebraic
                                                                                 : resolve_method(cfg.method, form.order());
  Json r;
  if (method == Method::Power) {
    const auto t0 = Clock::now();
    IterationResult it = form.order() == 2 ? bilinear_max(form, opts.iteration)
                                           : multistart_iterate(form, opts.powerStarts, opts.iteration,
                                                                opts.solve.residualTol);
    if (form.order() == 2 && it.status != IterationStatus::Converged)
      throw Error(ErrorCode::NonConverged, "power iteration stopped with status " + std::string(to_string(it.status)));
    const double total = seconds_since(t0);
    canonicalize_signs(it.point);
    r["maxValue"] = it.value;
    r["method"] = "power";
    r["status"] = to_string(it.status);
    r["iterations"] = it.iterations;
    r["points"] = Json::array({point_json(it.point, evaluate(form, it.point), it.residual)});
    r["quotientDim"] = nullptr;
    r["eigenvalueCount"] = nullptr;
    r["flags"] = Json::array();
    if (it.residual > opts.solve.residualTol) r["flags"].push_back("best run is not a critical point within tolerance");
    r["timings"] = Json{{"total", total}};
    return r;
  }

  const SolveReport rep = cfg.chart == Chart::Affine ? solve_argmax(form, opts.solve) : solve_max(form, opts.solve);
  r["maxValue"] = rep.maxValue;
  r["method"] = "algebraic";
  r["chart"] = to_string(rep.chart);
  r["points"] = Json::array();
  for (const auto& p : rep.points) r["points"].push_back(point_json(p.vectors, p.value, p.residual));
  r["quotientDim"] = rep.quotientDim;
  r["eigenvalueCount"] = rep.eigenvalues.size();
  r["realEigenvalueCount"] = rep.realEigenvalueCount;
  r["flags"] = rep.flags;
  r["timings"] = timings_json(rep.timings);
  return r;
}

Json rank1_report(const Form& form, const RunConfig& cfg) {
  const RankOneApproximation a = closest_rank_one(form, app_options(cfg));
  Json r;
  r["maxValue"] = a.maxValue;
  r["distance"] = a.distance;
  r["method"] = to_string(a.method);
  r["factors"] = Json::array();
  for (const auto& f : a.factors.factors) r["factors"].push_back(vector_to_json(f));
  r["flags"] = a.flags;
  return r;
}

Json norm2_report(const Matrix& a, const RunConfig& cfg) {
  Json r;
  r["norm2"] = matrix_norm2(a, app_options(cfg));
  r["method"] = to_string(resolve_method(cfg.method, 2));
  return r;
}

Json separability_report(const DensityState& rho, const RunConfig& cfg) {
  const EntanglementReport e = entanglement_check(rho, app_options(cfg));
  Json r;
  r["selfOverlap"] = e.selfOverlap;
  r["sepMax"] = e.sepMax;
  r["verdict"] = to_string(e.verdict);
  r["method"] = to_string(resolve_method(cfg.method, 3));
  return r;
}

std::vector<Dims> parse_sweep(const std::string& text) {
  if (text == "default") return {{2, 2, 2}, {2, 2, 3}, {2, 2, 4}, {2, 2, 5}, {2, 3, 3}};
  if (text == "full") return {{2, 2, 2}, {2, 2, 3}, {2, 2, 4}, {2, 2, 5}, {2, 3, 3}, {3, 3, 3}, {2, 3, 4}};
  std::vector<Dims> rows;
  std::stringstream rowsIn(text);
  std::string row;
  while (std::getline(rowsIn, row, ';')) {
    if (row.empty()) continue;
    Dims dims;
    std::stringstream in(row);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      std::size_t used = 0;
      long long d = 0;
      try {
        d = std::stoll(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || d <= 0)
        throw Error(ErrorCode::InvalidInput, "sweep row '" + row + "': dimensions must be positive integers");
      dims.push_back(static_cast<Index>(d));
    }
    if (dims.size() < 2) throw Error(ErrorCode::InvalidInput, "sweep row '" + row + "': needs at least two slots");
    rows.push_back(std::move(dims));
  }
  return rows;
}

BenchReport run_bench(const std::vector<Dims>& sweep, std::uint64_t seed, const GroebnerOptions& groebner) {
  BenchReport report;
  report.seed = seed;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    BenchRow row;
    row.dims = sweep[i];
    row.expected = count_extreme_classes(to_int64(row.dims)).get_str();
    std::mt19937_64 rng(seed + i);
    std::uniform_int_distribution<int> coeff(-9, 9);
    const Form form = Form::generate(row.dims, [&](std::span<const Index>) { return double(coeff(rng)); });
    SolveOptions so;
    so.seed = seed;
    so.groebner = groebner;
    const auto t0 = Clock::now();
    try {
      const SolveReport rep = solve_max(form, so);
      row.quotientDim = rep.quotientDim;
      row.classes = rep.quotientDim >> row.dims.size();
      row.matches = (row.classes << row.dims.size()) == row.quotientDim && std::to_string(row.classes) == row.expected;
      row.timings = rep.timings;
      row.maxValue = rep.maxValue;
    } catch (const Error& e) {
      row.status = to_string(e.code());
      row.message = e.what();
    }
    row.total = seconds_since(t0);
    report.rows.push_back(std::move(row));
  }
  return report;
}

Json bench_to_json(const BenchReport& report) {
  Json j;
  j["seed"] = report.seed;
  j["rows"] = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["dims"] = r.dims;
    row["status"] = r.status;
    if (!r.message.empty()) row["message"] = r.message;
    row["quotientDim"] = r.quotientDim;
    row["classes"] = r.classes;
    row["expected"] = r.expected;
    row["matches"] = r.matches;
    row["maxValue"] = r.maxValue;
    row["timings"] = timings_json(r.timings);
    row["timings"]["total"] = r.total;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

std::string bench_table(const BenchReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "instance" << std::right << std::setw(12) << "quotientDim" << std::setw(9)
     << "classes" << std::setw(10) << "expected" << std::setw(14) << "build+gb (s)" << std::setw(12) << "total (s)"
     << std::setw(18) << "maxValue" << "  status\n";
  for (const auto& r : report.rows) {
    os << std::left << std::setw(12) << dims_label(r.dims) << std::right << std::setw(12) << r.quotientDim
       << std::setw(9) << r.classes << std::setw(10) << r.expected << std::fixed << std::setprecision(4)
       << std::setw(14) << r.timings.build + r.timings.groebner << std::setw(12) << r.total
       << std::defaultfloat << std::setprecision(kReportDigits) << std::setw(18) << r.maxValue << "  "
       << (r.status == "ok" && !r.matches ? "count-mismatch" : r.status) << "\n";
  }
  return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maxima of multilinear forms over products of spheres"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string method = "auto", chart = "sphere";
  std::optional<std::uint64_t> seed;
  std::vector<long long> countDims;
  std::string sweep = "default", format = "table";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--method", method, "auto, power or algebraic")->check(CLI::IsMember({"auto", "power", "algebraic"}));
    sub->add_option("--tol", cfg.tol, "power-iteration stopping tolerance");
    sub->add_option("--max-iters", cfg.maxIters, "power-iteration limit");
    sub->add_option("--seed", seed, "random seed (default: SPHEREMAX_SEED or 0)");
    sub->add_flag("--force", cfg.force, "solve even when the dimension inequality fails");
    sub->add_option("--budget-reductions", cfg.budgetReductions, "S-polynomial reductions per Groebner run");
    sub->add_option("--out", cfg.outputPath, "write the report here instead of standard output");
  };

  CLI::App* maximize = app.add_subcommand("maximize", "maximum of |l| over the sphere product");
  maximize->add_option("input", cfg.inputPath, "tensor JSON")->required();
  common(maximize);
  maximize->add_option("--chart", chart, "sphere (maximum) or affine (argmax; selects the algebraic method under auto)")
      ->check(CLI::IsMember({"sphere", "affine"}));
  maximize->add_flag("--points", cfg.emitPoints, "also recover critical points in the sphere chart");

  CLI::App* count = app.add_subcommand("count", "number of classes of extreme points of a generic form");
  count->add_option("dims", countDims, "slot dimensions")->required();
  count->add_option("--out", cfg.outputPath, "write the count here instead of standard output");

  CLI::App* rank1 = app.add_subcommand("rank1", "closest rank-one form");
  rank1->add_option("input", cfg.inputPath, "tensor JSON")->required();
  common(rank1);

  CLI::App* norm2 = app.add_subcommand("norm2", "matrix 2-norm");
  norm2->add_option("input", cfg.inputPath, "matrix JSON")->required();
  common(norm2);

  CLI::App* separability = app.add_subcommand("separability", "separable-state bound and entanglement verdict");
  separability->add_option("input", cfg.inputPath, "state JSON")->required();
  common(separability);

  CLI::App* bench = app.add_subcommand("bench", "timed sphere-chart pipeline on random integer forms");
  bench->add_option("--sweep", sweep, "default, full, or rows like \"2,2,2;2,3,3\"");
  bench->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
  bench->add_option("--seed", seed, "random seed (default: SPHEREMAX_SEED or 0)");
  bench->add_option("--budget-reductions", cfg.budgetReductions, "S-polynomial reductions per Groebner run");
  bench->add_option("--out", cfg.outputPath, "write the report here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.method = parse_method(method);
    cfg.chart = parse_chart(chart);
    cfg.seed = seed ? *seed : default_seed();
    if (cfg.tol <= 0) throw Error(ErrorCode::InvalidInput, "--tol must be positive");
    if (cfg.maxIters <= 0) throw Error(ErrorCode::InvalidInput, "--max-iters must be positive");
    if (cfg.budgetReductions <= 0) throw Error(ErrorCode::InvalidInput, "--budget-reductions must be positive");

    if (cfg.command == "count") {
      std::vector<std::int64_t> dims;
      for (long long d : countDims) {
        if (d <= 0) throw Error(ErrorCode::InvalidInput, "dimensions must be positive, got " + std::to_string(d));
        dims.push_back(d);
      }
      emit(cfg, count_extreme_classes(dims).get_str() + "\n", out);
    } else if (cfg.command == "maximize") {
      emit_json(cfg, maximize_report(form_from_json(read_json_file(cfg.inputPath)), cfg), out);
    } else if (cfg.command == "rank1") {
      emit_json(cfg, rank1_report(form_from_json(read_json_file(cfg.inputPath)), cfg), out);
    } else if (cfg.command == "norm2") {
      emit_json(cfg, norm2_report(matrix_from_json(read_json_file(cfg.inputPath)), cfg), out);
    } else if (cfg.command == "separability") {
      emit_json(cfg, separability_report(state_from_json(read_json_file(cfg.inputPath)), cfg), out);
    } else if (cfg.command == "bench") {
      GroebnerOptions g;
      g.maxReductions = cfg.budgetReductions;
      const BenchReport report = run_bench(parse_sweep(sweep), cfg.seed, g);
      if (format == "json") emit_json(cfg, bench_to_json(report), out);
      else emit(cfg, bench_table(report), out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace spheremax::cli
