#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "spheremax/cli.hpp"
#include "spheremax/error.hpp"
#include "test_support.hpp"

using namespace spheremax;
using namespace spheremax::test;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spheremax");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Json run_json(const std::vector<std::string>& args) {
  const Outcome o = run_cli(args);
  EXPECT_EQ(o.code, 0) << o.err;
  return Json::parse(o.out);
}

Json without_timings(Json j) {
  if (j.is_object()) {
    j.erase("timings");
    for (auto& [k, v] : j.items()) v = without_timings(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timings(v);
  }
  return j;
}

class SeedEnv {
 public:
  explicit SeedEnv(const char* value) { setenv("SPHEREMAX_SEED", value, 1); }
  ~SeedEnv() { unsetenv("SPHEREMAX_SEED"); }
};

}  // namespace

TEST(ExitCode, Mapping) {
  EXPECT_EQ(cli::exit_code(ErrorCode::InvalidInput), 1);
  EXPECT_EQ(cli::exit_code(ErrorCode::DimensionMismatch), 1);
  EXPECT_EQ(cli::exit_code(ErrorCode::NotAState), 1);
  EXPECT_EQ(cli::exit_code(ErrorCode::IoError), 1);
  EXPECT_EQ(cli::exit_code(ErrorCode::BudgetExceeded), 2);
  EXPECT_EQ(cli::exit_code(ErrorCode::NotZeroDimensional), 2);
  EXPECT_EQ(cli::exit_code(ErrorCode::PreconditionViolated), 2);
  EXPECT_EQ(cli::exit_code(ErrorCode::NonConverged), 2);
}

TEST(Cli, Count) {
  EXPECT_EQ(run_cli({"count", "3", "3", "3"}).out, "37\n");
  EXPECT_EQ(run_cli({"count", "2", "2", "2", "2"}).out, "24\n");
  EXPECT_EQ(run_cli({"count", "0", "3"}).code, 1);
  EXPECT_EQ(run_cli({"count", "3"}).code, 1);
  EXPECT_EQ(run_cli({"count"}).code, 1);
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"norm2", data_path("matrix_4x3.json"), "--method", "newton"}).code, 1);
  EXPECT_EQ(run_cli({"norm2", data_path("matrix_4x3.json"), "--tol", "-1"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, Norm2Report) {
  const Json j = run_json({"norm2", data_path("matrix_4x3.json")});
  EXPECT_EQ(j["norm2"].get<double>(), 48.46054602);
  EXPECT_EQ(j["method"], "power");
  const Json a = run_json({"norm2", data_path("matrix_4x3.json"), "--method", "algebraic"});
  EXPECT_EQ(a["method"], "algebraic");
  EXPECT_NEAR(a["norm2"].get<double>(), 48.46054602, 1e-8);
}

TEST(Cli, MaximizeAlgebraicSchema) {
  const Json j = run_json({"maximize", data_path("four_linear.json"), "--points"});
  EXPECT_NEAR(j["maxValue"].get<double>(), 16.71262553, 1e-6);
  EXPECT_EQ(j["method"], "algebraic");
  EXPECT_EQ(j["chart"], "sphere");
  EXPECT_EQ(j["quotientDim"], 16 * 24);
  EXPECT_EQ(j["eigenvalueCount"], 16 * 24);
  EXPECT_TRUE(j["flags"].is_array());
  ASSERT_FALSE(j["points"].empty());
  const Json& p = j["points"][0];
  EXPECT_EQ(p["vectors"].size(), 4u);
  EXPECT_NEAR(std::abs(p["value"].get<double>()), j["maxValue"].get<double>(), 1e-8);
  for (const char* k : {"build", "groebner", "eigen", "total"}) EXPECT_TRUE(j["timings"][k].is_number()) << k;
}

TEST(Cli, MaximizeAffineChart) {
  const Json j = run_json({"maximize", data_path("four_linear.json"), "--chart", "affine"});
  EXPECT_EQ(j["chart"], "affine");
  EXPECT_EQ(j["quotientDim"], 24);
  EXPECT_NEAR(j["maxValue"].get<double>(), 16.71262553, 1e-6);
}

TEST(Cli, MaximizePowerSchema) {
  const Json j = run_json({"maximize", data_path("vector_form.json"), "--method", "power"});
  EXPECT_EQ(j["maxValue"].get<double>(), 4.472135955);
  EXPECT_EQ(j["status"], "converged");
  EXPECT_TRUE(j["quotientDim"].is_null());
  EXPECT_EQ(j["points"].size(), 1u);
}

TEST(Cli, Rank1Report) {
  const Json j = run_json({"rank1", data_path("tensor_2x3.json")});
  ASSERT_EQ(j["factors"].size(), 2u);
  const VectorXd y = (VectorXd(3) << -0.7821828869, 0.08939199251, -0.6166027924).finished();
  VectorXd got(3);
  for (int i = 0; i < 3; ++i) got[i] = j["factors"][1][i].get<double>();
  EXPECT_LT(sign_class_distance(got, y), 1e-9);
  EXPECT_GE(j["distance"].get<double>(), 0.0);
}

TEST(Cli, Separability) {
  const Json j = run_json({"separability", data_path("state1.json"), "--method", "power"});
  EXPECT_EQ(j["verdict"], "separable-consistent");
  EXPECT_NEAR(j["selfOverlap"].get<double>(), 0.4689890034, 1e-9);
  EXPECT_EQ(run_cli({"separability", data_path("not_a_state.json")}).code, 1);
}

TEST(Cli, ErrorsGoToStderr) {
  const Outcome o = run_cli({"maximize", data_path("bad_length.json")});
  EXPECT_EQ(o.code, 1);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("coeffs length mismatch"), std::string::npos);
  EXPECT_EQ(run_cli({"maximize", data_path("missing.json")}).code, 1);
  EXPECT_EQ(run_cli({"maximize", data_path("malformed.json")}).code, 1);
  EXPECT_EQ(run_cli({"maximize", "--chart", "affine", data_path("tensor_2x3.json")}).code, 2);
  EXPECT_EQ(run_cli({"maximize", "--method", "algebraic", "--budget-reductions", "1", data_path("four_linear.json")}).code,
            2);
}

TEST(Cli, ForceBypassesDimensionInequality) {
  const Json j = run_json({"maximize", "--chart", "affine", "--force", data_path("tensor_2x3.json")});
  EXPECT_FALSE(j["flags"].empty());
}

TEST(Cli, OutFlagWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "spheremax_cli_out.json";
  const Outcome o = run_cli({"norm2", data_path("matrix_4x3.json"), "--out", path.string()});
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(read_json_file(path)["norm2"].get<double>(), 48.46054602);
  std::filesystem::remove(path);
  EXPECT_EQ(run_cli({"norm2", data_path("matrix_4x3.json"), "--out", "/nonexistent_dir/x.json"}).code, 1);
}

TEST(Cli, DeterministicApartFromTimings) {
  const std::vector<std::string> args{"maximize", data_path("trilinear_counterexample.json"), "--points"};
  EXPECT_EQ(without_timings(run_json(args)), without_timings(run_json(args)));
  const std::vector<std::string> power{"maximize", "--method", "power", "--seed", "5", data_path("four_linear.json")};
  EXPECT_EQ(without_timings(run_json(power)), without_timings(run_json(power)));
}

TEST(Cli, SeedFromEnvironment) {
  {
    SeedEnv env("42");
    EXPECT_EQ(cli::default_seed(), 42u);
    const Json j = run_json({"bench", "--sweep", "", "--format", "json"});
    EXPECT_EQ(j["seed"], 42);
    const Json k = run_json({"bench", "--sweep", "", "--format", "json", "--seed", "7"});
    EXPECT_EQ(k["seed"], 7);
  }
  {
    SeedEnv env("abc");
    EXPECT_THROW(cli::default_seed(), Error);
    EXPECT_EQ(run_cli({"count", "2", "2"}).code, 1);
  }
  EXPECT_EQ(cli::default_seed(), 0u);
}

TEST(Bench, ParseSweep) {
  EXPECT_EQ(cli::parse_sweep("default").size(), 5u);
  EXPECT_EQ(cli::parse_sweep("full").size(), 7u);
  EXPECT_TRUE(cli::parse_sweep("").empty());
  EXPECT_EQ(cli::parse_sweep("2,2,2;2,3,3"), (std::vector<Dims>{{2, 2, 2}, {2, 3, 3}}));
  EXPECT_THROW(cli::parse_sweep("2,x"), Error);
  EXPECT_THROW(cli::parse_sweep("3"), Error);
}

TEST(Bench, EmptySweep) {
  const Json j = run_json({"bench", "--sweep", "", "--format", "json"});
  EXPECT_TRUE(j["rows"].empty());
  const Outcome t = run_cli({"bench", "--sweep", ""});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("instance"), std::string::npos);
}

TEST(Bench, SingleRowMatchesCount) {
  const Json j = run_json({"bench", "--sweep", "2,2,2", "--format", "json"});
  ASSERT_EQ(j["rows"].size(), 1u);
  const Json& r = j["rows"][0];
  EXPECT_EQ(r["status"], "ok");
  EXPECT_EQ(r["quotientDim"], 48);
  EXPECT_EQ(r["classes"], 6);
  EXPECT_EQ(r["expected"], "6");
  EXPECT_TRUE(r["matches"].get<bool>());
  const Outcome t = run_cli({"bench", "--sweep", "2,2,2"});
  EXPECT_NE(t.out.find("(2,2,2)"), std::string::npos);
  EXPECT_NE(t.out.find("ok"), std::string::npos);
}

TEST(Bench, BudgetFailureMarksRow) {
  const auto report = cli::run_bench({{2, 2, 2}, {2, 3}}, 0, GroebnerOptions{.maxReductions = 1});
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].status, "BudgetExceeded");
  EXPECT_FALSE(report.rows[0].matches);
  EXPECT_NE(cli::bench_table(report).find("BudgetExceeded"), std::string::npos);
}
