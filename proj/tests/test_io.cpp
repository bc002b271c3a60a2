#include <cmath>
#include <filesystem>
#include <functional>

#include "spheremax/error.hpp"
#include "test_support.hpp"

using namespace spheremax;
using namespace spheremax::test;

namespace {

ErrorCode code_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST(RoundSignificant, TenDigits) {
  EXPECT_EQ(round_significant(48.460546021234), 48.46054602);
  EXPECT_EQ(round_significant(std::sqrt(20.0)), 4.472135955);
  EXPECT_EQ(round_significant(-0.000123456789012), -0.0001234567890);
  EXPECT_EQ(round_significant(0.0), 0.0);
  EXPECT_EQ(round_significant(3.0, 1), 3.0);
}

TEST(Rounded, RecursesIntoContainers) {
  const Json j = Json::parse(R"({"a": 1.23456789012345, "b": [2.000000000049, 7], "c": {"d": "x", "e": true}})");
  const Json r = rounded(j);
  EXPECT_EQ(r["a"].get<double>(), 1.234567890);
  EXPECT_EQ(r["b"][0].get<double>(), 2.0);
  EXPECT_TRUE(r["b"][1].is_number_integer());
  EXPECT_EQ(r["c"], j["c"]);
  EXPECT_EQ(r.begin().key(), "a");
}

TEST(FormJson, RoundTrip) {
  std::mt19937_64 rng(1);
  const Form f = random_form({2, 3, 2}, rng);
  const Form g = form_from_json(Json::parse(form_to_json(f).dump()));
  EXPECT_EQ(g.dims(), f.dims());
  EXPECT_EQ(g.coeffs(), f.coeffs());
}

TEST(FormJson, LoadsRowMajor) {
  const Form f = load_form("tensor_2x3.json");
  EXPECT_EQ(f.dims(), (Dims{2, 3}));
  EXPECT_EQ(f.coeffs()[3], -9);
}

TEST(FormJson, Errors) {
  std::string msg;
  EXPECT_EQ(code_of([] { load_form("bad_length.json"); }, &msg), ErrorCode::DimensionMismatch);
  EXPECT_NE(msg.find("coeffs"), std::string::npos);
  EXPECT_EQ(code_of([] { load_form("bad_dims.json"); }, &msg), ErrorCode::InvalidInput);
  EXPECT_NE(msg.find("dims"), std::string::npos);
  EXPECT_EQ(code_of([] { form_from_json(Json::parse(R"({"coeffs": [1]})")); }, &msg), ErrorCode::InvalidInput);
  EXPECT_NE(msg.find("dims"), std::string::npos);
  EXPECT_EQ(code_of([] { form_from_json(Json::parse(R"({"dims": [1], "coeffs": ["a"]})")); }, &msg),
            ErrorCode::InvalidInput);
  EXPECT_NE(msg.find("coeffs"), std::string::npos);
  EXPECT_EQ(code_of([] { form_from_json(Json::parse(R"({"dims": [1.5], "coeffs": [1]})")); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { form_from_json(Json::parse("[1, 2]")); }), ErrorCode::InvalidInput);
}

TEST(MatrixJson, RoundTripAndLayout) {
  const Matrix a = load_matrix("matrix_4x3.json");
  EXPECT_EQ(a.rows(), 4);
  EXPECT_EQ(a.cols(), 3);
  EXPECT_EQ(matrix_from_json(matrix_to_json(a)), a);
  const Matrix b = matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "entries": [1, 2, 3, 4]})"));
  EXPECT_EQ(b(0, 1), 2);
  EXPECT_EQ(b(1, 0), 3);
  std::string msg;
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "entries": [1]})")); }, &msg),
            ErrorCode::DimensionMismatch);
  EXPECT_NE(msg.find("entries"), std::string::npos);
}

TEST(StateJson, RoundTripAndErrors) {
  const DensityState s = load_state("state2.json");
  const DensityState t = state_from_json(state_to_json(s));
  EXPECT_EQ(t.dimA, 2);
  EXPECT_EQ(t.matrix, s.matrix);
  std::string msg;
  EXPECT_EQ(code_of([] { state_from_json(Json::parse(R"({"dimA": 2, "dimB": 3, "matrix": {"rows": 1, "cols": 1,
      "entries": [1]}})")); }, &msg), ErrorCode::InvalidInput);
  EXPECT_NE(msg.find("matrix"), std::string::npos);
  EXPECT_EQ(code_of([] { state_from_json(Json::parse(R"({"dimA": 2})")); }, &msg), ErrorCode::InvalidInput);
  EXPECT_NE(msg.find("dimB"), std::string::npos);
}

TEST(Files, ReadErrors) {
  std::string msg;
  EXPECT_EQ(code_of([] { read_json_file(data_path("does_not_exist.json")); }, &msg), ErrorCode::IoError);
  EXPECT_NE(msg.find("does_not_exist.json"), std::string::npos);
  EXPECT_EQ(code_of([] { read_json_file(data_path("malformed.json")); }), ErrorCode::InvalidInput);
}

TEST(Files, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "spheremax_io_test.json";
  write_text_file(path, R"({"x": [1, 2]})");
  EXPECT_EQ(read_json_file(path)["x"][1], 2);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([] { write_text_file("/nonexistent_dir/x.json", "{}"); }), ErrorCode::IoError);
}
