#include "spheremax/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spheremax/error.hpp"

namespace spheremax {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::InvalidInput, "field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& field) {
  if (!j.is_object()) bad_field(field, "expected a JSON object holding it");
  const auto it = j.find(field);
  if (it == j.end()) bad_field(field, "missing");
  return *it;
}

Index positive_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) bad_field(field, "expected a positive integer");
  const auto v = j.get<std::int64_t>();
  if (v <= 0) bad_field(field, "expected a positive integer, got " + std::to_string(v));
  return static_cast<Index>(v);
}

std::vector<double> number_array(const Json& j, const std::string& field) {
  if (!j.is_array()) bad_field(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad_field(field, "entry " + std::to_string(i) + " is not a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

}  // namespace

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

Json rounded(const Json& j) {
  if (j.is_number_float()) return round_significant(j.get<double>());
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& e : j) out.push_back(rounded(e));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = rounded(v);
    return out;
  }
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
}

Form form_from_json(const Json& j) {
  const Json& dimsJ = require(j, "dims");
  if (!dimsJ.is_array() || dimsJ.empty()) bad_field("dims", "expected a non-empty array of positive integers");
  Dims dims;
  for (const auto& d : dimsJ) dims.push_back(positive_int(d, "dims"));
  const std::vector<double> c = number_array(require(j, "coeffs"), "coeffs");
  if (static_cast<Index>(c.size()) != product_of(dims))
    throw Error(ErrorCode::DimensionMismatch, "field 'coeffs': coeffs length mismatch: expected " +
                                                  std::to_string(product_of(dims)) + ", got " +
                                                  std::to_string(c.size()));
  return Form(std::move(dims), Eigen::Map<const VectorXd>(c.data(), static_cast<Index>(c.size())));
}

Json form_to_json(const Form& form) {
  Json j;
  j["dims"] = form.dims();
  j["coeffs"] = vector_to_json(form.coeffs());
  return j;
}

Matrix matrix_from_json(const Json& j) {
  const Index rows = positive_int(require(j, "rows"), "rows");
  const Index cols = positive_int(require(j, "cols"), "cols");
  const std::vector<double> e = number_array(require(j, "entries"), "entries");
  if (static_cast<Index>(e.size()) != rows * cols)
    throw Error(ErrorCode::DimensionMismatch, "field 'entries': entries length mismatch: expected " +
                                                  std::to_string(rows * cols) + ", got " + std::to_string(e.size()));
  return Eigen::Map<const RowMajorMatrix<double>>(e.data(), rows, cols);
}

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  const RowMajorMatrix<double> r = m;
  j["entries"] = std::vector<double>(r.data(), r.data() + r.size());
  return j;
}

DensityState state_from_json(const Json& j) {
  DensityState s;
  s.dimA = positive_int(require(j, "dimA"), "dimA");
  s.dimB = positive_int(require(j, "dimB"), "dimB");
  s.matrix = matrix_from_json(require(j, "matrix"));
  if (s.matrix.rows() != s.dimA * s.dimB || s.matrix.cols() != s.dimA * s.dimB)
    bad_field("matrix", "order must be dimA*dimB = " + std::to_string(s.dimA * s.dimB));
  return s;
}

Json state_to_json(const DensityState& s) {
  Json j;
  j["dimA"] = s.dimA;
  j["dimB"] = s.dimB;
  j["matrix"] = matrix_to_json(s.matrix);
  return j;
}

Json vector_to_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace spheremax
