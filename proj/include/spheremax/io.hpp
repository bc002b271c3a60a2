#pragma once

// JSON formats shared by the command-line tools.
//
//   tensor  {"dims":[d1,...,dr],"coeffs":[...]}          row-major, slot 1 slowest
//   matrix  {"rows":r,"cols":c,"entries":[...]}           row-major
//   state   {"dimA":a,"dimB":b,"matrix":{matrix}}
//
// Parse errors throw InvalidInput (or DimensionMismatch for length
// mismatches) with a message naming the offending field.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "spheremax/apps.hpp"
#include "spheremax/linalg.hpp"
#include "spheremax/multiform.hpp"

namespace spheremax {

using Json = nlohmann::ordered_json;

/// Digits kept by round_significant and every emitted report.
inline constexpr int kReportDigits = 10;

double round_significant(double x, int digits = kReportDigits);

/// Copy of `j` with every floating-point number rounded to kReportDigits.
Json rounded(const Json& j);

/// Throws IoError if the file cannot be read, InvalidInput if it is not JSON.
Json read_json_file(const std::filesystem::path& path);

/// Throws IoError if the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

Form form_from_json(const Json& j);
Json form_to_json(const Form& form);

Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

DensityState state_from_json(const Json& j);
Json state_to_json(const DensityState& s);

Json vector_to_json(const VectorXd& v);

}  // namespace spheremax
