#pragma once

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "spheremax/io.hpp"
#include "spheremax/multiform.hpp"

namespace spheremax::test {

inline std::string data_path(const std::string& name) { return std::string(SPHEREMAX_TEST_DATA) + "/" + name; }

inline Form load_form(const std::string& name) { return form_from_json(read_json_file(data_path(name))); }
inline Matrix load_matrix(const std::string& name) { return matrix_from_json(read_json_file(data_path(name))); }
inline DensityState load_state(const std::string& name) { return state_from_json(read_json_file(data_path(name))); }

inline Form random_form(const Dims& dims, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Form::generate(dims, [&](std::span<const Index>) { return n(rng); });
}

/// Integer entries in [-bound, bound].  Small bounds hit rank-deficient
/// (non-generic) forms now and then; use a wide bound where genericity matters.
inline Form random_integer_form(const Dims& dims, std::mt19937_64& rng, int bound = 9) {
  std::uniform_int_distribution<int> u(-bound, bound);
  return Form::generate(dims, [&](std::span<const Index>) { return double(u(rng)); });
}

inline VectorXd random_unit(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(rng);
  return v.normalized();
}

inline std::vector<VectorXd> random_point(const Dims& dims, std::mt19937_64& rng) {
  std::vector<VectorXd> p;
  for (Index d : dims) p.push_back(random_unit(d, rng));
  return p;
}

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = d(rng);
  return m;
}

/// Largest |a_i - b_i| after flipping b to the sign of a.
inline double sign_class_distance(const VectorXd& a, const VectorXd& b) {
  return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

}  // namespace spheremax::test
