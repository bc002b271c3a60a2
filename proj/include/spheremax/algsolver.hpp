#pragma once

// Exact critical-point systems of multilinear forms and their solution by
// Groebner bases and multiplication-matrix eigenvalues.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spheremax/groebner.hpp"
#include "spheremax/multiform.hpp"

namespace spheremax {

enum class Chart { Sphere, Affine };

constexpr std::string_view to_string(Chart c) noexcept { return c == Chart::Sphere ? "sphere" : "affine"; }

struct PolySystem {
  std::vector<RationalPoly> polys;
  std::vector<std::string> variables;  // x1.., y1.., z1.., t1.., u1.., v1..
  Chart chart = Chart::Sphere;
  Dims dims;

  /// Index of coordinate `coord` (0-based) of slot `slot` (0-based).
  std::size_t variable_index(Index slot, Index coord) const;
};

/// Minor equations x_b dl/dx_a - x_a dl/dx_b for each slot and a < b, then
/// one chart equation per slot (|x|^2 = 1 or x_1 = 1).
PolySystem build_critical_system(const Form& form, Chart chart);

/// l as a polynomial in the system's variables.
RationalPoly form_polynomial(const Form& form, std::span<const std::string> variables);

struct CriticalPoint {
  std::vector<VectorXd> vectors;  // unit per slot, first nonzero coordinate positive
  double value = 0;
  /// max_i ||dl/dx_i - l x_i|| / (1 + |l|).
  double residual = 0;
  bool real = true;
};

struct StageTimings {
  double build = 0;     // system construction
  double groebner = 0;  // basis and normal set
  double eigen = 0;     // multiplication matrices, eigenvalues, points
};

struct SolveReport {
  Chart chart = Chart::Sphere;
  std::size_t quotientDim = 0;
  Eigen::VectorXcd eigenvalues;
  std::size_t realEigenvalueCount = 0;
  double maxValue = 0;
  std::vector<CriticalPoint> points;  // descending |value|
  std::vector<std::string> flags;
  StageTimings timings;
  GroebnerStats groebnerStats;
};

struct SolveOptions {
  double realTol = 1e-8;
  double residualTol = 1e-6;
  bool force = false;
  bool emitPoints = false;  // solve_max only; solve_argmax always extracts
  std::uint64_t seed = 0;
  int separatorRetries = 3;
  GroebnerOptions groebner;
};

/// 2 n_i <= sum_j n_j for every slot, with n_i = dims[i] - 1.
bool satisfies_dimension_inequality(const Dims& dims);

/// Sphere-chart pipeline: maxValue is the largest |Re lambda| over the
/// (numerically) real eigenvalues of the multiplication matrix of l.
SolveReport solve_max(const Form& form, const SolveOptions& opts = {});

/// Affine-chart pipeline reading points off the left eigenvectors of the
/// multiplication matrix of the first free variable.  Throws
/// PreconditionViolated unless the dimension inequality holds or opts.force.
SolveReport solve_argmax(const Form& form, const SolveOptions& opts = {});

}  // namespace spheremax
