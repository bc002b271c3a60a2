#pragma once

// Applications: matrix 2-norm, closest rank-one form and the separable-state
// bound for real bipartite density matrices.

#include <string>
#include <string_view>
#include <vector>

#include "spheremax/algsolver.hpp"
#include "spheremax/linalg.hpp"
#include "spheremax/multiform.hpp"
#include "spheremax/poweriter.hpp"

namespace spheremax {

enum class Method { Auto, Power, Algebraic };

std::string_view to_string(Method m) noexcept;
/// "auto" | "power" | "algebraic"; throws InvalidInput otherwise.
Method parse_method(std::string_view name);

struct AppOptions {
  Method method = Method::Auto;
  IterationOptions iteration;
  SolveOptions solve;
  /// Seeds tried by the power method on forms with three or more slots.
  int powerStarts = 50;
};

/// Auto resolves to Power for two slots and Algebraic otherwise.
Method resolve_method(Method m, Index order);

/// Form x^T A y with dims (rows, cols).
Form bilinear_form(const Matrix& a);

/// Largest singular value via the bilinear form; 0 for the zero matrix.
double matrix_norm2(const Matrix& a, const AppOptions& opts = {});

struct RankOneApproximation {
  RankOneForm<double> factors;  // unit vectors
  double maxValue = 0;          // l(factors) >= 0
  double distance = 0;          // ||l - factors||
  Method method = Method::Auto;
  std::vector<std::string> flags;
};

/// Throws InvalidInput for the zero form; solver errors propagate.
RankOneApproximation closest_rank_one(const Form& form, const AppOptions& opts = {});

struct DensityState {
  Index dimA = 0;
  Index dimB = 0;
  Matrix matrix;

  /// Throws NotAState unless symmetric (1e-10), PSD (-1e-10) and unit trace (1e-10).
  void validate() const;
};

enum class SpectralRoute { Symmetric, CholeskySvd };

struct WeightedVector {
  double weight;
  VectorXd vector;  // unit
};

/// rho = sum_i w_i v_i v_i^T with w_i >= 1e-12, descending.  The Cholesky
/// route reads w_i = sigma_i^2 and v_i = u_i off the SVD of a Cholesky factor.
std::vector<WeightedVector> spectral_terms(const Matrix& rho, SpectralRoute route = SpectralRoute::Symmetric);

/// l(x, y, z) = sum_i sqrt(w_i) <v_i, x (x) y> <v_i, z>, dims (dimA, dimB, dimA*dimB).
Form separability_form(const DensityState& rho, SpectralRoute route = SpectralRoute::Symmetric);

/// max over product states of <rho, xx^T (x) yy^T>, the squared maximum of
/// the separability form.
double separable_max(const DensityState& rho, const AppOptions& opts = {});

enum class Verdict { SeparableConsistent, Entangled };
std::string_view to_string(Verdict v) noexcept;

struct EntanglementReport {
  Verdict verdict = Verdict::SeparableConsistent;
  double selfOverlap = 0;  // <rho, rho>
  double sepMax = 0;
};

/// Entangled iff <rho, rho> > sepMax + 1e-9.
EntanglementReport entanglement_check(const DensityState& rho, const AppOptions& opts = {});

}  // namespace spheremax
