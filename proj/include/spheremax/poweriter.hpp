#pragma once

// Projective power iteration for forms and matrices.
//
// For a bilinear form x^T A y the gradient map (x, y) -> (A y, A^T x) is linear
// and its eigenvalues come in pairs +-sigma_i, so the iterates settle into a
// two-cycle whose slot projections both equal the top singular pair; the
// stopping test accepts alignment with either of the last two iterates.

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "spheremax/linalg.hpp"
#include "spheremax/multiform.hpp"

namespace spheremax {

enum class IterationStatus { Converged, NonConverged, Oscillating };

constexpr std::string_view to_string(IterationStatus s) noexcept {
  switch (s) {
    case IterationStatus::Converged: return "converged";
    case IterationStatus::NonConverged: return "nonconverged";
    case IterationStatus::Oscillating: return "oscillating";
  }
  return "unknown";
}

struct IterationOptions {
  std::uint64_t seed = 0;
  double tol = 1e-14;
  std::int64_t maxIters = 100000;
  int restarts = 5;
};

struct IterationResult {
  std::vector<VectorXd> point;  // unit vector per slot
  double value = 0;             // |l(point)|
  std::int64_t iterations = 0;
  IterationStatus status = IterationStatus::NonConverged;
  /// max_i ||d l/d x_i - l x_i|| / (1 + |l|); Converged implies <= 10 tol.
  double residual = std::numeric_limits<double>::infinity();
  std::uint64_t seedUsed = 0;
};

/// Maximizes |l| over S^{n} x S^{m} for a bilinear form.  Throws ZeroGradient
/// after exhausting restarts; returns status NonConverged after maxIters.
IterationResult bilinear_max(const Form& form, const IterationOptions& opts = {});

/// Dominant |lambda| of a square matrix by iterating w -> M w.  Throws
/// NonConverged when the iteration cycles (tied dominant magnitudes) or runs
/// out of iterations.
double spectral_radius(const Matrix& m, const IterationOptions& opts = {});

/// Normalized-gradient iteration on the concatenated vector for r >= 3
/// (r == 2 delegates to bilinear_max).  A Converged result is a critical
/// point, not a certified maximum; cycles of period <= 4 stop as Oscillating.
IterationResult multilinear_iterate(const Form& form, const IterationOptions& opts = {});

/// Runs multilinear_iterate from `starts` consecutive seeds and keeps the
/// largest value among runs whose relative residual is below `acceptResidual`
/// (lowest seed wins ties).
IterationResult multistart_iterate(const Form& form, int starts, const IterationOptions& opts = {},
                                   double acceptResidual = 1e-6);

/// Slot-by-slot updates x_s <- d_s l / ||d_s l|| from `start`, reusing the
/// freshly updated slots.  |l| never decreases, so the run settles on a
/// critical point even where the concatenated iteration cycles.  Converged
/// once the relative residual is at most 10 tol.
IterationResult alternating_iterate(const Form& form, std::vector<VectorXd> start, const IterationOptions& opts = {});

}  // namespace spheremax
