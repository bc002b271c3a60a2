#include "spheremax/apps.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "spheremax/error.hpp"

namespace spheremax {

namespace {

constexpr double kWeightFloor = 1e-12;
constexpr double kStateTol = 1e-10;
constexpr double kOverlapMargin = 1e-9;

// Best critical point from the power method, as unit slot vectors.  With three
// or more slots each start ends with alternating refinement.
IterationResult power_point(const Form& form, const AppOptions& opts) {
  if (form.order() == 2) {
    IterationResult r = bilinear_max(form, opts.iteration);
    if (r.status != IterationStatus::Converged)
      throw Error(ErrorCode::NonConverged, "power iteration stopped with status " + std::string(to_string(r.status)));
    return r;
  }
  std::optional<IterationResult> best;
  for (int s = 0; s < opts.powerStarts; ++s) {
    IterationOptions o = opts.iteration;
    o.seed = opts.iteration.seed + static_cast<std::uint64_t>(s);
    IterationResult r = multilinear_iterate(form, o);
    if (r.residual > opts.solve.residualTol) {
      try {
        r = alternating_iterate(form, r.point, o);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroGradient) throw;
        continue;
      }
    }
    if (r.residual <= opts.solve.residualTol && (!best || r.value > best->value)) best = std::move(r);
  }
  if (!best) throw Error(ErrorCode::NonConverged, "no power-iteration start reached a critical point");
  return *best;
}

double power_max(const Form& form, const AppOptions& opts) { return power_point(form, opts).value; }

bool is_zero(const Form& form) { return form.size() == 0 || form.coeffs().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Power: return "power";
    case Method::Algebraic: return "algebraic";
  }
  return "auto";
}

Method parse_method(std::string_view name) {
  if (name == "auto") return Method::Auto;
  if (name == "power") return Method::Power;
  if (name == "algebraic") return Method::Algebraic;
  throw Error(ErrorCode::InvalidInput, "unknown method '" + std::string(name) + "' (auto, power, algebraic)");
}

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::Entangled ? "entangled" : "separable-consistent";
}

Method resolve_method(Method m, Index order) {
  if (m != Method::Auto) return m;
  return order == 2 ? Method::Power : Method::Algebraic;
}

Form bilinear_form(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw Error(ErrorCode::InvalidInput, "matrix must be non-empty");
  VectorXd coeffs(a.size());
  Eigen::Map<RowMajorMatrix<double>>(coeffs.data(), a.rows(), a.cols()) = a;
  return Form({a.rows(), a.cols()}, std::move(coeffs));
}

double matrix_norm2(const Matrix& a, const AppOptions& opts) {
  const Form form = bilinear_form(a);
  if (is_zero(form)) return 0.0;
  if (resolve_method(opts.method, 2) == Method::Power) return power_max(form, opts);
  return solve_max(form, opts.solve).maxValue;
}

RankOneApproximation closest_rank_one(const Form& form, const AppOptions& opts) {
  if (is_zero(form)) throw Error(ErrorCode::InvalidInput, "the zero form has no closest rank-one form on the spheres");
  RankOneApproximation out;
  out.method = resolve_method(opts.method, form.order());

  std::vector<VectorXd> point;
  if (out.method == Method::Algebraic) {
    try {
      SolveReport rep;
      if (satisfies_dimension_inequality(form.dims()) || opts.solve.force) {
        rep = solve_argmax(form, opts.solve);
      } else {
        SolveOptions so = opts.solve;
        so.emitPoints = true;
        rep = solve_max(form, so);
        out.flags.push_back("dimension inequality fails; argmax read from the sphere chart");
      }
      if (rep.points.empty()) throw Error(ErrorCode::DegenerateEigenvector, "no real critical point recovered");
      point = rep.points.front().vectors;
      out.flags.insert(out.flags.end(), rep.flags.begin(), rep.flags.end());
    } catch (const Error& e) {
      if (opts.method != Method::Auto || e.code() != ErrorCode::NotZeroDimensional) throw;
      out.flags.push_back("critical set is positive-dimensional; fell back to power iteration");
      out.method = Method::Power;
    }
  }
  if (out.method == Method::Power) point = power_point(form, opts).point;

  double value = evaluate(form, point);
  if (value < 0) {
    point.back() = -point.back();
    value = -value;
  }
  out.factors.factors = std::move(point);
  out.maxValue = value;
  const double n2 = form_norm(form) * form_norm(form);
  out.distance = std::sqrt(std::max(0.0, n2 + 1.0 - 2.0 * value));
  return out;
}

void DensityState::validate() const {
  if (dimA <= 0 || dimB <= 0) throw Error(ErrorCode::NotAState, "dimA and dimB must be positive");
  const Index n = dimA * dimB;
  if (matrix.rows() != n || matrix.cols() != n)
    throw Error(ErrorCode::NotAState, "matrix order must be dimA*dimB = " + std::to_string(n));
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > kStateTol)
    throw Error(ErrorCode::NotAState, "matrix is not symmetric");
  if (std::abs(matrix.trace() - 1.0) > kStateTol) throw Error(ErrorCode::NotAState, "trace is not 1");
  const Matrix sym = 0.5 * (matrix + matrix.transpose());
  if (eig_symmetric(sym).eigenvalues.minCoeff() < -kStateTol)
    throw Error(ErrorCode::NotAState, "matrix has a negative eigenvalue");
}

std::vector<WeightedVector> spectral_terms(const Matrix& rho, SpectralRoute route) {
  std::vector<WeightedVector> out;
  if (route == SpectralRoute::Symmetric) {
    const auto eig = eig_symmetric(0.5 * (rho + rho.transpose()));
    for (Index i = 0; i < eig.eigenvalues.size(); ++i)
      if (eig.eigenvalues[i] >= kWeightFloor) out.push_back({eig.eigenvalues[i], eig.eigenvectors.col(i)});
  } else {
    // F F^T = rho and F = U S V^T give rho = U S^2 U^T.
    const auto dec = svd(cholesky(0.5 * (rho + rho.transpose())).factor());
    for (Index i = 0; i < dec.singularValues.size(); ++i) {
      const double w = dec.singularValues[i] * dec.singularValues[i];
      if (w >= kWeightFloor) out.push_back({w, dec.u.col(i)});
    }
  }
  return out;
}

Form separability_form(const DensityState& rho, SpectralRoute route) {
  rho.validate();
  const Index n = rho.dimA * rho.dimB;
  Matrix root = Matrix::Zero(n, n);  // sum sqrt(w) v v^T
  for (const auto& t : spectral_terms(rho.matrix, route)) root += std::sqrt(t.weight) * t.vector * t.vector.transpose();
  // Coefficient (a, b, k) = root(a*dimB + b, k).
  return Form::generate({rho.dimA, rho.dimB, n}, [&](std::span<const Index> idx) {
    return root(idx[0] * rho.dimB + idx[1], idx[2]);
  });
}

double separable_max(const DensityState& rho, const AppOptions& opts) {
  const Form form = separability_form(rho);
  double m = 0;
  // Rank k <= dimA*dimB - 2 leaves a positive-dimensional set of zero-value
  // critical points, so the exact solver cannot succeed.
  const auto rank = static_cast<Index>(spectral_terms(rho.matrix).size());
  const bool lowRank = rank + 2 <= rho.dimA * rho.dimB;
  if (resolve_method(opts.method, form.order()) == Method::Power || (opts.method == Method::Auto && lowRank)) {
    m = power_max(form, opts);
  } else {
    try {
      m = solve_max(form, opts.solve).maxValue;
    } catch (const Error& e) {
      if (opts.method != Method::Auto || e.code() != ErrorCode::NotZeroDimensional) throw;
      m = power_max(form, opts);
    }
  }
  return m * m;
}

EntanglementReport entanglement_check(const DensityState& rho, const AppOptions& opts) {
  EntanglementReport r;
  r.sepMax = separable_max(rho, opts);
  r.selfOverlap = rho.matrix.squaredNorm();
  r.verdict = r.selfOverlap > r.sepMax + kOverlapMargin ? Verdict::Entangled : Verdict::SeparableConsistent;
  return r;
}

}  // namespace spheremax
