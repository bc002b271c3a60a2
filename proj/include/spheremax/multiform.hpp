#pragma once

// Dense multilinear forms l : R^{d_1} x ... x R^{d_r} -> R stored as a
// row-major coefficient tensor (slot 1 varies slowest).  Slots are 0-based in
// the C++ API; external file formats and variable names are 1-based.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spheremax/error.hpp"

namespace spheremax {

using Index = Eigen::Index;
using Dims = std::vector<Index>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Index product_of(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

template <typename Scalar>
class MultilinearForm {
 public:
  MultilinearForm() = default;

  MultilinearForm(Dims dims, Vector<Scalar> coeffs) : dims_(std::move(dims)), coeffs_(std::move(coeffs)) {
    if (dims_.empty()) throw Error(ErrorCode::InvalidInput, "a form needs at least one slot");
    for (Index d : dims_)
      if (d <= 0) throw Error(ErrorCode::InvalidInput, "slot dimensions must be positive");
    if (coeffs_.size() != product_of(dims_))
      throw Error(ErrorCode::DimensionMismatch,
                  "coeffs length mismatch: expected " + std::to_string(product_of(dims_)) + ", got " +
                      std::to_string(coeffs_.size()));
  }

  static MultilinearForm zero(Dims dims) {
    const Index n = product_of(dims);
    return MultilinearForm(std::move(dims), Vector<Scalar>::Zero(n));
  }

  /// Builds a form from a callback over 0-based multi-indices, visited in
  /// storage order.
  template <typename Fn>
  static MultilinearForm generate(Dims dims, Fn&& fn) {
    Vector<Scalar> coeffs(product_of(dims));
    std::vector<Index> idx(dims.size(), 0);
    for (Index k = 0; k < coeffs.size(); ++k) {
      coeffs[k] = fn(std::span<const Index>(idx));
      for (std::size_t s = dims.size(); s-- > 0;) {
        if (++idx[s] < dims[s]) break;
        idx[s] = 0;
      }
    }
    return MultilinearForm(std::move(dims), std::move(coeffs));
  }

  const Dims& dims() const noexcept { return dims_; }
  Index order() const noexcept { return static_cast<Index>(dims_.size()); }
  Index size() const noexcept { return coeffs_.size(); }
  const Vector<Scalar>& coeffs() const noexcept { return coeffs_; }

  Index linear_index(std::span<const Index> idx) const {
    if (static_cast<Index>(idx.size()) != order())
      throw Error(ErrorCode::DimensionMismatch, "multi-index has wrong arity");
    Index k = 0;
    for (std::size_t s = 0; s < dims_.size(); ++s) {
      if (idx[s] < 0 || idx[s] >= dims_[s]) throw Error(ErrorCode::DimensionMismatch, "multi-index out of range");
      k = k * dims_[s] + idx[s];
    }
    return k;
  }

  Scalar coeff(std::span<const Index> idx) const { return coeffs_[linear_index(idx)]; }

  template <typename NewScalar>
  MultilinearForm<NewScalar> cast() const {
    return MultilinearForm<NewScalar>(dims_, coeffs_.template cast<NewScalar>());
  }

 private:
  Dims dims_;
  Vector<Scalar> coeffs_;
};

namespace detail {

template <typename Scalar>
void check_points(const MultilinearForm<Scalar>& form, std::span<const Vector<Scalar>> points) {
  if (static_cast<Index>(points.size()) != form.order())
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(form.order()) + " vectors, got " +
                                                  std::to_string(points.size()));
  for (std::size_t s = 0; s < points.size(); ++s)
    if (points[s].size() != form.dims()[s])
      throw Error(ErrorCode::DimensionMismatch, "vector " + std::to_string(s + 1) + " has length " +
                                                    std::to_string(points[s].size()) + ", slot expects " +
                                                    std::to_string(form.dims()[s]));
}

// Contracts every slot except `keep` against the given vectors.
template <typename Scalar>
Vector<Scalar> contract_except(const MultilinearForm<Scalar>& form, Index keep,
                               std::span<const Vector<Scalar>> points) {
  const Dims& dims = form.dims();
  Vector<Scalar> t = form.coeffs();
  Index rest = t.size();
  for (Index j = form.order() - 1; j > keep; --j) {
    rest /= dims[j];
    Vector<Scalar> next = Eigen::Map<const RowMajorMatrix<Scalar>>(t.data(), rest, dims[j]) * points[j];
    t = std::move(next);
  }
  for (Index j = 0; j < keep; ++j) {
    rest /= dims[j];
    Vector<Scalar> next =
        Eigen::Map<const RowMajorMatrix<Scalar>>(t.data(), dims[j], rest).transpose() * points[j];
    t = std::move(next);
  }
  return t;
}

}  // namespace detail

/// Gradient of the form with respect to one slot: component i is the form
/// evaluated with that slot replaced by e_i.  Independent of points[slot].
template <typename Scalar>
Vector<Scalar> partial_gradient(const MultilinearForm<Scalar>& form, Index slot,
                                std::span<const Vector<Scalar>> points) {
  detail::check_points(form, points);
  if (slot < 0 || slot >= form.order()) throw Error(ErrorCode::DimensionMismatch, "slot out of range");
  return detail::contract_except(form, slot, points);
}

template <typename Scalar>
Scalar evaluate(const MultilinearForm<Scalar>& form, std::span<const Vector<Scalar>> points) {
  detail::check_points(form, points);
  const Index last = form.order() - 1;
  return detail::contract_except(form, last, points).dot(points[last]);
}

template <typename Scalar>
Scalar evaluate(const MultilinearForm<Scalar>& form, const std::vector<Vector<Scalar>>& points) {
  return evaluate(form, std::span<const Vector<Scalar>>(points));
}

template <typename Scalar>
Vector<Scalar> partial_gradient(const MultilinearForm<Scalar>& form, Index slot,
                                const std::vector<Vector<Scalar>>& points) {
  return partial_gradient(form, slot, std::span<const Vector<Scalar>>(points));
}

/// Lagrange residual of a point on the sphere product:
/// max over slots of ||d l/d x_i - l(x) x_i||.  Zero exactly at extreme points.
template <typename Scalar>
Scalar lagrange_residual(const MultilinearForm<Scalar>& form, std::span<const Vector<Scalar>> points) {
  const Scalar value = evaluate(form, points);
  Scalar worst = 0;
  for (Index s = 0; s < form.order(); ++s) {
    const Scalar r = (detail::contract_except(form, s, points) - value * points[s]).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

template <typename Scalar>
Scalar lagrange_residual(const MultilinearForm<Scalar>& form, const std::vector<Vector<Scalar>>& points) {
  return lagrange_residual(form, std::span<const Vector<Scalar>>(points));
}

template <typename Scalar>
Scalar form_inner(const MultilinearForm<Scalar>& a, const MultilinearForm<Scalar>& b) {
  if (a.dims() != b.dims()) throw Error(ErrorCode::DimensionMismatch, "form_inner needs equal dims");
  return a.coeffs().dot(b.coeffs());
}

template <typename Scalar>
Scalar form_norm(const MultilinearForm<Scalar>& form) {
  return form.coeffs().norm();
}

template <typename Scalar>
MultilinearForm<Scalar> operator-(const MultilinearForm<Scalar>& a, const MultilinearForm<Scalar>& b) {
  if (a.dims() != b.dims()) throw Error(ErrorCode::DimensionMismatch, "difference needs equal dims");
  return MultilinearForm<Scalar>(a.dims(), a.coeffs() - b.coeffs());
}

/// l : R^{d_1} x ... x R^{d_r} -> R^{s+1}, one component form per output
/// coordinate.
template <typename Scalar>
struct MultilinearMap {
  Dims domainDims;
  std::vector<MultilinearForm<Scalar>> components;

  Index codomain_dim() const noexcept { return static_cast<Index>(components.size()); }

  Vector<Scalar> operator()(std::span<const Vector<Scalar>> points) const {
    Vector<Scalar> out(codomain_dim());
    for (Index k = 0; k < codomain_dim(); ++k) out[k] = evaluate(components[k], points);
    return out;
  }
};

/// Turns l into the (r+1)-linear form (x_1..x_r, y) -> <l(x_1..x_r), y>.
template <typename Scalar>
MultilinearForm<Scalar> flatten(const MultilinearMap<Scalar>& map) {
  for (const auto& c : map.components)
    if (c.dims() != map.domainDims) throw Error(ErrorCode::DimensionMismatch, "component dims differ");
  Dims dims = map.domainDims;
  const Index codim = map.codomain_dim();
  dims.push_back(codim);
  const Index inner = product_of(map.domainDims);
  Vector<Scalar> coeffs(inner * codim);
  for (Index k = 0; k < codim; ++k)
    for (Index i = 0; i < inner; ++i) coeffs[i * codim + k] = map.components[k].coeffs()[i];
  return MultilinearForm<Scalar>(std::move(dims), std::move(coeffs));
}

/// Product of linear forms <f_1, x_1> ... <f_r, x_r>.
template <typename Scalar>
struct RankOneForm {
  std::vector<Vector<Scalar>> factors;

  Dims dims() const {
    Dims d;
    for (const auto& f : factors) d.push_back(f.size());
    return d;
  }

  Scalar operator()(std::span<const Vector<Scalar>> points) const {
    if (points.size() != factors.size()) throw Error(ErrorCode::DimensionMismatch, "wrong number of vectors");
    Scalar v = 1;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (points[i].size() != factors[i].size()) throw Error(ErrorCode::DimensionMismatch, "factor length");
      v *= factors[i].dot(points[i]);
    }
    return v;
  }
};

template <typename Scalar>
MultilinearForm<Scalar> rank_one_to_form(const RankOneForm<Scalar>& r1) {
  if (r1.factors.empty()) throw Error(ErrorCode::InvalidInput, "rank-one form needs at least one factor");
  Vector<Scalar> coeffs = r1.factors.front();
  for (std::size_t i = 1; i < r1.factors.size(); ++i) {
    const auto& f = r1.factors[i];
    Vector<Scalar> next(coeffs.size() * f.size());
    Eigen::Map<RowMajorMatrix<Scalar>>(next.data(), coeffs.size(), f.size()) = coeffs * f.transpose();
    coeffs = std::move(next);
  }
  return MultilinearForm<Scalar>(r1.dims(), std::move(coeffs));
}

/// Flips each slot vector so its first coordinate with |c| > eps is positive.
/// Returns the number of flips (odd means the form value changed sign).
template <typename Scalar>
int canonicalize_signs(std::vector<Vector<Scalar>>& points, Scalar eps = Scalar(1e-12)) {
  int flips = 0;
  for (auto& v : points) {
    for (Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > eps) {
        if (v[i] < 0) {
          v = -v;
          ++flips;
        }
        break;
      }
    }
  }
  return flips;
}

using Form = MultilinearForm<double>;
using VectorXd = Vector<double>;

}  // namespace spheremax
