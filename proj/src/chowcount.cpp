#include "spheremax/chowcount.hpp"

#include <string>

#include "spheremax/error.hpp"

namespace spheremax {

TruncatedClassPolynomial::TruncatedClassPolynomial(std::vector<int> factorDims) : dims_(std::move(factorDims)) {
  std::size_t total = 1;
  strides_.assign(dims_.size(), 1);
  for (std::size_t i = dims_.size(); i-- > 0;) {
    if (dims_[i] < 0) throw Error(ErrorCode::InvalidInput, "factor dimensions must be nonnegative");
    strides_[i] = total;
    total *= static_cast<std::size_t>(dims_[i]) + 1;
  }
  coeffs_.assign(total, mpz_class(0));
}

TruncatedClassPolynomial TruncatedClassPolynomial::one(std::vector<int> factorDims) {
  TruncatedClassPolynomial p(std::move(factorDims));
  p.coeffs_.front() = 1;
  return p;
}

TruncatedClassPolynomial TruncatedClassPolynomial::monomial(std::vector<int> factorDims,
                                                            std::span<const int> exponents, const mpz_class& coeff) {
  TruncatedClassPolynomial p(std::move(factorDims));
  if (exponents.size() != p.dims_.size()) throw Error(ErrorCode::DimensionMismatch, "exponent tuple arity");
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] > p.dims_[i]) return p;
  p.coeffs_[p.offset(exponents)] = coeff;
  return p;
}

TruncatedClassPolynomial TruncatedClassPolynomial::linear(std::vector<int> factorDims,
                                                          std::span<const std::int64_t> weights) {
  TruncatedClassPolynomial p(std::move(factorDims));
  if (weights.size() != p.dims_.size()) throw Error(ErrorCode::DimensionMismatch, "weight vector arity");
  for (std::size_t l = 0; l < weights.size(); ++l)
    if (p.dims_[l] >= 1) p.coeffs_[p.strides_[l]] = mpz_class(std::to_string(weights[l]));
  return p;
}

std::size_t TruncatedClassPolynomial::offset(std::span<const int> exponents) const {
  if (exponents.size() != dims_.size()) throw Error(ErrorCode::DimensionMismatch, "exponent tuple arity");
  std::size_t k = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > dims_[i])
      throw Error(ErrorCode::DimensionMismatch, "exponent outside the truncated range");
    k += strides_[i] * static_cast<std::size_t>(exponents[i]);
  }
  return k;
}

void TruncatedClassPolynomial::check_same_ring(const TruncatedClassPolynomial& other) const {
  if (dims_ != other.dims_) throw Error(ErrorCode::DimensionMismatch, "classes live in different Chow rings");
}

const mpz_class& TruncatedClassPolynomial::coeff(std::span<const int> exponents) const {
  return coeffs_[offset(exponents)];
}

void TruncatedClassPolynomial::set_coeff(std::span<const int> exponents, const mpz_class& value) {
  coeffs_[offset(exponents)] = value;
}

bool TruncatedClassPolynomial::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

TruncatedClassPolynomial& TruncatedClassPolynomial::operator+=(const TruncatedClassPolynomial& other) {
  check_same_ring(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

bool operator==(const TruncatedClassPolynomial& a, const TruncatedClassPolynomial& b) {
  return a.dims_ == b.dims_ && a.coeffs_ == b.coeffs_;
}

TruncatedClassPolynomial operator*(const TruncatedClassPolynomial& a, const TruncatedClassPolynomial& b) {
  a.check_same_ring(b);
  const std::size_t k = a.dims_.size();
  TruncatedClassPolynomial out(a.dims_);

  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
    if (b.coeffs_[j] != 0) nz.push_back(j);

  std::vector<int> ea(k), eb(k);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    std::size_t rem = i;
    for (std::size_t f = 0; f < k; ++f) {
      ea[f] = static_cast<int>(rem / a.strides_[f]);
      rem %= a.strides_[f];
    }
    for (std::size_t j : nz) {
      std::size_t remb = j;
      bool fits = true;
      for (std::size_t f = 0; f < k; ++f) {
        eb[f] = static_cast<int>(remb / b.strides_[f]);
        remb %= b.strides_[f];
        if (ea[f] + eb[f] > a.dims_[f]) {
          fits = false;
          break;
        }
      }
      // a_f^{n_f+1} = 0: products beyond the box vanish.
      if (fits) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return out;
}

TruncatedClassPolynomial class_mul(const TruncatedClassPolynomial& a, const TruncatedClassPolynomial& b) {
  return a * b;
}

TruncatedClassPolynomial TruncatedClassPolynomial::pow(unsigned exponent) const {
  TruncatedClassPolynomial result = one(dims_);
  TruncatedClassPolynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

mpz_class count_fixed_points(const MultidegreeProfile& profile) {
  const std::size_t k = profile.dims.size();
  if (profile.degrees.size() != k) throw Error(ErrorCode::DimensionMismatch, "degree matrix must be k x k");
  for (const auto& row : profile.degrees) {
    if (row.size() != k) throw Error(ErrorCode::DimensionMismatch, "degree matrix must be k x k");
    for (auto d : row)
      if (d < 0) throw Error(ErrorCode::InvalidInput, "multidegrees must be nonnegative");
  }
  if (k == 0) return 1;

  // The index sum factors over j:  prod_j ( sum_{i=0}^{n_j} L_j^{n_j - i} a_j^i ).
  // L^0 = 1 even when L = 0 (a constant map has one fixed point).
  TruncatedClassPolynomial total = TruncatedClassPolynomial::one(profile.dims);
  for (std::size_t j = 0; j < k; ++j) {
    const int n = profile.dims[j];
    const auto pull = TruncatedClassPolynomial::linear(profile.dims, profile.degrees[j]);
    std::vector<int> e(k, 0);
    TruncatedClassPolynomial factor(profile.dims);
    TruncatedClassPolynomial power = TruncatedClassPolynomial::one(profile.dims);  // L^{n-i}, built from i = n down
    for (int i = n; i >= 0; --i) {
      e[j] = i;
      factor += power * TruncatedClassPolynomial::monomial(profile.dims, e);
      if (i > 0) power = power * pull;
    }
    total = total * factor;
  }
  return total.degree();
}

mpz_class count_extreme_classes(std::span<const std::int64_t> formDims) {
  const std::size_t r = formDims.size();
  if (r < 2) throw Error(ErrorCode::InvalidInput, "counting needs at least two slots");
  MultidegreeProfile profile;
  for (auto d : formDims) {
    if (d <= 0) throw Error(ErrorCode::InvalidInput, "slot dimensions must be positive");
    profile.dims.push_back(static_cast<int>(d - 1));
  }
  profile.degrees.assign(r, std::vector<std::int64_t>(r, 1));
  for (std::size_t i = 0; i < r; ++i) profile.degrees[i][i] = 0;
  return count_fixed_points(profile);
}

}  // namespace spheremax
