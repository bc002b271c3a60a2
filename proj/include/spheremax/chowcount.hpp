#pragma once

// Intersection-theoretic fixed-point counting in the Chow ring of a product of
// projective spaces, Z[a_1..a_k]/(a_1^{n_1+1}, ..., a_k^{n_k+1}).

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

namespace spheremax {

/// Element of Z[a_1..a_k]/(a_i^{n_i+1}).  Coefficients are stored densely
/// over the exponent box [0,n_1] x ... x [0,n_k], first factor slowest, so
/// the truncation invariant holds by construction.
class TruncatedClassPolynomial {
 public:
  explicit TruncatedClassPolynomial(std::vector<int> factorDims);

  static TruncatedClassPolynomial one(std::vector<int> factorDims);
  /// The monomial a_1^{e_1} ... a_k^{e_k}; zero if any e_i > n_i.
  static TruncatedClassPolynomial monomial(std::vector<int> factorDims, std::span<const int> exponents,
                                           const mpz_class& coeff = 1);
  /// sum_l weights[l] * a_l (a pulled-back hyperplane class).
  static TruncatedClassPolynomial linear(std::vector<int> factorDims, std::span<const std::int64_t> weights);

  const std::vector<int>& factor_dims() const noexcept { return dims_; }
  std::size_t arity() const noexcept { return dims_.size(); }

  const mpz_class& coeff(std::span<const int> exponents) const;
  void set_coeff(std::span<const int> exponents, const mpz_class& value);
  /// Coefficient of the point class a_1^{n_1} ... a_k^{n_k}.
  const mpz_class& degree() const { return coeffs_.back(); }
  bool is_zero() const;

  TruncatedClassPolynomial& operator+=(const TruncatedClassPolynomial& other);
  friend TruncatedClassPolynomial operator+(TruncatedClassPolynomial a, const TruncatedClassPolynomial& b) {
    a += b;
    return a;
  }
  friend TruncatedClassPolynomial operator*(const TruncatedClassPolynomial& a, const TruncatedClassPolynomial& b);
  friend bool operator==(const TruncatedClassPolynomial& a, const TruncatedClassPolynomial& b);

  TruncatedClassPolynomial pow(unsigned exponent) const;

 private:
  std::size_t offset(std::span<const int> exponents) const;
  void check_same_ring(const TruncatedClassPolynomial& other) const;

  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<mpz_class> coeffs_;
};

TruncatedClassPolynomial class_mul(const TruncatedClassPolynomial& a, const TruncatedClassPolynomial& b);

/// Dimensions (n_1..n_k) of the projective factors and the k x k multidegree
/// matrix: row i is the multidegree of the component map F_i.
struct MultidegreeProfile {
  std::vector<int> dims;
  std::vector<std::vector<std::int64_t>> degrees;
};

/// Number of fixed points of a generic self-map of P^{n_1} x ... x P^{n_k}
/// with the given multidegrees: the point-class coefficient of
/// sum_{i_1..i_k} prod_j (sum_l d_{jl} a_l)^{n_j - i_j} a_j^{i_j}.
mpz_class count_fixed_points(const MultidegreeProfile& profile);

/// Classes of extreme points of a generic multilinear form with slot
/// dimensions (n_1+1, ..., n_r+1), r >= 2.
mpz_class count_extreme_classes(std::span<const std::int64_t> formDims);

}  // namespace spheremax
