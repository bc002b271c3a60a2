#pragma once

// Buchberger's algorithm over Q with grevlex order, normal sets and
// multiplication matrices for zero-dimensional ideals.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "spheremax/linalg.hpp"
#include "spheremax/polynomial.hpp"

namespace spheremax {

enum class GroebnerMethod {
  /// Bases over Z/p for word-sized primes, lifted by CRT and rational
  /// reconstruction, then certified over Q.
  Modular,
  /// Fraction-free Buchberger directly over Q.
  Rational,
};

struct GroebnerOptions {
  GroebnerMethod method = GroebnerMethod::Modular;
  /// S-polynomials reduced (per Buchberger run) before giving up.
  std::int64_t maxReductions = 1'000'000;
  /// Terms held across the basis and the polynomial under reduction.
  std::int64_t maxTerms = 32'000'000;
  /// Primes tried by the modular method.
  int maxPrimes = 4096;
};

struct GroebnerStats {
  std::int64_t pairsReduced = 0;
  std::int64_t zeroReductions = 0;
  std::int64_t reductionSteps = 0;
  int primes = 0;  // modular images combined
};

struct GroebnerBasis {
  std::size_t nvars = 0;
  std::vector<std::string> variables;
  std::string ordering = "grevlex";
  /// Reduced and monic, sorted by ascending leading monomial.
  std::vector<RationalPoly> basis;
  GroebnerStats stats;

  bool is_unit() const { return basis.size() == 1 && basis.front().leading_monomial().is_one(); }
};

/// Throws BudgetExceeded when an option's budget runs out, InvalidInput for
/// polynomials with mismatched variable counts.
GroebnerBasis groebner(const std::vector<RationalPoly>& polys, std::vector<std::string> variables,
                       const GroebnerOptions& opts = {});

/// Remainder of full multivariate division by the basis.
RationalPoly normal_form(const RationalPoly& p, const GroebnerBasis& gb);

RationalPoly s_polynomial(const RationalPoly& f, const RationalPoly& g);

/// True iff every S-polynomial of the basis reduces to zero.
bool satisfies_buchberger_criterion(const GroebnerBasis& gb);

struct NormalSet {
  /// Standard monomials, ascending, constant monomial first.
  std::vector<Monomial> monomials;
  std::size_t size() const { return monomials.size(); }
  /// Position of `m`, or -1.
  std::ptrdiff_t index_of(const Monomial& m) const;

 private:
  friend NormalSet normal_set(const GroebnerBasis& gb);
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

/// Throws NotZeroDimensional when some variable has no pure power among the
/// leading monomials (the quotient ring is infinite-dimensional).
NormalSet normal_set(const GroebnerBasis& gb);

/// Sparse coordinates in the normal-set basis.
using NormalCoordinates = std::vector<std::pair<std::size_t, mpq_class>>;

/// Memoized normal forms of monomials against a zero-dimensional reduced basis.
class QuotientRing {
 public:
  QuotientRing(const GroebnerBasis& gb, const NormalSet& ns);

  const NormalSet& normal_set() const { return ns_; }
  const NormalCoordinates& reduce(const Monomial& m);
  NormalCoordinates reduce(const RationalPoly& p);

  /// Column j holds the coordinates of NF(f * b_j); exact until the final cast.
  Matrix multiplication_matrix(const RationalPoly& f);

 private:
  const GroebnerBasis& gb_;
  const NormalSet& ns_;
  std::unordered_map<Monomial, NormalCoordinates, MonomialHash> memo_;
};

Matrix mult_matrix(const RationalPoly& f, const GroebnerBasis& gb, const NormalSet& ns);

}  // namespace spheremax
