#pragma once

// Sparse multivariate polynomials with exact rational coefficients, ordered by
// graded reverse lexicographic order (variable 0 is the largest).

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace spheremax {

inline constexpr std::size_t kMaxVariables = 48;

/// Exponent vector packed eight 8-bit exponents per word; variable i lives in
/// byte i % 8 of word i / 8.  With this layout, comparing words from the last
/// one down as unsigned integers finds the highest-index variable whose
/// exponents differ, which is exactly the grevlex tie-break.
class Monomial {
 public:
  static constexpr std::size_t kWords = kMaxVariables / 8;

  Monomial() = default;
  static Monomial variable(std::size_t var, unsigned power = 1);
  static Monomial from_exponents(std::span<const int> exponents);

  unsigned exponent(std::size_t var) const noexcept {
    return static_cast<unsigned>((words_[var / 8] >> (8 * (var % 8))) & 0xFFu);
  }
  unsigned degree() const noexcept { return degree_; }
  bool is_one() const noexcept { return degree_ == 0; }
  std::vector<int> exponents(std::size_t nvars) const;

  /// Componentwise a <= b.
  bool divides(const Monomial& other) const noexcept;
  /// this / other; requires other.divides(*this).
  Monomial quotient(const Monomial& other) const noexcept;
  Monomial lcm(const Monomial& other) const noexcept;
  /// No variable in common.
  bool coprime(const Monomial& other) const noexcept;

  friend Monomial operator*(const Monomial& a, const Monomial& b) noexcept;
  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.degree_ == b.degree_ && a.words_ == b.words_;
  }

  /// Three-way grevlex comparison: negative if a < b.
  friend int compare(const Monomial& a, const Monomial& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    for (std::size_t w = kWords; w-- > 0;) {
      if (a.words_[w] != b.words_[w]) return a.words_[w] < b.words_[w] ? 1 : -1;
    }
    return 0;
  }

  std::size_t hash() const noexcept;
  std::string to_string(std::span<const std::string> names) const;

 private:
  void set_exponent(std::size_t var, unsigned e) noexcept;

  std::array<std::uint64_t, kWords> words_{};
  std::uint32_t degree_ = 0;
};

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept { return compare(a, b) > 0; }
};
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept { return compare(a, b) < 0; }
};
struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

struct Term {
  Monomial monomial;
  mpq_class coeff;
};

/// Terms sorted strictly descending, no zero coefficients.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::size_t nvars) : nvars_(nvars) {}
  RationalPoly(std::size_t nvars, std::vector<Term> terms);

  static RationalPoly constant(std::size_t nvars, const mpq_class& c);
  static RationalPoly variable(std::size_t nvars, std::size_t var);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const Monomial& leading_monomial() const { return terms_.front().monomial; }
  const mpq_class& leading_coeff() const { return terms_.front().coeff; }
  unsigned total_degree() const;

  /// Divides through by the leading coefficient.
  void make_monic();
  RationalPoly monic() const {
    RationalPoly p = *this;
    p.make_monic();
    return p;
  }

  RationalPoly& operator+=(const RationalPoly& other);
  RationalPoly& operator-=(const RationalPoly& other);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  RationalPoly scaled(const mpq_class& c, const Monomial& m) const;
  friend bool operator==(const RationalPoly& a, const RationalPoly& b);

  /// d/d(var).
  RationalPoly derivative(std::size_t var) const;

  std::string to_string(std::span<const std::string> names) const;

 private:
  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

/// Exact rational equal to the shortest decimal that round-trips `x`
/// (0.5435016101 -> 5435016101/10^10).  Throws InvalidInput for non-finite x.
mpq_class rationalize(double x);

}  // namespace spheremax
