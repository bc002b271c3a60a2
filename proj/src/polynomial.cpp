#include "spheremax/polynomial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <system_error>

#include "spheremax/error.hpp"

namespace spheremax {

void Monomial::set_exponent(std::size_t var, unsigned e) noexcept {
  const unsigned shift = 8 * (var % 8);
  std::uint64_t& w = words_[var / 8];
  w = (w & ~(std::uint64_t{0xFF} << shift)) | (std::uint64_t{e & 0xFFu} << shift);
}

Monomial Monomial::variable(std::size_t var, unsigned power) {
  if (var >= kMaxVariables) throw Error(ErrorCode::InvalidInput, "too many variables");
  if (power > 255) throw Error(ErrorCode::InvalidInput, "exponent overflow");
  Monomial m;
  m.set_exponent(var, power);
  m.degree_ = power;
  return m;
}

Monomial Monomial::from_exponents(std::span<const int> exponents) {
  if (exponents.size() > kMaxVariables) throw Error(ErrorCode::InvalidInput, "too many variables");
  Monomial m;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] < 0 || exponents[i] > 255) throw Error(ErrorCode::InvalidInput, "exponent out of range");
    m.set_exponent(i, static_cast<unsigned>(exponents[i]));
    m.degree_ += static_cast<unsigned>(exponents[i]);
  }
  return m;
}

std::vector<int> Monomial::exponents(std::size_t nvars) const {
  std::vector<int> e(nvars);
  for (std::size_t i = 0; i < nvars; ++i) e[i] = static_cast<int>(exponent(i));
  return e;
}

namespace {
// Per-byte "has any byte of a exceeding b" using SWAR on 8-bit lanes.
constexpr std::uint64_t kHigh = 0x8080808080808080ull;
inline bool byte_exceeds(std::uint64_t a, std::uint64_t b) noexcept {
  // Lanes are < 128 in practice (degree bound below), so the borrow trick is exact.
  return (((b | kHigh) - a) & kHigh) != kHigh;
}
}  // namespace

bool Monomial::divides(const Monomial& other) const noexcept {
  if (degree_ > other.degree_) return false;
  for (std::size_t w = 0; w < kWords; ++w)
    if (byte_exceeds(words_[w], other.words_[w])) return false;
  return true;
}

Monomial Monomial::quotient(const Monomial& other) const noexcept {
  Monomial m;
  for (std::size_t w = 0; w < kWords; ++w) m.words_[w] = words_[w] - other.words_[w];
  m.degree_ = degree_ - other.degree_;
  return m;
}

Monomial Monomial::lcm(const Monomial& other) const noexcept {
  Monomial m;
  for (std::size_t w = 0; w < kWords; ++w) {
    std::uint64_t out = 0;
    for (unsigned b = 0; b < 8; ++b) {
      const std::uint64_t x = (words_[w] >> (8 * b)) & 0xFF;
      const std::uint64_t y = (other.words_[w] >> (8 * b)) & 0xFF;
      const std::uint64_t e = std::max(x, y);
      out |= e << (8 * b);
      m.degree_ += static_cast<std::uint32_t>(e);
    }
    m.words_[w] = out;
  }
  return m;
}

bool Monomial::coprime(const Monomial& other) const noexcept {
  for (std::size_t w = 0; w < kWords; ++w) {
    const std::uint64_t a = words_[w], b = other.words_[w];
    if (a == 0 || b == 0) continue;
    for (unsigned k = 0; k < 8; ++k)
      if (((a >> (8 * k)) & 0xFF) && ((b >> (8 * k)) & 0xFF)) return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) noexcept {
  Monomial m;
  for (std::size_t w = 0; w < Monomial::kWords; ++w) m.words_[w] = a.words_[w] + b.words_[w];
  m.degree_ = a.degree_ + b.degree_;
  return m;
}

std::size_t Monomial::hash() const noexcept {
  std::size_t h = degree_;
  for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

std::string Monomial::to_string(std::span<const std::string> names) const {
  if (is_one()) return "1";
  std::string out;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    const unsigned e = exponent(i);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += i < names.size() ? names[i] : "v" + std::to_string(i);
    if (e > 1) out += '^' + std::to_string(e);
  }
  return out;
}

RationalPoly::RationalPoly(std::size_t nvars, std::vector<Term> terms) : nvars_(nvars) {
  std::map<Monomial, mpq_class, MonomialGreater> acc;
  for (auto& t : terms) acc[t.monomial] += t.coeff;
  for (auto& [m, c] : acc)
    if (c != 0) terms_.push_back({m, c});
}

RationalPoly RationalPoly::constant(std::size_t nvars, const mpq_class& c) {
  RationalPoly p(nvars);
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

RationalPoly RationalPoly::variable(std::size_t nvars, std::size_t var) {
  if (var >= nvars) throw Error(ErrorCode::InvalidInput, "variable index out of range");
  RationalPoly p(nvars);
  p.terms_.push_back({Monomial::variable(var), mpq_class(1)});
  return p;
}

unsigned RationalPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
  return d;
}

void RationalPoly::make_monic() {
  if (terms_.empty() || terms_.front().coeff == 1) return;
  const mpq_class inv = 1 / terms_.front().coeff;
  for (auto& t : terms_) t.coeff *= inv;
}

namespace {

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = 0;
    if (i == a.size()) c = -1;
    else if (j == b.size()) c = 1;
    else c = compare(a[i].monomial, b[j].monomial);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back({b[j].monomial, sign > 0 ? mpq_class(b[j].coeff) : mpq_class(-b[j].coeff)});
      ++j;
    } else {
      mpq_class s = sign > 0 ? mpq_class(a[i].coeff + b[j].coeff) : mpq_class(a[i].coeff - b[j].coeff);
      if (s != 0) out.push_back({a[i].monomial, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

RationalPoly& RationalPoly::operator+=(const RationalPoly& other) {
  nvars_ = std::max(nvars_, other.nvars_);
  terms_ = merge(terms_, other.terms_, +1);
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& other) {
  nvars_ = std::max(nvars_, other.nvars_);
  terms_ = merge(terms_, other.terms_, -1);
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  std::map<Monomial, mpq_class, MonomialGreater> acc;
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) acc[s.monomial * t.monomial] += s.coeff * t.coeff;
  RationalPoly out(std::max(a.nvars_, b.nvars_));
  for (auto& [m, c] : acc)
    if (c != 0) out.terms_.push_back({m, c});
  return out;
}

RationalPoly RationalPoly::scaled(const mpq_class& c, const Monomial& m) const {
  RationalPoly out(nvars_);
  if (c == 0) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.monomial * m, t.coeff * c});
  return out;
}

bool operator==(const RationalPoly& a, const RationalPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

RationalPoly RationalPoly::derivative(std::size_t var) const {
  std::vector<Term> out;
  const Monomial x = Monomial::variable(var);
  for (const auto& t : terms_) {
    const unsigned e = t.monomial.exponent(var);
    if (e == 0) continue;
    out.push_back({t.monomial.quotient(x), t.coeff * e});
  }
  // Dividing by one variable keeps the grevlex order of the surviving terms.
  RationalPoly p(nvars_);
  p.terms_ = std::move(out);
  return p;
}

std::string RationalPoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    mpq_class c = t.coeff;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    c = abs(c);
    if (t.monomial.is_one()) os << c;
    else if (c == 1) os << t.monomial.to_string(names);
    else os << c << "*" << t.monomial.to_string(names);
    first = false;
  }
  return os.str();
}

mpq_class rationalize(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "cannot rationalize a non-finite coefficient");
  if (x == 0.0) return 0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  if (res.ec != std::errc{}) throw Error(ErrorCode::InvalidInput, "cannot format coefficient");
  const std::string s(buf, res.ptr);

  // s looks like "-d.ddde+XX".
  const auto epos = s.find('e');
  std::string mantissa = s.substr(0, epos);
  int exponent = std::stoi(s.substr(epos + 1));
  bool negative = false;
  if (!mantissa.empty() && mantissa[0] == '-') {
    negative = true;
    mantissa.erase(0, 1);
  }
  std::string digits;
  int fraction = 0;
  bool afterDot = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      afterDot = true;
      continue;
    }
    digits += ch;
    if (afterDot) ++fraction;
  }
  exponent -= fraction;
  mpz_class num(digits);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent)));
  mpq_class q = exponent >= 0 ? mpq_class(num * pow10) : mpq_class(num, pow10);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

}  // namespace spheremax
