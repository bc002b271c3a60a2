#include "spheremax/groebner.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <utility>

#include "spheremax/error.hpp"

namespace spheremax {

namespace {

// ---------------------------------------------------------------------------
// Integer coefficients (fraction-free reduction over Q).

// Kept primitive with a positive leading coefficient.
struct ZPoly {
  std::vector<Monomial> mons;  // descending
  std::vector<mpz_class> coeffs;
  unsigned sugar = 0;

  bool empty() const { return mons.empty(); }
  std::size_t size() const { return mons.size(); }
  const Monomial& lm() const { return mons.front(); }
};

void make_primitive(ZPoly& p) {
  if (p.empty()) return;
  mpz_class g = 0;
  for (const auto& c : p.coeffs) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  if (p.coeffs.front() < 0) g = -g;
  if (g != 1)
    for (auto& c : p.coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

ZPoly to_zpoly(const RationalPoly& p) {
  ZPoly z;
  mpz_class den = 1;
  for (const auto& t : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  for (const auto& t : p.terms()) {
    z.mons.push_back(t.monomial);
    z.coeffs.push_back(t.coeff.get_num() * (den / t.coeff.get_den()));
    z.sugar = std::max(z.sugar, t.monomial.degree());
  }
  make_primitive(z);
  return z;
}

RationalPoly to_monic_rational(const ZPoly& z, std::size_t nvars) {
  std::vector<Term> terms;
  terms.reserve(z.size());
  const mpz_class& lc = z.coeffs.front();
  for (std::size_t i = 0; i < z.size(); ++i) {
    mpq_class c(z.coeffs[i], lc);
    c.canonicalize();
    terms.push_back({z.mons[i], std::move(c)});
  }
  return RationalPoly(nvars, std::move(terms));
}

struct IntegerDomain {
  using Poly = ZPoly;

  // Full reduction (leading and tail terms).  The result is a positive
  // rational multiple of the true remainder, made primitive.
  Poly reduce(Poly p, const std::vector<const Poly*>& reducers, std::size_t storedTerms, const GroebnerOptions& opts,
              GroebnerStats& stats) const {
    Poly rem;
    rem.sugar = p.sugar;
    std::size_t head = 0;
    int sinceContent = 0;
    while (head < p.size()) {
      const Monomial& m = p.mons[head];
      const Poly* g = find_reducer(m, reducers);
      if (!g) {
        rem.mons.push_back(m);
        rem.coeffs.push_back(std::move(p.coeffs[head]));
        ++head;
        continue;
      }
      ++stats.reductionSteps;
      const Monomial q = m.quotient(g->lm());
      mpz_class a = g->coeffs.front();
      mpz_class b = p.coeffs[head];
      mpz_class d;
      mpz_gcd(d.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
      mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t());
      if (a < 0) {
        a = -a;
        b = -b;
      }
      // p <- a*p - b*q*g, dropping the cancelled leading term.
      Poly next;
      next.mons.reserve(p.size() - head + g->size());
      next.coeffs.reserve(p.size() - head + g->size());
      std::size_t i = head + 1, j = 1;
      while (i < p.size() || j < g->size()) {
        int c;
        Monomial gm;
        if (j < g->size()) gm = g->mons[j] * q;
        if (i == p.size()) c = -1;
        else if (j == g->size()) c = 1;
        else c = compare(p.mons[i], gm);
        if (c > 0) {
          next.mons.push_back(p.mons[i]);
          next.coeffs.push_back(a * p.coeffs[i]);
          ++i;
        } else if (c < 0) {
          next.mons.push_back(gm);
          next.coeffs.push_back(-b * g->coeffs[j]);
          ++j;
        } else {
          mpz_class v = a * p.coeffs[i] - b * g->coeffs[j];
          if (v != 0) {
            next.mons.push_back(p.mons[i]);
            next.coeffs.push_back(std::move(v));
          }
          ++i;
          ++j;
        }
      }
      next.sugar = std::max(p.sugar, g->sugar + q.degree());
      rem.sugar = std::max(rem.sugar, next.sugar);
      if (a != 1)
        for (auto& c : rem.coeffs) c *= a;
      p = std::move(next);
      head = 0;

      if (static_cast<std::int64_t>(storedTerms + p.size() + rem.size()) > opts.maxTerms)
        throw Error(ErrorCode::BudgetExceeded, "term storage budget exceeded during reduction");
      if (++sinceContent >= 16) {
        sinceContent = 0;
        remove_joint_content(p, rem);
      }
    }
    make_primitive(rem);
    return rem;
  }

  Poly spoly(const Poly& f, const Poly& g) const {
    const Monomial l = f.lm().lcm(g.lm());
    const Monomial qf = l.quotient(f.lm());
    const Monomial qg = l.quotient(g.lm());
    mpz_class a = g.coeffs.front(), b = f.coeffs.front(), d;
    mpz_gcd(d.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    a /= d;
    b /= d;
    std::map<Monomial, mpz_class, MonomialGreater> acc;  // a*qf*f - b*qg*g
    for (std::size_t i = 1; i < f.size(); ++i) acc[f.mons[i] * qf] += a * f.coeffs[i];
    for (std::size_t i = 1; i < g.size(); ++i) acc[g.mons[i] * qg] -= b * g.coeffs[i];
    Poly s;
    for (auto& [m, c] : acc) {
      if (c == 0) continue;
      s.mons.push_back(m);
      s.coeffs.push_back(std::move(c));
    }
    s.sugar = std::max(f.sugar + qf.degree(), g.sugar + qg.degree());
    make_primitive(s);
    return s;
  }

 private:
  static void remove_joint_content(Poly& p, Poly& rem) {
    mpz_class g = 0;
    for (const auto& c : p.coeffs) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return;
    }
    for (const auto& c : rem.coeffs) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return;
    }
    if (g == 0) return;
    for (auto& c : p.coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    for (auto& c : rem.coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }

  template <typename P>
  static const P* find_reducer(const Monomial& m, const std::vector<const P*>& reducers) {
    const P* best = nullptr;
    for (const P* g : reducers)
      if (g->lm().divides(m) && (!best || g->size() < best->size())) best = g;
    return best;
  }

  friend struct PrimeDomain;
};

// ---------------------------------------------------------------------------
// Coefficients in Z/p for a prime p < 2^62.

using Word = std::uint64_t;

struct FPoly {
  std::vector<Monomial> mons;  // descending
  std::vector<Word> coeffs;
  unsigned sugar = 0;

  bool empty() const { return mons.empty(); }
  std::size_t size() const { return mons.size(); }
  const Monomial& lm() const { return mons.front(); }
};

Word mul_mod(Word a, Word b, Word p) {
  return static_cast<Word>(static_cast<unsigned __int128>(a) * b % p);
}

Word pow_mod(Word a, Word e, Word p) {
  Word r = 1;
  for (; e > 0; e >>= 1, a = mul_mod(a, a, p))
    if (e & 1) r = mul_mod(r, a, p);
  return r;
}

Word inv_mod(Word a, Word p) { return pow_mod(a, p - 2, p); }

struct PrimeDomain {
  using Poly = FPoly;
  Word p;

  void make_monic(Poly& f) const {
    if (f.empty() || f.coeffs.front() == 1) return;
    const Word inv = inv_mod(f.coeffs.front(), p);
    for (auto& c : f.coeffs) c = mul_mod(c, inv, p);
  }

  Poly reduce(Poly f, const std::vector<const Poly*>& reducers, std::size_t storedTerms, const GroebnerOptions& opts,
              GroebnerStats& stats) const {
    Poly rem;
    rem.sugar = f.sugar;
    Poly next;
    std::size_t head = 0;
    while (head < f.size()) {
      const Monomial& m = f.mons[head];
      const Poly* g = IntegerDomain::find_reducer(m, reducers);
      if (!g) {
        rem.mons.push_back(m);
        rem.coeffs.push_back(f.coeffs[head]);
        ++head;
        continue;
      }
      ++stats.reductionSteps;
      const Monomial q = m.quotient(g->lm());
      const Word b = f.coeffs[head];  // g is monic
      next.mons.clear();
      next.coeffs.clear();
      std::size_t i = head + 1, j = 1;
      Monomial gm;
      if (j < g->size()) gm = g->mons[j] * q;
      while (i < f.size() || j < g->size()) {
        int c;
        if (i == f.size()) c = -1;
        else if (j == g->size()) c = 1;
        else c = compare(f.mons[i], gm);
        if (c > 0) {
          next.mons.push_back(f.mons[i]);
          next.coeffs.push_back(f.coeffs[i]);
          ++i;
          continue;
        }
        const Word s = mul_mod(b, g->coeffs[j], p);
        if (c < 0) {
          next.mons.push_back(gm);
          next.coeffs.push_back(p - s);
        } else {
          const Word v = f.coeffs[i] >= s ? f.coeffs[i] - s : f.coeffs[i] + (p - s);
          if (v != 0) {
            next.mons.push_back(f.mons[i]);
            next.coeffs.push_back(v);
          }
          ++i;
        }
        if (++j < g->size()) gm = g->mons[j] * q;
      }
      next.sugar = std::max(f.sugar, g->sugar + q.degree());
      rem.sugar = std::max(rem.sugar, next.sugar);
      std::swap(f, next);
      head = 0;
      if (static_cast<std::int64_t>(storedTerms + f.size() + rem.size()) > opts.maxTerms)
        throw Error(ErrorCode::BudgetExceeded, "term storage budget exceeded during reduction");
    }
    make_monic(rem);
    return rem;
  }

  Poly spoly(const Poly& f, const Poly& g) const {
    const Monomial l = f.lm().lcm(g.lm());
    const Monomial qf = l.quotient(f.lm());
    const Monomial qg = l.quotient(g.lm());
    std::map<Monomial, Word, MonomialGreater> acc;  // qf*f - qg*g, both monic
    for (std::size_t i = 1; i < f.size(); ++i) acc[f.mons[i] * qf] = f.coeffs[i];
    for (std::size_t i = 1; i < g.size(); ++i) {
      Word& c = acc[g.mons[i] * qg];
      c = c >= g.coeffs[i] ? c - g.coeffs[i] : c + (p - g.coeffs[i]);
    }
    Poly s;
    for (auto& [m, c] : acc) {
      if (c == 0) continue;
      s.mons.push_back(m);
      s.coeffs.push_back(c);
    }
    s.sugar = std::max(f.sugar + qf.degree(), g.sugar + qg.degree());
    make_monic(s);
    return s;
  }

  // nullopt if p divides a denominator.
  std::optional<Poly> image(const RationalPoly& q) const {
    Poly f;
    for (const auto& t : q.terms()) {
      const Word den = mpz_fdiv_ui(t.coeff.get_den_mpz_t(), p);
      if (den == 0) return std::nullopt;
      const Word num = mpz_fdiv_ui(t.coeff.get_num_mpz_t(), p);
      const Word c = mul_mod(num, inv_mod(den, p), p);
      f.sugar = std::max(f.sugar, t.monomial.degree());
      if (c == 0) continue;
      f.mons.push_back(t.monomial);
      f.coeffs.push_back(c);
    }
    make_monic(f);
    return f;
  }
};

// ---------------------------------------------------------------------------
// Buchberger with sugar selection and the Gebauer-Moeller criteria.

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  unsigned sugar;
};

bool pair_before(const Pair& a, const Pair& b) {
  if (a.sugar != b.sugar) return a.sugar < b.sugar;
  const int c = compare(a.lcm, b.lcm);
  if (c != 0) return c < 0;
  if (a.j != b.j) return a.j < b.j;
  return a.i < b.i;
}

bool lm_ascending(const Monomial& a, const Monomial& b) { return compare(a, b) < 0; }

template <typename Domain>
class Buchberger {
 public:
  using Poly = typename Domain::Poly;

  Buchberger(const Domain& dom, const GroebnerOptions& opts) : dom_(dom), opts_(opts) {}

  /// Reduced basis, ascending leading monomials.
  std::vector<Poly> run(std::vector<Poly> seeds) {
    std::sort(seeds.begin(), seeds.end(), [](const Poly& a, const Poly& b) { return lm_ascending(a.lm(), b.lm()); });
    for (auto& s : seeds) {
      if (s.empty()) continue;
      Poly h = dom_.reduce(std::move(s), active_reducers(), stored_, opts_, stats_);
      if (h.empty()) continue;
      if (h.lm().is_one()) return {std::move(h)};
      insert(std::move(h));
    }
    while (!pairs_.empty()) {
      const Pair pr = pop_pair();
      if (++stats_.pairsReduced > opts_.maxReductions)
        throw Error(ErrorCode::BudgetExceeded,
                    "S-polynomial budget of " + std::to_string(opts_.maxReductions) + " reductions exceeded");
      Poly h = dom_.reduce(dom_.spoly(polys_[pr.i], polys_[pr.j]), active_reducers(), stored_, opts_, stats_);
      if (h.empty()) {
        ++stats_.zeroReductions;
        continue;
      }
      if (h.lm().is_one()) return {std::move(h)};
      insert(std::move(h));
    }
    return interreduce();
  }

  /// True iff `basis` is closed under S-pair reduction (a Groebner basis).
  bool closes(const std::vector<Poly>& basis) {
    for (const auto& g : basis) insert(g);
    while (!pairs_.empty()) {
      const Pair pr = pop_pair();
      ++stats_.pairsReduced;
      if (!dom_.reduce(dom_.spoly(polys_[pr.i], polys_[pr.j]), active_reducers(), stored_, opts_, stats_).empty())
        return false;
    }
    return true;
  }

  const GroebnerStats& stats() const { return stats_; }

 private:
  Pair pop_pair() {
    auto it = std::min_element(pairs_.begin(), pairs_.end(), pair_before);
    const Pair pr = *it;
    *it = pairs_.back();
    pairs_.pop_back();
    return pr;
  }

  std::vector<const Poly*> active_reducers() const {
    std::vector<const Poly*> out;
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (active_[k]) out.push_back(&polys_[k]);
    return out;
  }

  void insert(Poly h) {
    stored_ += h.size();
    if (static_cast<std::int64_t>(stored_) > opts_.maxTerms)
      throw Error(ErrorCode::BudgetExceeded, "term storage budget exceeded");
    const std::size_t hi = polys_.size();
    const Monomial hlm = h.lm();
    polys_.push_back(std::move(h));
    active_.push_back(false);

    std::vector<Pair> candidates;
    for (std::size_t k = 0; k < hi; ++k)
      if (active_[k]) {
        const Monomial l = hlm.lcm(polys_[k].lm());
        const unsigned sugar = std::max(polys_[hi].sugar + l.degree() - hlm.degree(),
                                        polys_[k].sugar + l.degree() - polys_[k].lm().degree());
        candidates.push_back({k, hi, l, sugar});
      }

    // Chain criterion among the new pairs, keeping one per lcm.
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      const Pair& c = candidates[a];
      bool drop = false;
      if (!hlm.coprime(polys_[c.i].lm())) {
        for (std::size_t b = a + 1; b < candidates.size() && !drop; ++b) drop = candidates[b].lcm.divides(c.lcm);
        for (std::size_t b = 0; b < kept.size() && !drop; ++b) drop = kept[b].lcm.divides(c.lcm);
      }
      if (!drop) kept.push_back(c);
    }
    // Old pairs made redundant by h.
    std::vector<Pair> survivors;
    survivors.reserve(pairs_.size() + kept.size());
    for (auto& p : pairs_) {
      const bool redundant = hlm.divides(p.lcm) && !(hlm.lcm(polys_[p.i].lm()) == p.lcm) &&
                             !(hlm.lcm(polys_[p.j].lm()) == p.lcm);
      if (!redundant) survivors.push_back(p);
    }
    // Product criterion.
    for (auto& c : kept)
      if (!hlm.coprime(polys_[c.i].lm())) survivors.push_back(c);
    pairs_ = std::move(survivors);

    for (std::size_t k = 0; k < hi; ++k)
      if (active_[k] && hlm.divides(polys_[k].lm())) active_[k] = false;
    active_[hi] = true;
  }

  std::vector<Poly> interreduce() {
    std::vector<Poly> minimal;
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (active_[k]) minimal.push_back(polys_[k]);
    std::sort(minimal.begin(), minimal.end(), [](const Poly& a, const Poly& b) { return lm_ascending(a.lm(), b.lm()); });
    // In a minimal basis no leading monomial divides another, so only tails change.
    std::vector<Poly> reduced;
    reduced.reserve(minimal.size());
    for (std::size_t k = 0; k < minimal.size(); ++k) {
      std::vector<const Poly*> others;
      for (std::size_t o = 0; o < minimal.size(); ++o)
        if (o != k) others.push_back(&minimal[o]);
      reduced.push_back(dom_.reduce(minimal[k], others, stored_, opts_, stats_));
    }
    return reduced;
  }

  const Domain& dom_;
  GroebnerOptions opts_;
  GroebnerStats stats_;
  std::vector<Poly> polys_;
  std::vector<bool> active_;
  std::vector<Pair> pairs_;
  std::size_t stored_ = 0;
};

// ---------------------------------------------------------------------------
// Multi-modular lifting.

// Deterministic Miller-Rabin for 64-bit n.
bool is_prime(Word n) {
  if (n < 2) return false;
  for (Word q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (n % q == 0) return n == q;
  Word d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (Word a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Word x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s && composite; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

class PrimeSequence {
 public:
  Word next() {
    do current_ -= 2;
    while (!is_prime(current_));
    return current_;
  }

 private:
  Word current_ = (Word{1} << 62) + 1;  // odd start just above 2^62
};

// Wang's rational reconstruction with symmetric bounds sqrt(m/2).
std::optional<mpq_class> reconstruct(const mpz_class& u, const mpz_class& m, const mpz_class& bound) {
  mpz_class r0 = m, r1 = u, s0 = 0, s1 = 1;
  while (r1 > bound) {
    const mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (abs(s1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), s1.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class out(r1, s1);
  out.canonicalize();
  return out;
}

class ModularLift {
 public:
  explicit ModularLift(std::size_t nvars) : nvars_(nvars) {}

  bool empty() const { return primes_ == 0; }
  int primes() const { return primes_; }
  const std::vector<Monomial>& leading() const { return lms_; }

  void restart(const std::vector<FPoly>& basis, Word p) {
    lms_.clear();
    residues_.clear();
    for (const auto& f : basis) {
      lms_.push_back(f.lm());
      auto& r = residues_.emplace_back();
      for (std::size_t k = 0; k < f.size(); ++k) r.emplace(f.mons[k], mpz_class(static_cast<unsigned long>(f.coeffs[k])));
    }
    modulus_ = static_cast<unsigned long>(p);
    primes_ = 1;
  }

  // Requires the same leading monomials.
  void add(const std::vector<FPoly>& basis, Word p) {
    const Word minv = inv_mod(mpz_fdiv_ui(modulus_.get_mpz_t(), p), p);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto& r = residues_[i];
      const FPoly& f = basis[i];
      for (std::size_t k = 0; k < f.size(); ++k) r.try_emplace(f.mons[k], mpz_class(0));
      std::size_t k = 0;
      for (auto& [m, x] : r) {  // both descending
        Word a = 0;
        if (k < f.size() && f.mons[k] == m) a = f.coeffs[k++];
        const Word xr = mpz_fdiv_ui(x.get_mpz_t(), p);
        const Word diff = a >= xr ? a - xr : a + (p - xr);
        const Word t = mul_mod(diff, minv, p);
        if (t != 0) x += modulus_ * static_cast<unsigned long>(t);
      }
    }
    modulus_ *= static_cast<unsigned long>(p);
    ++primes_;
  }

  std::optional<std::vector<RationalPoly>> candidate() const {
    mpz_class bound;
    mpz_class half = modulus_ / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    std::vector<RationalPoly> out;
    for (const auto& r : residues_) {
      std::vector<Term> terms;
      for (const auto& [m, x] : r) {
        if (x == 0) continue;
        auto q = reconstruct(x, modulus_, bound);
        if (!q) return std::nullopt;
        terms.push_back({m, std::move(*q)});
      }
      out.emplace_back(nvars_, std::move(terms));
    }
    return out;
  }

 private:
  std::size_t nvars_;
  std::vector<Monomial> lms_;
  std::vector<std::map<Monomial, mpz_class, MonomialGreater>> residues_;
  mpz_class modulus_ = 1;
  int primes_ = 0;
};

std::vector<Monomial> leading_monomials(const std::vector<FPoly>& basis) {
  std::vector<Monomial> out;
  for (const auto& f : basis) out.push_back(f.lm());
  return out;
}

bool verify_over_rationals(const std::vector<RationalPoly>& input, const std::vector<RationalPoly>& candidate,
                           GroebnerStats& stats) {
  GroebnerOptions unlimited;
  unlimited.maxTerms = std::numeric_limits<std::int64_t>::max();
  IntegerDomain dom;
  std::vector<ZPoly> g;
  for (const auto& p : candidate) g.push_back(to_zpoly(p));
  std::vector<const ZPoly*> reducers;
  for (const auto& p : g) reducers.push_back(&p);
  for (const auto& f : input)
    if (!f.is_zero() && !dom.reduce(to_zpoly(f), reducers, 0, unlimited, stats).empty()) return false;
  Buchberger<IntegerDomain> check(dom, unlimited);
  const bool ok = check.closes(g);
  stats.reductionSteps += check.stats().reductionSteps;
  return ok;
}

std::vector<RationalPoly> modular_basis(const std::vector<RationalPoly>& input, std::size_t nvars,
                                        const GroebnerOptions& opts, GroebnerStats& stats) {
  PrimeSequence primes;
  ModularLift lift(nvars);
  std::optional<std::vector<RationalPoly>> previous;
  int mismatches = 0;
  int nextCheck = 1;
  for (int used = 0; used < opts.maxPrimes; ++used) {
    const PrimeDomain dom{primes.next()};
    std::vector<FPoly> seeds;
    bool bad = false;
    for (const auto& f : input) {
      auto img = dom.image(f);
      if (!img) {
        bad = true;
        break;
      }
      seeds.push_back(std::move(*img));
    }
    if (bad) continue;

    Buchberger<PrimeDomain> run(dom, opts);
    std::vector<FPoly> basis = run.run(std::move(seeds));
    if (lift.empty()) {
      stats.pairsReduced = run.stats().pairsReduced;
      stats.zeroReductions = run.stats().zeroReductions;
      stats.reductionSteps = run.stats().reductionSteps;
    }
    const auto lms = leading_monomials(basis);
    if (lift.empty()) {
      lift.restart(basis, dom.p);
    } else if (lms != lift.leading()) {
      // Unlucky primes usually enlarge the leading ideal; switch after repeated disagreement.
      if (++mismatches > lift.primes()) {
        lift.restart(basis, dom.p);
        mismatches = 0;
        previous.reset();
        nextCheck = 1;
      }
      continue;
    } else {
      lift.add(basis, dom.p);
    }
    ++stats.primes;

    if (lift.primes() < nextCheck) continue;
    nextCheck = lift.primes() + std::max(1, lift.primes() / 4);
    auto cand = lift.candidate();
    if (!cand) {
      previous.reset();
      continue;
    }
    if (previous && *previous == *cand && verify_over_rationals(input, *cand, stats)) return std::move(*cand);
    previous = std::move(cand);
  }
  throw Error(ErrorCode::BudgetExceeded,
              "modular lifting did not stabilise within " + std::to_string(opts.maxPrimes) + " primes");
}

void check_arity(const std::vector<RationalPoly>& polys, std::size_t nvars) {
  if (nvars > kMaxVariables) throw Error(ErrorCode::InvalidInput, "too many variables");
  for (const auto& p : polys)
    for (const auto& t : p.terms())
      for (std::size_t v = nvars; v < kMaxVariables; ++v)
        if (t.monomial.exponent(v) != 0) throw Error(ErrorCode::InvalidInput, "polynomial uses an undeclared variable");
}

}  // namespace

GroebnerBasis groebner(const std::vector<RationalPoly>& polys, std::vector<std::string> variables,
                       const GroebnerOptions& opts) {
  const std::size_t nvars = variables.size();
  check_arity(polys, nvars);
  GroebnerBasis gb;
  gb.nvars = nvars;
  gb.variables = std::move(variables);

  if (std::all_of(polys.begin(), polys.end(), [](const RationalPoly& p) { return p.is_zero(); })) return gb;

  if (opts.method == GroebnerMethod::Modular) {
    gb.basis = modular_basis(polys, nvars, opts, gb.stats);
  } else {
    IntegerDomain dom;
    Buchberger<IntegerDomain> run(dom, opts);
    std::vector<ZPoly> seeds;
    for (const auto& p : polys)
      if (!p.is_zero()) seeds.push_back(to_zpoly(p));
    for (const auto& z : run.run(std::move(seeds))) gb.basis.push_back(to_monic_rational(z, nvars));
    gb.stats = run.stats();
  }
  return gb;
}

RationalPoly normal_form(const RationalPoly& p, const GroebnerBasis& gb) {
  std::map<Monomial, mpq_class, MonomialGreater> work;
  for (const auto& t : p.terms()) work[t.monomial] += t.coeff;
  std::vector<Term> rem;
  while (!work.empty()) {
    auto it = work.begin();
    if (it->second == 0) {
      work.erase(it);
      continue;
    }
    const Monomial m = it->first;
    const mpq_class c = it->second;
    work.erase(it);
    const RationalPoly* g = nullptr;
    for (const auto& b : gb.basis)
      if (b.leading_monomial().divides(m)) {
        g = &b;
        break;
      }
    if (!g) {
      rem.push_back({m, c});
      continue;
    }
    const Monomial q = m.quotient(g->leading_monomial());
    const auto& terms = g->terms();
    for (std::size_t k = 1; k < terms.size(); ++k) work[terms[k].monomial * q] -= c * terms[k].coeff;
  }
  return RationalPoly(gb.nvars, std::move(rem));
}

RationalPoly s_polynomial(const RationalPoly& f, const RationalPoly& g) {
  if (f.is_zero() || g.is_zero()) return RationalPoly(std::max(f.nvars(), g.nvars()));
  const Monomial l = f.leading_monomial().lcm(g.leading_monomial());
  return f.scaled(1 / f.leading_coeff(), l.quotient(f.leading_monomial())) -
         g.scaled(1 / g.leading_coeff(), l.quotient(g.leading_monomial()));
}

bool satisfies_buchberger_criterion(const GroebnerBasis& gb) {
  GroebnerOptions opts;
  opts.maxTerms = std::numeric_limits<std::int64_t>::max();
  GroebnerStats stats;
  IntegerDomain dom;
  std::vector<ZPoly> z;
  for (const auto& p : gb.basis) z.push_back(to_zpoly(p));
  std::vector<const ZPoly*> all;
  for (const auto& p : z) all.push_back(&p);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (z[i].lm().coprime(z[j].lm())) continue;  // reduces to zero by the product criterion
      if (!dom.reduce(dom.spoly(z[i], z[j]), all, 0, opts, stats).empty()) return false;
    }
  return true;
}
std::ptrdiff_t NormalSet::index_of(const Monomial& m) const {
  const auto it = index_.find(m);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

NormalSet normal_set(const GroebnerBasis& gb) {
  if (gb.is_unit()) throw Error(ErrorCode::NotZeroDimensional, "the system has no solutions (basis is {1})");
  for (std::size_t v = 0; v < gb.nvars; ++v) {
    bool pure = false;
    for (const auto& g : gb.basis) {
      const Monomial& lm = g.leading_monomial();
      if (lm.degree() > 0 && lm.exponent(v) == lm.degree()) {
        pure = true;
        break;
      }
    }
    if (!pure)
      throw Error(ErrorCode::NotZeroDimensional,
                  "no leading monomial is a pure power of " +
                      (v < gb.variables.size() ? gb.variables[v] : "v" + std::to_string(v)));
  }

  auto standard = [&](const Monomial& m) {
    for (const auto& g : gb.basis)
      if (g.leading_monomial().divides(m)) return false;
    return true;
  };

  NormalSet ns;
  std::unordered_map<Monomial, bool, MonomialHash> seen;
  std::deque<Monomial> queue{Monomial{}};
  seen.emplace(Monomial{}, true);
  while (!queue.empty()) {
    const Monomial m = queue.front();
    queue.pop_front();
    ns.monomials.push_back(m);
    for (std::size_t v = 0; v < gb.nvars; ++v) {
      const Monomial next = m * Monomial::variable(v);
      if (seen.count(next)) continue;
      const bool ok = standard(next);
      seen.emplace(next, ok);
      if (ok) queue.push_back(next);
    }
  }
  std::sort(ns.monomials.begin(), ns.monomials.end(), MonomialLess{});
  for (std::size_t k = 0; k < ns.monomials.size(); ++k) ns.index_.emplace(ns.monomials[k], k);
  return ns;
}

QuotientRing::QuotientRing(const GroebnerBasis& gb, const NormalSet& ns) : gb_(gb), ns_(ns) {}

const NormalCoordinates& QuotientRing::reduce(const Monomial& m) {
  if (auto it = memo_.find(m); it != memo_.end()) return it->second;

  NormalCoordinates out;
  if (const auto idx = ns_.index_of(m); idx >= 0) {
    out.emplace_back(static_cast<std::size_t>(idx), mpq_class(1));
  } else {
    const RationalPoly* g = nullptr;
    for (const auto& b : gb_.basis)
      if (b.leading_monomial().divides(m) && (!g || b.size() < g->size())) g = &b;
    if (!g) throw Error(ErrorCode::InvalidInput, "monomial is neither standard nor reducible");
    // m = q*lm(g) == -q*tail(g) modulo the ideal; every q*t is smaller than m.
    const Monomial q = m.quotient(g->leading_monomial());
    std::map<std::size_t, mpq_class> acc;
    const auto& terms = g->terms();
    for (std::size_t k = 1; k < terms.size(); ++k) {
      const NormalCoordinates& sub = reduce(terms[k].monomial * q);
      for (const auto& [i, c] : sub) acc[i] -= terms[k].coeff * c;
    }
    for (auto& [i, c] : acc)
      if (c != 0) out.emplace_back(i, std::move(c));
  }
  return memo_.emplace(m, std::move(out)).first->second;
}

NormalCoordinates QuotientRing::reduce(const RationalPoly& p) {
  std::map<std::size_t, mpq_class> acc;
  for (const auto& t : p.terms())
    for (const auto& [i, c] : reduce(t.monomial)) acc[i] += t.coeff * c;
  NormalCoordinates out;
  for (auto& [i, c] : acc)
    if (c != 0) out.emplace_back(i, std::move(c));
  return out;
}

Matrix QuotientRing::multiplication_matrix(const RationalPoly& f) {
  const auto n = static_cast<Eigen::Index>(ns_.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::map<std::size_t, mpq_class> acc;
    const Monomial& b = ns_.monomials[static_cast<std::size_t>(j)];
    for (const auto& t : f.terms())
      for (const auto& [i, c] : reduce(t.monomial * b)) acc[i] += t.coeff * c;
    for (const auto& [i, c] : acc) m(static_cast<Eigen::Index>(i), j) = c.get_d();
  }
  return m;
}

Matrix mult_matrix(const RationalPoly& f, const GroebnerBasis& gb, const NormalSet& ns) {
  QuotientRing ring(gb, ns);
  return ring.multiplication_matrix(f);
}

}  // namespace spheremax
