#include "spheremax/algsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "spheremax/chowcount.hpp"
#include "spheremax/error.hpp"
#include "spheremax/linalg.hpp"

namespace spheremax {

namespace {

constexpr const char* kSlotLetters[] = {"x", "y", "z", "t", "u", "v"};
constexpr std::size_t kMaxSlots = std::size(kSlotLetters);

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> variable_names(const Dims& dims) {
  if (dims.size() > kMaxSlots) throw Error(ErrorCode::InvalidInput, "at most 6 slots are supported");
  std::vector<std::string> names;
  for (std::size_t s = 0; s < dims.size(); ++s)
    for (Index c = 0; c < dims[s]; ++c) names.push_back(kSlotLetters[s] + std::to_string(c + 1));
  if (names.size() > kMaxVariables) throw Error(ErrorCode::InvalidInput, "too many variables for the exact solver");
  return names;
}

std::vector<std::size_t> slot_offsets(const Dims& dims) {
  std::vector<std::size_t> off(dims.size(), 0);
  for (std::size_t s = 1; s < dims.size(); ++s) off[s] = off[s - 1] + static_cast<std::size_t>(dims[s - 1]);
  return off;
}

struct Pipeline {
  PolySystem system;
  GroebnerBasis gb;
  NormalSet ns;
};

Pipeline run_pipeline(const Form& form, Chart chart, const SolveOptions& opts, SolveReport& report) {
  auto t0 = Clock::now();
  Pipeline p;
  p.system = build_critical_system(form, chart);
  report.timings.build = seconds_since(t0);

  t0 = Clock::now();
  p.gb = groebner(p.system.polys, p.system.variables, opts.groebner);
  p.ns = normal_set(p.gb);
  report.timings.groebner = seconds_since(t0);
  report.groebnerStats = p.gb.stats;
  report.quotientDim = p.ns.size();
  report.chart = chart;
  return p;
}

bool is_real(std::complex<double> z, double tol) { return std::abs(z.imag()) <= tol * (1.0 + std::abs(z)); }

bool has_repeated(const Eigen::VectorXcd& ev, double tol) {
  std::vector<std::complex<double>> v(ev.data(), ev.data() + ev.size());
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() < b.real(); });
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size() && v[j].real() - v[i].real() <= tol * (1.0 + std::abs(v[i])); ++j)
      if (std::abs(v[j] - v[i]) <= tol * (1.0 + std::abs(v[i]))) return true;
  return false;
}

RationalPoly random_separator(std::size_t nvars, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(1, 97);
  std::bernoulli_distribution sign(0.5);
  std::vector<Term> terms;
  for (std::size_t v = 0; v < nvars; ++v) {
    const int c = coeff(rng);
    terms.push_back({Monomial::variable(v), mpq_class(sign(rng) ? -c : c)});
  }
  return RationalPoly(nvars, std::move(terms));
}

bool same_point(const CriticalPoint& a, const CriticalPoint& b, double tol) {
  for (std::size_t s = 0; s < a.vectors.size(); ++s)
    if ((a.vectors[s] - b.vectors[s]).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

// Reads solutions off the left eigenvectors of the separator's multiplication
// matrix.  Returns false if the separator has a repeated eigenvalue.
bool extract_points(const Form& form, const Pipeline& p, QuotientRing& ring, const RationalPoly& separator,
                    const SolveOptions& opts, SolveReport& report, Eigen::VectorXcd* separatorEigenvalues) {
  const Matrix m = ring.multiplication_matrix(separator);
  const EigenDecomposition eig = eig_general(m.transpose());
  if (has_repeated(eig.eigenvalues, opts.realTol)) return false;
  if (separatorEigenvalues) *separatorEigenvalues = eig.eigenvalues;

  const auto n = static_cast<Index>(p.ns.size());
  const std::size_t nvars = p.system.variables.size();
  // Row v of `coords` expresses variable v in the normal-set basis.
  Matrix coords = Matrix::Zero(static_cast<Index>(nvars), n);
  std::vector<std::string> missing;
  for (std::size_t v = 0; v < nvars; ++v) {
    const Monomial xv = Monomial::variable(v);
    const NormalCoordinates& nf = ring.reduce(xv);
    const bool constant = nf.empty() || (nf.size() == 1 && nf.front().first == 0);
    if (p.ns.index_of(xv) < 0 && !constant) missing.push_back(p.system.variables[v]);
    for (const auto& [i, c] : nf) coords(static_cast<Index>(v), static_cast<Index>(i)) = c.get_d();
  }
  if (!missing.empty()) {
    std::string note = "variables recovered from normal forms:";
    for (const auto& name : missing) note += " " + name;
    report.flags.push_back(note);
  }

  const auto offsets = slot_offsets(form.dims());
  std::size_t degenerate = 0, rejected = 0;
  std::vector<CriticalPoint> points;
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
    if (!is_real(eig.eigenvalues[k], opts.realTol)) continue;
    Eigen::VectorXcd v = eig.eigenvectors.col(k);
    const std::complex<double> v0 = v[0];  // the constant monomial comes first
    if (std::abs(v0) <= 1e-8 * v.norm()) {
      ++degenerate;
      continue;
    }
    v /= v0;
    const Eigen::VectorXd values = (coords.cast<std::complex<double>>() * v).real();

    CriticalPoint cp;
    bool ok = true;
    for (std::size_t s = 0; s < form.dims().size() && ok; ++s) {
      VectorXd x = values.segment(static_cast<Index>(offsets[s]), form.dims()[s]);
      const double nx = x.norm();
      if (!(nx > 1e-12) || !std::isfinite(nx)) ok = false;
      else cp.vectors.push_back(x / nx);
    }
    if (!ok) {
      ++degenerate;
      continue;
    }
    canonicalize_signs(cp.vectors);
    cp.value = evaluate(form, cp.vectors);
    cp.residual = lagrange_residual(form, cp.vectors) / (1.0 + std::abs(cp.value));
    if (cp.residual > opts.residualTol) {
      ++rejected;
      continue;
    }
    if (std::none_of(points.begin(), points.end(), [&](const CriticalPoint& q) { return same_point(q, cp, 1e-6); }))
      points.push_back(std::move(cp));
  }
  if (degenerate > 0)
    report.flags.push_back("DegenerateEigenvector: " + std::to_string(degenerate) +
                           " eigenvector(s) with vanishing constant coordinate skipped");
  if (rejected > 0)
    report.flags.push_back(std::to_string(rejected) + " real eigenvector(s) failed the residual test");
  std::stable_sort(points.begin(), points.end(),
                   [](const CriticalPoint& a, const CriticalPoint& b) { return std::abs(a.value) > std::abs(b.value); });
  report.points = std::move(points);
  return true;
}

void extract_with_retries(const Form& form, const Pipeline& p, QuotientRing& ring, RationalPoly separator,
                          const SolveOptions& opts, SolveReport& report, Eigen::VectorXcd* separatorEigenvalues) {
  std::mt19937_64 rng(opts.seed);
  for (int attempt = 0;; ++attempt) {
    if (extract_points(form, p, ring, separator, opts, report, separatorEigenvalues)) return;
    if (attempt >= opts.separatorRetries)
      throw Error(ErrorCode::RepeatedEigenvalue, "separating linear form has repeated eigenvalues after " +
                                                     std::to_string(opts.separatorRetries) + " retries");
    report.flags.push_back("RepeatedEigenvalue: retrying with a random linear combination of the variables");
    separator = random_separator(p.system.variables.size(), rng);
  }
}

}  // namespace

std::size_t PolySystem::variable_index(Index slot, Index coord) const {
  std::size_t k = 0;
  for (Index s = 0; s < slot; ++s) k += static_cast<std::size_t>(dims[static_cast<std::size_t>(s)]);
  return k + static_cast<std::size_t>(coord);
}

RationalPoly form_polynomial(const Form& form, std::span<const std::string> variables) {
  const std::size_t nvars = variables.size();
  const auto offsets = slot_offsets(form.dims());
  std::vector<Term> terms;
  std::vector<int> exps(nvars, 0);
  std::vector<Index> idx(form.dims().size(), 0);
  for (Index k = 0; k < form.size(); ++k) {
    const double c = form.coeffs()[k];
    if (c != 0.0) {
      std::fill(exps.begin(), exps.end(), 0);
      for (std::size_t s = 0; s < idx.size(); ++s) exps[offsets[s] + static_cast<std::size_t>(idx[s])] = 1;
      terms.push_back({Monomial::from_exponents(exps), rationalize(c)});
    }
    for (std::size_t s = idx.size(); s-- > 0;) {
      if (++idx[s] < form.dims()[s]) break;
      idx[s] = 0;
    }
  }
  return RationalPoly(nvars, std::move(terms));
}

PolySystem build_critical_system(const Form& form, Chart chart) {
  if (form.order() < 2) throw Error(ErrorCode::InvalidInput, "the critical system needs at least two slots");
  PolySystem sys;
  sys.chart = chart;
  sys.dims = form.dims();
  sys.variables = variable_names(form.dims());
  const std::size_t nvars = sys.variables.size();
  const RationalPoly ell = form_polynomial(form, sys.variables);

  for (Index s = 0; s < form.order(); ++s) {
    const Index d = form.dims()[static_cast<std::size_t>(s)];
    for (Index a = 0; a < d; ++a)
      for (Index b = a + 1; b < d; ++b) {
        const std::size_t va = sys.variable_index(s, a), vb = sys.variable_index(s, b);
        sys.polys.push_back(RationalPoly::variable(nvars, vb) * ell.derivative(va) -
                            RationalPoly::variable(nvars, va) * ell.derivative(vb));
      }
  }
  for (Index s = 0; s < form.order(); ++s) {
    const Index d = form.dims()[static_cast<std::size_t>(s)];
    if (chart == Chart::Sphere) {
      std::vector<Term> terms;
      for (Index c = 0; c < d; ++c) terms.push_back({Monomial::variable(sys.variable_index(s, c), 2), mpq_class(1)});
      terms.push_back({Monomial{}, mpq_class(-1)});
      sys.polys.emplace_back(nvars, std::move(terms));
    } else {
      sys.polys.push_back(RationalPoly::variable(nvars, sys.variable_index(s, 0)) -
                          RationalPoly::constant(nvars, mpq_class(1)));
    }
  }
  return sys;
}

bool satisfies_dimension_inequality(const Dims& dims) {
  Index total = 0;
  for (Index d : dims) total += d - 1;
  for (Index d : dims)
    if (2 * (d - 1) > total) return false;
  return true;
}

SolveReport solve_max(const Form& form, const SolveOptions& opts) {
  SolveReport report;
  Pipeline p = run_pipeline(form, Chart::Sphere, opts, report);

  const auto t0 = Clock::now();
  QuotientRing ring(p.gb, p.ns);
  const Matrix m = ring.multiplication_matrix(form_polynomial(form, p.system.variables));
  const EigenDecomposition eig = eig_general(m);
  report.eigenvalues = eig.eigenvalues;
  bool anyReal = false;
  for (Index k = 0; k < eig.eigenvalues.size(); ++k) {
    if (!is_real(eig.eigenvalues[k], opts.realTol)) continue;
    ++report.realEigenvalueCount;
    anyReal = true;
    report.maxValue = std::max(report.maxValue, std::abs(eig.eigenvalues[k].real()));
  }
  if (!anyReal) report.flags.push_back("no real eigenvalue within the realness tolerance");

  if (opts.emitPoints) {
    std::mt19937_64 rng(opts.seed);
    extract_with_retries(form, p, ring, random_separator(p.system.variables.size(), rng), opts, report, nullptr);
    if (!report.points.empty()) {
      const double best = std::abs(report.points.front().value);
      if (std::abs(best - report.maxValue) > 1e-6 * (1.0 + report.maxValue))
        report.flags.push_back("best recovered point differs from the eigenvalue maximum");
    }
  }
  report.timings.eigen = seconds_since(t0);
  return report;
}

SolveReport solve_argmax(const Form& form, const SolveOptions& opts) {
  SolveReport report;
  if (!satisfies_dimension_inequality(form.dims())) {
    if (!opts.force)
      throw Error(ErrorCode::PreconditionViolated,
                  "dimension inequality 2 n_i <= sum n_j fails; the gradient map may have base points (use force)");
    report.flags.push_back("PreconditionViolated: dimension inequality fails, solved anyway (forced)");
  }
  Pipeline p = run_pipeline(form, Chart::Affine, opts, report);
  const std::vector<std::int64_t> dims(form.dims().begin(), form.dims().end());
  const mpz_class generic = count_extreme_classes(dims);
  if (mpz_class(report.quotientDim) != generic)
    report.flags.push_back("quotient dimension " + std::to_string(report.quotientDim) + " differs from the generic count " +
                           generic.get_str() + "; the form is not generic for the chart x_1 = 1");

  const auto t0 = Clock::now();
  QuotientRing ring(p.gb, p.ns);
  // First free coordinate; a one-dimensional first slot falls back to a random combination.
  std::mt19937_64 rng(opts.seed);
  RationalPoly separator = form.dims().front() >= 2
                               ? RationalPoly::variable(p.system.variables.size(), p.system.variable_index(0, 1))
                               : random_separator(p.system.variables.size(), rng);
  extract_with_retries(form, p, ring, separator, opts, report, &report.eigenvalues);
  for (Index k = 0; k < report.eigenvalues.size(); ++k)
    if (is_real(report.eigenvalues[k], opts.realTol)) ++report.realEigenvalueCount;
  if (report.points.empty())
    throw Error(ErrorCode::DegenerateEigenvector, "no real critical point could be recovered in the affine chart");
  report.maxValue = std::abs(report.points.front().value);
  report.timings.eigen = seconds_since(t0);
  return report;
}

}  // namespace spheremax
