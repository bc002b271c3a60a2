#include "spheremax/poweriter.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <random>
#include <string>

namespace spheremax {

namespace {

constexpr std::uint64_t kRestartStride = 0x9E3779B97F4A7C15ull;
constexpr std::size_t kCycleWindow = 4;
// Consecutive iterates at least this far apart (1 - |cos|) before a repeat counts as a cycle.
constexpr double kCycleSeparation = 1e-6;

VectorXd random_unit(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(n);
  do {
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

Index total_length(const Dims& dims) {
  Index n = 0;
  for (Index d : dims) n += d;
  return n;
}

std::vector<VectorXd> split(const VectorXd& q, const Dims& dims) {
  std::vector<VectorXd> out;
  out.reserve(dims.size());
  Index at = 0;
  for (Index d : dims) {
    out.emplace_back(q.segment(at, d));
    at += d;
  }
  return out;
}

VectorXd concat_gradient(const Form& form, const std::vector<VectorXd>& slots) {
  VectorXd g(total_length(form.dims()));
  Index at = 0;
  for (Index s = 0; s < form.order(); ++s) {
    const Index d = form.dims()[s];
    g.segment(at, d) = partial_gradient(form, s, slots);
    at += d;
  }
  return g;
}

// Splits q into slots and puts each on its sphere; nullopt if a block vanished.
std::optional<std::vector<VectorXd>> slot_point(const VectorXd& q, const Dims& dims) {
  auto pts = split(q, dims);
  for (auto& v : pts) {
    const double n = v.norm();
    if (n == 0.0) return std::nullopt;
    v /= n;
  }
  return pts;
}

void finish(const Form& form, std::vector<VectorXd> pts, IterationResult& out) {
  const double value = evaluate(form, pts);
  out.value = std::abs(value);
  out.residual = lagrange_residual(form, pts) / (1.0 + out.value);
  out.point = std::move(pts);
}

struct ZeroGradientHit {};

// One seeded run.  `pairedSpectrum` accepts period-2 alignment as
// convergence (bilinear case); otherwise period 2..4 alignment is a cycle.
IterationResult run_once(const Form& form, const IterationOptions& opts, std::uint64_t seed, bool pairedSpectrum) {
  std::mt19937_64 rng(seed);
  VectorXd q = random_unit(total_length(form.dims()), rng);
  std::deque<VectorXd> history;  // most recent first

  IterationResult out;
  out.seedUsed = seed;
  const double threshold = 1.0 - opts.tol;

  for (std::int64_t k = 1; k <= opts.maxIters; ++k) {
    VectorXd g = concat_gradient(form, split(q, form.dims()));
    const double gn = g.norm();
    if (gn == 0.0 || !std::isfinite(gn)) throw ZeroGradientHit{};
    g /= gn;

    history.push_front(std::move(q));
    if (history.size() > kCycleWindow) history.pop_back();
    q = std::move(g);
    out.iterations = k;

    const double c1 = std::abs(q.dot(history[0]));
    const double c2 = history.size() >= 2 ? std::abs(q.dot(history[1])) : 0.0;
    const bool aligned = c1 >= threshold || (pairedSpectrum && c2 >= threshold);

    if (aligned) {
      auto pts = slot_point(q, form.dims());
      if (!pts) throw ZeroGradientHit{};
      finish(form, std::move(*pts), out);
      if (out.residual <= 10.0 * opts.tol) {
        out.status = IterationStatus::Converged;
        return out;
      }
      if (pairedSpectrum) {
        // q +- previous iterate splits the two-cycle into its +sigma and -sigma parts.
        for (double sign : {1.0, -1.0}) {
          auto split_pts = slot_point(q + sign * history[0], form.dims());
          if (!split_pts) continue;
          IterationResult candidate = out;
          finish(form, std::move(*split_pts), candidate);
          if (candidate.residual <= 10.0 * opts.tol) {
            candidate.status = IterationStatus::Converged;
            return candidate;
          }
        }
      }
      continue;
    }
    const double firstStep = pairedSpectrum ? std::min(c1, c2) : c1;
    for (std::size_t p = pairedSpectrum ? 2 : 1; p < history.size() && firstStep < 1.0 - kCycleSeparation; ++p) {
      if (std::abs(q.dot(history[p])) >= threshold) {
        auto pts = slot_point(q, form.dims());
        if (!pts) throw ZeroGradientHit{};
        finish(form, std::move(*pts), out);
        out.status = IterationStatus::Oscillating;
        return out;
      }
    }
  }

  if (auto pts = slot_point(q, form.dims())) finish(form, std::move(*pts), out);
  out.status = IterationStatus::NonConverged;
  return out;
}

IterationResult run_with_restarts(const Form& form, const IterationOptions& opts, bool pairedSpectrum) {
  std::optional<IterationResult> firstFallback;
  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(attempt) * kRestartStride;
    try {
      IterationResult r = run_once(form, opts, seed, pairedSpectrum);
      if (r.status != IterationStatus::Oscillating) return r;
      if (!firstFallback) firstFallback = std::move(r);
    } catch (const ZeroGradientHit&) {
    }
  }
  if (firstFallback) return *firstFallback;
  throw Error(ErrorCode::ZeroGradient,
              "gradient vanished on every start (" + std::to_string(opts.restarts + 1) + " seeds)");
}

void require_nonzero(const Form& form) {
  if (form.coeffs().cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorCode::ZeroGradient, "the form is identically zero");
}

}  // namespace

IterationResult bilinear_max(const Form& form, const IterationOptions& opts) {
  if (form.order() != 2) throw Error(ErrorCode::InvalidInput, "bilinear_max needs a form with two slots");
  require_nonzero(form);
  return run_with_restarts(form, opts, /*pairedSpectrum=*/true);
}

IterationResult multilinear_iterate(const Form& form, const IterationOptions& opts) {
  if (form.order() < 2) throw Error(ErrorCode::InvalidInput, "multilinear_iterate needs at least two slots");
  if (form.order() == 2) return bilinear_max(form, opts);
  require_nonzero(form);
  return run_with_restarts(form, opts, /*pairedSpectrum=*/false);
}

IterationResult multistart_iterate(const Form& form, int starts, const IterationOptions& opts,
                                   double acceptResidual) {
  std::optional<IterationResult> best;
  std::optional<IterationResult> fallback;
  for (int s = 0; s < starts; ++s) {
    IterationOptions o = opts;
    o.seed = opts.seed + static_cast<std::uint64_t>(s);
    IterationResult r = multilinear_iterate(form, o);
    if (r.residual <= acceptResidual) {
      if (!best || r.value > best->value) best = std::move(r);
    } else if (!fallback || r.value > fallback->value) {
      fallback = std::move(r);
    }
  }
  if (best) return *best;
  if (fallback) return *fallback;
  throw Error(ErrorCode::InvalidInput, "multistart needs at least one start");
}

IterationResult alternating_iterate(const Form& form, std::vector<VectorXd> start, const IterationOptions& opts) {
  if (static_cast<Index>(start.size()) != form.order())
    throw Error(ErrorCode::DimensionMismatch, "start point needs one vector per slot");
  require_nonzero(form);
  for (Index s = 0; s < form.order(); ++s) {
    if (start[s].size() != form.dims()[s]) throw Error(ErrorCode::DimensionMismatch, "start vector length");
    const double n = start[s].norm();
    if (n == 0.0) throw Error(ErrorCode::InvalidInput, "start vectors must be nonzero");
    start[s] /= n;
  }
  IterationResult out;
  out.seedUsed = opts.seed;
  out.status = IterationStatus::NonConverged;
  for (std::int64_t k = 1; k <= opts.maxIters; ++k) {
    for (Index s = 0; s < form.order(); ++s) {
      const VectorXd g = partial_gradient(form, s, start);
      const double n = g.norm();
      if (n == 0.0) throw Error(ErrorCode::ZeroGradient, "slot gradient vanished");
      start[s] = g / n;
    }
    out.iterations = k;
    finish(form, start, out);
    if (out.residual <= 10.0 * opts.tol) {
      out.status = IterationStatus::Converged;
      break;
    }
  }
  out.point = std::move(start);
  return out;
}

double spectral_radius(const Matrix& m, const IterationOptions& opts) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "spectral_radius needs a square matrix");
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorCode::ZeroGradient, "spectral_radius of the zero matrix");

  const double scale = 1.0 + frobenius_norm(m);
  const double threshold = 1.0 - opts.tol;
  bool cycled = false;

  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(attempt) * kRestartStride);
    VectorXd w = random_unit(m.rows(), rng);
    std::deque<VectorXd> history;
    bool restart = false;
    for (std::int64_t k = 1; k <= opts.maxIters && !restart; ++k) {
      VectorXd next = m * w;
      const double n = next.norm();
      if (n == 0.0) {
        restart = true;
        break;
      }
      next /= n;
      history.push_front(std::move(w));
      if (history.size() > kCycleWindow) history.pop_back();
      w = std::move(next);

      const double c1 = std::abs(w.dot(history[0]));
      if (c1 >= threshold) {
        const VectorXd mw = m * w;
        const double lambda = w.dot(mw);
        if ((mw - lambda * w).norm() <= 10.0 * opts.tol * scale) return std::abs(lambda);
        continue;
      }
      for (std::size_t p = 1; p < history.size() && c1 < 1.0 - kCycleSeparation; ++p) {
        if (std::abs(w.dot(history[p])) >= threshold) {
          cycled = true;
          restart = true;
          break;
        }
      }
    }
    if (!restart) break;
  }
  throw Error(ErrorCode::NonConverged, cycled ? "power iteration is cycling (tied dominant magnitudes)"
                                              : "power iteration did not converge");
}

}  // namespace spheremax
