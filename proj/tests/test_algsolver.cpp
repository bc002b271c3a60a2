#include <algorithm>
#include <cmath>

#include "spheremax/algsolver.hpp"
#include "spheremax/chowcount.hpp"
#include "spheremax/linalg.hpp"
#include "spheremax/poweriter.hpp"
#include "test_support.hpp"

using namespace spheremax;
using namespace spheremax::test;

namespace {

Form diag21() {
  return Form({2, 2}, (VectorXd(4) << 2, 0, 0, 1).finished());
}

std::int64_t choose2(Index n) { return n * (n - 1) / 2; }

mpz_class expected_classes(const Dims& dims) {
  const std::vector<std::int64_t> d(dims.begin(), dims.end());
  return count_extreme_classes(d);
}

void expect_valid_points(const Form& f, const SolveReport& rep) {
  for (const auto& p : rep.points) {
    ASSERT_EQ(static_cast<Index>(p.vectors.size()), f.order());
    for (const auto& v : p.vectors) {
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
      Index first = 0;
      while (first < v.size() && std::abs(v[first]) <= 1e-12) ++first;
      ASSERT_LT(first, v.size());
      EXPECT_GT(v[first], 0.0);
    }
    EXPECT_NEAR(p.value, evaluate(f, p.vectors), 1e-9 * (1 + std::abs(p.value)));
    EXPECT_LE(p.residual, 1e-6);
    EXPECT_LE(lagrange_residual(f, p.vectors), 1e-6 * (1 + std::abs(p.value)));
  }
}

}  // namespace

TEST(BuildCriticalSystem, EquationCount) {
  std::mt19937_64 rng(1);
  for (const Dims& dims : {Dims{2, 2}, Dims{3, 2, 4}, Dims{2, 2, 2, 2}}) {
    const Form f = random_integer_form(dims, rng);
    for (Chart chart : {Chart::Sphere, Chart::Affine}) {
      const PolySystem sys = build_critical_system(f, chart);
      std::int64_t minors = 0;
      Index nvars = 0;
      for (Index d : dims) minors += choose2(d), nvars += d;
      EXPECT_EQ(static_cast<std::int64_t>(sys.polys.size()), minors + static_cast<std::int64_t>(dims.size()));
      EXPECT_EQ(static_cast<Index>(sys.variables.size()), nvars);
      EXPECT_EQ(sys.chart, chart);
    }
  }
}

TEST(BuildCriticalSystem, VariableNamesAndChartEquations) {
  std::mt19937_64 rng(2);
  const PolySystem sys = build_critical_system(random_integer_form({2, 3}, rng), Chart::Affine);
  EXPECT_EQ(sys.variables, (std::vector<std::string>{"x1", "x2", "y1", "y2", "y3"}));
  EXPECT_EQ(sys.variable_index(1, 2), 4u);
  const RationalPoly chart = RationalPoly::variable(5, 2) - RationalPoly::constant(5, 1);  // y1 - 1
  EXPECT_EQ(sys.polys.back(), chart);
}

TEST(BuildCriticalSystem, MinorsVanishAtExtremePoints) {
  std::mt19937_64 rng(3);
  const Form f = random_integer_form({3, 2}, rng);
  const auto r = bilinear_max(f);
  const PolySystem sys = build_critical_system(f, Chart::Sphere);
  // Evaluate each equation at the extreme point numerically.
  std::vector<double> x;
  for (const auto& v : r.point)
    for (Index i = 0; i < v.size(); ++i) x.push_back(v[i]);
  for (const auto& p : sys.polys) {
    double s = 0;
    for (const auto& t : p.terms()) {
      double m = t.coeff.get_d();
      for (std::size_t v = 0; v < x.size(); ++v) m *= std::pow(x[v], t.monomial.exponent(v));
      s += m;
    }
    EXPECT_NEAR(s, 0.0, 1e-9);
  }
}

TEST(SolveMax, DiagonalBilinear) {
  const auto rep = solve_max(diag21());
  EXPECT_EQ(rep.quotientDim, 8u);
  EXPECT_NEAR(rep.maxValue, 2.0, 1e-12);
}

TEST(SolveMax, TrilinearSphereDimension) {
  std::mt19937_64 rng(4);
  const auto rep = solve_max(random_integer_form({2, 2, 2}, rng));
  EXPECT_EQ(rep.quotientDim, 8u * 6u);
  EXPECT_EQ(rep.eigenvalues.size(), 48);
}

TEST(SolveMax, EigenvaluesComeInSignedPairs) {
  const Form f = load_form("trilinear_counterexample.json");
  const auto rep = solve_max(f);
  std::vector<double> re;
  for (Index k = 0; k < rep.eigenvalues.size(); ++k)
    if (std::abs(rep.eigenvalues[k].imag()) <= 1e-8 * (1 + std::abs(rep.eigenvalues[k]))) re.push_back(rep.eigenvalues[k].real());
  ASSERT_FALSE(re.empty());
  for (double v : re)
    EXPECT_TRUE(std::any_of(re.begin(), re.end(), [&](double w) { return std::abs(v + w) < 1e-6 * (1 + std::abs(v)); }));
  EXPECT_GT(rep.maxValue, 0);
}

TEST(SolveMax, EqualsTopSingularValue) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(2 + trial % 3, 2 + (trial / 3) % 3, rng);
    const Form f = Form::generate({a.rows(), a.cols()}, [&](std::span<const Index> i) { return a(i[0], i[1]); });
    const double s1 = svd(a).singularValues[0];
    EXPECT_NEAR(solve_max(f).maxValue, s1, 1e-8 * s1);
  }
}

TEST(SolveMax, MatrixExample) {
  EXPECT_NEAR(solve_max(load_form("matrix_4x3_form.json")).maxValue, 48.46054603, 1e-6);
}

TEST(SolveMax, NeverBelowPowerIteration) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const Form f = random_integer_form({2, 2, 2}, rng);
    const double exact = solve_max(f).maxValue;
    IterationOptions o;
    const auto best = multistart_iterate(f, 100, o, 1e-6);
    EXPECT_GE(exact, best.value - 1e-6);
    if (best.residual <= 1e-6) {
      EXPECT_NEAR(exact, best.value, 1e-6 * (1 + exact));
    }
  }
}

TEST(SolveMax, PointsMatchEigenvalues) {
  // All dims 2: every real eigenvalue of M_l is +-l(p) for a recovered class p.
  std::mt19937_64 rng(7);
  const Form f = random_integer_form({2, 2, 2}, rng);
  SolveOptions o;
  o.emitPoints = true;
  const auto rep = solve_max(f, o);
  expect_valid_points(f, rep);
  std::vector<double> fromEig, fromPoints;
  for (Index k = 0; k < rep.eigenvalues.size(); ++k)
    if (std::abs(rep.eigenvalues[k].imag()) <= 1e-8 * (1 + std::abs(rep.eigenvalues[k])))
      fromEig.push_back(std::abs(rep.eigenvalues[k].real()));
  for (const auto& p : rep.points) fromPoints.push_back(std::abs(p.value));
  auto dedupe = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-6 * (1 + a); }),
            v.end());
  };
  dedupe(fromEig);
  dedupe(fromPoints);
  ASSERT_EQ(fromEig.size(), fromPoints.size());
  for (std::size_t i = 0; i < fromEig.size(); ++i) EXPECT_NEAR(fromEig[i], fromPoints[i], 1e-6 * (1 + fromEig[i]));
  EXPECT_NEAR(std::abs(rep.points.front().value), rep.maxValue, 1e-6 * (1 + rep.maxValue));
}

TEST(SolveMax, NonGenericInputIsFlaggedNotSilent) {
  const Form identity({2, 2}, (VectorXd(4) << 1, 0, 0, 1).finished());
  try {
    solve_max(identity);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotZeroDimensional);
  }
}

TEST(SolveMax, BudgetExceeded) {
  std::mt19937_64 rng(8);
  SolveOptions o;
  o.groebner.maxReductions = 3;
  try {
    solve_max(random_integer_form({2, 2, 3}, rng), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
}

TEST(SolveArgmax, DiagonalBilinear) {
  const auto rep = solve_argmax(diag21());
  ASSERT_FALSE(rep.points.empty());
  EXPECT_NEAR(rep.maxValue, 2.0, 1e-12);
  EXPECT_LT((rep.points[0].vectors[0] - VectorXd::Unit(2, 0)).norm(), 1e-12);
  EXPECT_LT((rep.points[0].vectors[1] - VectorXd::Unit(2, 0)).norm(), 1e-12);
}

TEST(SolveArgmax, FourLinearExample) {
  const Form f = load_form("four_linear.json");
  const auto rep = solve_argmax(f);
  const double expected[4][2] = {{0.4799354720, -0.8773037918},
                              {0.2732019392, -0.9619567040},
                              {0.7563638894, 0.6541511043},
                              {0.3260948315, 0.9453370622}};
  EXPECT_NEAR(rep.maxValue, 16.71262553, 1e-6);
  for (int s = 0; s < 4; ++s)
    EXPECT_LT(sign_class_distance(rep.points[0].vectors[s], (VectorXd(2) << expected[s][0], expected[s][1]).finished()), 1e-6);
  EXPECT_EQ(rep.quotientDim, 24u);
  expect_valid_points(f, rep);
}

TEST(SolveArgmax, AffineDimensionMatchesCount) {
  std::mt19937_64 rng(9);
  for (const Dims& dims : {Dims{2, 2}, Dims{3, 3}, Dims{2, 2, 2}, Dims{2, 2, 3}, Dims{2, 3, 3}}) {
    const Form f = random_integer_form(dims, rng, 99);
    const auto rep = solve_argmax(f);
    EXPECT_EQ(mpz_class(rep.quotientDim), expected_classes(dims));
    for (const auto& flag : rep.flags) EXPECT_EQ(flag.find("generic count"), std::string::npos) << flag;
    expect_valid_points(f, rep);
    EXPECT_NEAR(std::abs(rep.points.front().value), solve_max(f).maxValue, 1e-6 * (1 + rep.maxValue));
  }
}

TEST(SolveArgmax, NonGenericChartIsFlagged) {
  // Rank one with its maximum at x = e_2, outside the chart x_1 = 1.
  const Form f({2, 2}, (VectorXd(4) << 0, 0, 7, 6).finished());
  const auto rep = solve_argmax(f);
  EXPECT_EQ(rep.quotientDim, 1u);
  ASSERT_FALSE(rep.flags.empty());
  EXPECT_NE(rep.flags.back().find("generic count 2"), std::string::npos);
}

TEST(SolveArgmax, AllAffineVariablesInNormalSet) {
  std::mt19937_64 rng(10);
  const auto rep = solve_argmax(random_integer_form({2, 2, 2}, rng));
  EXPECT_EQ(rep.quotientDim, 6u);
  for (const auto& flag : rep.flags) EXPECT_EQ(flag.find("recovered"), std::string::npos) << flag;
}

TEST(SolveArgmax, DimensionInequality) {
  EXPECT_TRUE(satisfies_dimension_inequality({2, 2, 2}));
  EXPECT_TRUE(satisfies_dimension_inequality({3, 3, 3}));
  EXPECT_FALSE(satisfies_dimension_inequality({2, 3}));
  EXPECT_FALSE(satisfies_dimension_inequality({2, 2, 5}));
  std::mt19937_64 rng(11);
  const Form f = random_integer_form({2, 3}, rng);
  try {
    solve_argmax(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
  SolveOptions o;
  o.force = true;
  const auto rep = solve_argmax(f, o);
  EXPECT_FALSE(rep.flags.empty());
}

TEST(SolveArgmax, Deterministic) {
  std::mt19937_64 rng(12);
  const Form f = random_integer_form({2, 2, 3}, rng);
  const auto a = solve_argmax(f), b = solve_argmax(f);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (std::size_t s = 0; s < a.points[i].vectors.size(); ++s) EXPECT_EQ(a.points[i].vectors[s], b.points[i].vectors[s]);
}
