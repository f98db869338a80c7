#include <gtest/gtest.h>

#include "cdshift/series.hpp"
#include "support.hpp"

namespace cdshift {
namespace {

using testing::Rng;

GradedSeries random_scalar_polynomial(Rng& rng, int degree) {
  std::vector<Complex> c(degree + 1);
  for (auto& x : c) x = testing::random_complex(rng);
  return GradedSeries::scalar(c);
}

TEST(GradedSeries, LayoutAndWatermark) {
  GradedSeries f({1, 2, 3}, 4);
  EXPECT_EQ(f.dim(), 6);
  EXPECT_EQ(f.grades(), 3);
  EXPECT_EQ(f.offset(2), 3);
  EXPECT_EQ(f.truncation(), 4);
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f.exact_through(), 4);
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(f.coeff(n).size(), 6);
  EXPECT_EQ(f.coeff_or_zero(9).norm(), 0.0);
  f.set_exact_degree(2);
  EXPECT_EQ(f.exact_through(), 2);
  EXPECT_THROW(f.coeff_or_zero(7), InputError);
}

TEST(GradedSeries, RejectsBadConstruction) {
  EXPECT_THROW(GradedSeries({1}, -1), InputError);
  EXPECT_THROW(GradedSeries({}, 3), InputError);
  EXPECT_THROW(GradedSeries::monomial({1, 1}, 3, 2, 0, CVector::Ones(1)), InputError);
  EXPECT_THROW(GradedSeries::monomial({1, 1}, 3, 0, 4, CVector::Ones(1)), InputError);
}

TEST(SeriesDifferentiate, ZeroOrderIsIdentity) {
  Rng rng(1);
  const auto f = random_scalar_polynomial(rng, 5);
  EXPECT_EQ(max_coeff_diff(series_differentiate(f, 0), f, 5), 0.0);
}

TEST(SeriesDifferentiate, MonomialRule) {
  const auto f = GradedSeries::scalar({0.0, 0.0, 1.0});
  const auto d = series_differentiate(f, 1);
  EXPECT_EQ(d.coeff(0)(0), Complex(0.0));
  EXPECT_EQ(d.coeff(1)(0), Complex(2.0));
  // z^7, k = 3 -> 7!/4! z^4 = 210 z^4
  auto z7 = GradedSeries::monomial({1}, 7, 0, 7, CVector::Ones(1));
  const auto d3 = series_differentiate(z7, 3);
  EXPECT_EQ(d3.truncation(), 4);
  EXPECT_EQ(d3.coeff(4)(0), Complex(210.0));
  for (int n = 0; n < 4; ++n) EXPECT_EQ(d3.coeff(n)(0), Complex(0.0));
}

TEST(SeriesDifferentiate, RepeatedSingleSteps) {
  Rng rng(2);
  const auto f = random_scalar_polynomial(rng, 9);
  auto step = f;
  for (int k = 1; k <= 5; ++k) {
    step = series_differentiate(step, 1);
    EXPECT_LT(max_coeff_diff(step, series_differentiate(f, k), step.truncation()), 1e-9);
  }
}

TEST(SeriesDifferentiate, WatermarkDropsForTruncatedSeries) {
  GradedSeries f({1}, 6);
  f.set_exact_degree(4);
  EXPECT_EQ(series_differentiate(f, 2).exact_degree(), 2);
  EXPECT_TRUE(series_differentiate(GradedSeries({1}, 6), 2).is_polynomial());
  EXPECT_THROW(series_differentiate(f, 7), InputError);
}

TEST(SeriesTransform, IdentityReturnsInput) {
  Rng rng(3);
  const auto f = random_scalar_polynomial(rng, 6);
  const auto t = series_transform(f, MoebiusElement::identity(), 1.7, 6);
  EXPECT_LT(max_coeff_diff(t, f, 6), 1e-15);
}

TEST(SeriesTransform, ConstantUnderRotation) {
  const double theta = 0.6, lambda = 1.25;
  const auto t = series_transform(GradedSeries::scalar({1.0}).padded(5),
                                  MoebiusElement::rotation(theta), lambda, 5);
  EXPECT_NEAR(std::abs(t.coeff(0)(0) - std::polar(1.0, lambda * theta)), 0.0, 1e-15);
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(std::abs(t.coeff(n)(0)), 0.0, 1e-15);
}

TEST(SeriesTransform, LinearFunctionIsMoebiusSeries) {
  const auto g = MoebiusElement::from_parameters(Complex(0.2, -0.1), 0.3);
  const int n = 12;
  const auto t = series_transform(GradedSeries::scalar({0.0, 1.0}).padded(n), g, 0.0, n);
  // geometric expansion: (az + b) / ā * sum (-b̄z/ā)^k
  const Complex r = -std::conj(g.b()) / std::conj(g.a());
  for (int k = 0; k <= n; ++k) {
    Complex expected = g.b() * std::pow(r, k) / std::conj(g.a());
    if (k > 0) expected += g.a() * std::pow(r, k - 1) / std::conj(g.a());
    EXPECT_NEAR(std::abs(t.coeff(k)(0) - expected), 0.0, 1e-14);
  }
  EXPECT_EQ(t.exact_through(), n);
}

TEST(SeriesTransform, MatchesPointwiseEvaluation) {
  Rng rng(4);
  const auto g = testing::random_near_identity(rng, 0.3);
  const auto f = random_scalar_polynomial(rng, 4);
  const int n = 70;
  const auto t = series_transform(f.padded(n), g, 1.5, n);
  const Complex z(0.1, 0.15);
  Complex sum = 0.0, zk = 1.0;
  for (int k = 0; k <= n; ++k, zk *= z) sum += t.coeff(k)(0) * zk;
  const Complex gz = mobius_apply(g, z);
  Complex fg = 0.0, p = 1.0;
  for (int k = 0; k <= 4; ++k, p *= gz) fg += f.coeff(k)(0) * p;
  EXPECT_NEAR(std::abs(sum - derivative_power(g, z, 1.5) * fg), 0.0, 1e-12);
}

TEST(SeriesTransform, RoundTripThroughInverse) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing::random_near_identity(rng, 0.3);
    const auto f = random_scalar_polynomial(rng, 5);
    const int n = 90;
    auto there = series_transform(f.padded(n), g, 0.0, n);
    // the intermediate tail beyond degree 90 is below roundoff for |b| <= 0.3
    there.set_exact_degree(GradedSeries::kPolynomial);
    const auto back = series_transform(there, g.inverse(), 0.0, 5);
    EXPECT_LT(max_coeff_diff(back, f, 5), 1e-10);
  }
}

TEST(SeriesTransform, RejectsOverlongTruncation) {
  EXPECT_THROW(series_transform(GradedSeries::scalar({1.0, 2.0}), MoebiusElement::identity(), 0.0, 3),
               InputError);
}

TEST(SeriesTransform, TruncatedInputLosesExactness) {
  GradedSeries f({1}, 5);
  f.coeff(0)(0) = 1.0;
  f.set_exact_degree(5);
  const auto g = MoebiusElement::from_parameters(Complex(0.1), 0.0);
  EXPECT_LT(series_transform(f, g, 1.0, 5).exact_through(), 0);
  EXPECT_EQ(series_transform(f, MoebiusElement::rotation(0.4), 1.0, 5).exact_through(), 5);
}

TEST(SeriesTransform, BranchViolationPropagates) {
  EXPECT_THROW(series_transform(GradedSeries::scalar({1.0}), MoebiusElement(Complex(-1.0), Complex(0.0)),
                                0.5, 0),
               BranchError);
}

TEST(LeibnitzRhs, OrderZeroIdentity) {
  Rng rng(6);
  const auto f = random_scalar_polynomial(rng, 5);
  const auto r = leibnitz_rhs(f.padded(8), MoebiusElement::identity(), 2.0, 0, 8);
  EXPECT_LT(max_coeff_diff(r, f.padded(8), 8), 1e-15);
}

TEST(LeibnitzRhs, OrderOneExpansion) {
  Rng rng(7);
  const auto g = testing::random_near_identity(rng, 0.3);
  const auto f = random_scalar_polynomial(rng, 5);
  const double ell = 1.5;
  const int n = 10;
  const auto r = leibnitz_rhs(f.padded(n), g, ell, 1, n);
  auto first = series_transform(f.padded(n), g, ell + 0.5, n);
  const auto second = series_transform(series_differentiate(f, 1).padded(n), g, ell + 1.0, n);
  const Complex scale = 2.0 * ell * (-c_of(g));
  for (int k = 0; k <= n; ++k) first.coeff(k) = scale * first.coeff(k) + second.coeff(k);
  EXPECT_LT(max_coeff_diff(r, first, n), 1e-12);
}

TEST(LeibnitzRhs, MatchesDifferentiatedTransform) {
  Rng rng(8);
  for (double ell : {0.5, 1.0, 2.75}) {
    for (int k = 0; k <= 5; ++k) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto g = testing::random_near_identity(rng, 0.3);
        const int degree = std::uniform_int_distribution<int>(0, 8)(rng);
        const auto f = random_scalar_polynomial(rng, degree);
        const int n = 12;
        const auto direct = series_differentiate(series_transform(f.padded(n + k), g, ell, n + k), k);
        const auto rhs = leibnitz_rhs(f.padded(n), g, ell, k, n);
        EXPECT_LT(max_coeff_diff(direct, rhs, n), 1e-10) << "ell=" << ell << " k=" << k;
      }
    }
  }
}

TEST(DerivativePowerSeries, MatchesPointwise) {
  const auto g = MoebiusElement::from_parameters(Complex(0.25, 0.1), -0.2);
  const auto s = derivative_power_series(g, 0.7, 80);
  const Complex z(-0.2, 0.3);
  Complex sum = 0.0, zk = 1.0;
  for (const Complex& c : s) {
    sum += c * zk;
    zk *= z;
  }
  EXPECT_NEAR(std::abs(sum - derivative_power(g, z, 0.7)), 0.0, 1e-13);
}

}  // namespace
}  // namespace cdshift
