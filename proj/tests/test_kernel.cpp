#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "cdshift/kernel.hpp"
#include "support.hpp"

namespace cdshift {
namespace {

using testing::Rng;

BundleSpec spec_121(double eta, double a, double b, double c) {
  return spec_from_121(eta, Canonical121{a, b, c});
}

TEST(GammaApply, DiagonalTermPassesThrough) {
  Rng rng(1);
  const auto s = testing::make_spec(1.0, {2, 1}, rng);
  const auto f = testing::random_grade_polynomial(rng, s.multiplicities, 1, 4, 6);
  const auto out = gamma_apply(s, std::nullopt, f);
  EXPECT_LT(max_coeff_diff(out, f, 6), 1e-15);
  EXPECT_TRUE(out.is_polynomial());
}

TEST(GammaApply, OneStepExample) {
  const auto s = testing::scalar_spec(1.0, {1.0});
  const auto f = GradedSeries::monomial({1, 1}, 3, 0, 1, CVector::Ones(1));
  const auto out = gamma_apply(s, std::nullopt, f);
  EXPECT_NEAR(std::abs(out.component(0, 1)(0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.component(1, 0)(0) - 1.0), 0.0, 1e-15);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(out.component(n, 1)(0), Complex(0.0));
}

TEST(GammaApply, NormalizerFactorScalesSource) {
  const auto s = testing::scalar_spec(1.0, {1.0});
  BlockDiagonal n = BlockDiagonal::identity({1, 1});
  n.blocks[0](0, 0) = 3.0;
  const auto f = GradedSeries::monomial({1, 1}, 2, 0, 1, CVector::Ones(1));
  const auto out = gamma_apply(s, n, f);
  EXPECT_NEAR(std::abs(out.component(0, 1)(0) - 1.5), 0.0, 1e-15);
}

TEST(GammaApply, RejectsVanishingDenominator) {
  const auto f = GradedSeries({1, 1}, 2);
  EXPECT_THROW(gamma_apply(testing::scalar_spec(0.0, {1.0}), std::nullopt, f), InputError);
  const auto g = GradedSeries({1, 1, 1}, 2);
  EXPECT_THROW(gamma_apply(testing::scalar_spec(-0.5, {1.0, 1.0}), std::nullopt, g), InputError);
}

TEST(GammaApply, IntertwinesMultiplierAction) {
  Rng rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = testing::random_spec(rng, 3, 3, testing::uniform(rng, 0.3, 3.0));
    const auto g = testing::random_near_identity(rng, 0.3);
    const int j = std::uniform_int_distribution<int>(0, s.m())(rng);
    const int n = 16;
    const auto f = testing::random_grade_polynomial(rng, s.multiplicities, j, 6, n);
    const auto lhs = gamma_apply(s, std::nullopt, series_transform(f, g, s.eta + j, n));
    const auto rhs = multiplier_action(s, g, gamma_apply(s, std::nullopt, f), n);
    ASSERT_EQ(lhs.exact_through(), n - s.m());
    EXPECT_LT(max_coeff_diff(lhs, rhs, lhs.exact_through()), 1e-8);
  }
}

TEST(SolveNormalizer, Examples) {
  const auto p0 = solve_normalizer(testing::scalar_spec(1.0, {}));
  ASSERT_EQ(p0.products.size(), 1u);
  EXPECT_EQ(p0.products[0](0, 0), Complex(1.0));
  const auto p1 = solve_normalizer(testing::scalar_spec(1.0, {1.0}));
  EXPECT_NEAR(std::abs(p1.products[1](0, 0) - 0.5), 0.0, 1e-15);
}

TEST(SolveNormalizer, OneTwoOneClosedForm) {
  for (double eta : {0.7, 1.0, 2.5}) {
    for (double a : {0.3, 1.0}) {
      const double b = 0.8, c = 1.1;
      const auto p = solve_normalizer(spec_121(eta, a, b, c));
      const CMatrix p1 = p.products[1];
      EXPECT_NEAR(std::abs(p1(0, 0) - (1.0 - a * a / (2 * eta))), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(p1(1, 1) - 1.0), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(p1(0, 1)), 0.0, 1e-14);
      const double p2 = 1.0 - (b * b + c * c) / (2 * eta + 2) +
                        a * a * b * b / (2 * (2 * eta + 1) * (2 * eta + 2));
      EXPECT_NEAR(std::abs(p.products[2](0, 0) - p2), 0.0, 1e-14);
    }
  }
}

TEST(SolveNormalizer, RejectsNonpositiveEta) {
  EXPECT_THROW(solve_normalizer(testing::scalar_spec(0.0, {1.0})), InputError);
  EXPECT_THROW(closed_form_normalizer(testing::scalar_spec(-1.0, {1.0})), InputError);
}

TEST(ClosedFormNormalizer, LowOrderTerms) {
  Rng rng(3);
  const auto s = testing::make_spec(1.7, {2, 3}, rng);
  const auto p = closed_form_normalizer(s);
  EXPECT_LT(max_abs(p.products[0] - CMatrix::Identity(2, 2)), 1e-15);
  const CMatrix expected = CMatrix::Identity(3, 3) - s.blocks[0] * s.blocks[0].adjoint() / (2 * 1.7);
  EXPECT_LT(max_abs(p.products[1] - expected), 1e-14);
}

TEST(ClosedFormNormalizer, MatchesRecursion) {
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto s = testing::random_spec(rng, 3, 3, testing::uniform(rng, 0.1, 5.0));
    const auto a = solve_normalizer(s);
    const auto b = closed_form_normalizer(s);
    for (int j = 0; j <= s.m(); ++j) {
      EXPECT_LT(max_abs(a.products[j] - b.products[j]), 1e-10);
    }
  }
}

TEST(NormalizerSolution, HermitianWithIdentityHead) {
  Rng rng(5);
  const auto s = testing::random_spec(rng, 3, 3, 1.0);
  const auto p = solve_normalizer(s);
  EXPECT_EQ(max_abs(p.products[0] - CMatrix::Identity(s.multiplicities[0], s.multiplicities[0])), 0.0);
  for (const auto& b : p.products) EXPECT_LT(max_abs(b - b.adjoint()), 1e-12);
  EXPECT_EQ(p.positive.size(), p.products.size());
}

TEST(KernelExists, Examples) {
  EXPECT_TRUE(kernel_exists(testing::scalar_spec(1.0, {1.0})).exists);
  const auto low = kernel_exists(testing::scalar_spec(0.4, {1.0}));
  EXPECT_FALSE(low.exists);
  EXPECT_NE(low.reason.find("positive definite"), std::string::npos);
  const auto neg = kernel_exists(testing::scalar_spec(-1.0, {1.0}));
  EXPECT_FALSE(neg.exists);
  EXPECT_EQ(neg.reason, "eta must be positive");
  EXPECT_FALSE(kernel_exists(testing::scalar_spec(0.0, {})).exists);
}

TEST(KernelExists, MonotoneInEta) {
  Rng rng(6);
  for (int k = 0; k < 30; ++k) {
    const auto base = testing::random_spec(rng, 3, 2, 1.0, 1.5);
    bool seen = false;
    for (double eta = 0.1; eta < 8.0; eta += 0.1) {
      auto s = base;
      s.eta = eta;
      const bool ok = kernel_exists(s).exists;
      if (seen) EXPECT_TRUE(ok) << "eta=" << eta;
      seen = seen || ok;
    }
  }
}

TEST(EtaThreshold, ScalarOne) {
  EXPECT_NEAR(eta_threshold(testing::scalar_spec(1.0, {1.0})), 0.5, 1e-6);
}

TEST(EtaThreshold, MatrixNormFormula) {
  BundleSpec s;
  s.eta = 1.0;
  s.multiplicities = {2, 2};
  s.blocks = {CMatrix(CVector(Eigen::Vector2cd(2.0, 1.0)).asDiagonal())};
  EXPECT_NEAR(eta_threshold(s), 2.0, 1e-6);
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    auto t = testing::make_spec(1.0, {3, 2}, rng);
    const double expected = 0.5 * (t.blocks[0] * t.blocks[0].adjoint()).operatorNorm();
    EXPECT_NEAR(eta_threshold(t), expected, 1e-6);
  }
}

TEST(EtaThreshold, OneTwoOneFlipsAcross) {
  auto s = spec_121(1.0, 1.0, 1.0, 1.0);
  const double tol = 1e-6;
  const double t = eta_threshold(s, tol);
  s.eta = t - 2 * tol;
  EXPECT_FALSE(kernel_exists(s).exists);
  s.eta = t + 2 * tol;
  EXPECT_TRUE(kernel_exists(s).exists);
}

TEST(EtaThreshold, TrivialBlocksAndBadTolerance) {
  EXPECT_EQ(eta_threshold(testing::scalar_spec(1.0, {0.0})), 0.0);
  EXPECT_THROW(eta_threshold(testing::scalar_spec(1.0, {1.0}), 0.0), InputError);
}

TEST(KernelAtOrigin, Examples) {
  const auto s = testing::scalar_spec(1.0, {1.0});
  const CMatrix k = kernel_at_origin(s, NormalizerSolution::identity(s.multiplicities));
  EXPECT_NEAR(std::abs(k(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k(1, 1) - 1.5), 0.0, 1e-15);
  EXPECT_EQ(k(1, 0), Complex(0.0));
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto t = testing::random_spec(rng, 3, 3, 2.0);
    EXPECT_LT(max_abs(kernel_at_origin(t, solve_normalizer(t)) - CMatrix::Identity(t.dim(), t.dim())),
              1e-12);
  }
}

TEST(ScalarKernelDerivative, FiniteDifferences) {
  const double h = 1e-4;
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex z = testing::random_point(rng, 0.6);
    const Complex wbar = testing::random_point(rng, 0.6);
    const double alpha = testing::uniform(rng, 0.5, 4.0);
    for (int a = 1; a <= 3; ++a) {
      for (int b = 0; b <= 3; ++b) {
        const Complex dz = (scalar_kernel_derivative(a - 1, b, alpha, z + h, wbar) -
                            scalar_kernel_derivative(a - 1, b, alpha, z - h, wbar)) /
                           (2 * h);
        const Complex exact = scalar_kernel_derivative(a, b, alpha, z, wbar);
        EXPECT_LT(std::abs(dz - exact), 1e-5 * std::abs(exact));
        const Complex dw = (scalar_kernel_derivative(b, a - 1, alpha, z, wbar + h) -
                            scalar_kernel_derivative(b, a - 1, alpha, z, wbar - h)) /
                           (2 * h);
        const Complex exact_w = scalar_kernel_derivative(b, a, alpha, z, wbar);
        EXPECT_LT(std::abs(dw - exact_w), 1e-5 * std::abs(exact_w));
      }
    }
  }
}

TEST(KernelAt, ScalarClosedForm) {
  const auto s = testing::scalar_spec(1.3, {});
  const auto p = solve_normalizer(s);
  const Complex z(0.3, 0.1), w(0.2, -0.4);
  const Complex expected = std::pow(1.0 - z * std::conj(w), -2.6);
  EXPECT_NEAR(std::abs(kernel_at(s, p, z, w)(0, 0) - expected), 0.0, 1e-14);
}

TEST(KernelAt, OriginAndAdjointSymmetry) {
  Rng rng(10);
  for (int k = 0; k < 20; ++k) {
    const auto s = testing::random_spec(rng, 3, 3, testing::uniform(rng, 0.3, 3.0));
    const auto p = solve_normalizer(s);
    EXPECT_LT(max_abs(kernel_at(s, p, 0.0, 0.0) - kernel_at_origin(s, p)), 1e-15);
    const Complex z = testing::random_point(rng, 0.8), w = testing::random_point(rng, 0.8);
    EXPECT_LT(max_abs(kernel_at(s, p, w, z) - kernel_at(s, p, z, w).adjoint()), 1e-12);
  }
}

TEST(KernelAt, RejectsPointsOutsideDisc) {
  const auto s = testing::scalar_spec(1.0, {1.0});
  const auto p = solve_normalizer(s);
  EXPECT_THROW(kernel_at(s, p, 1.0, 0.0), InputError);
  EXPECT_THROW(kernel_at(s, p, 0.0, Complex(0.0, -1.2)), InputError);
}

TEST(KernelInvariance, IdentityAndRotation) {
  const auto s = testing::scalar_spec(0.8, {});
  const auto p = solve_normalizer(s);
  const Complex z(0.4, 0.2), w(-0.3, 0.1);
  EXPECT_LT(kernel_invariance_residual(s, p, MoebiusElement::identity(), z, w), 1e-15);
  EXPECT_LT(kernel_invariance_residual(s, p, MoebiusElement::rotation(1.3), z, w), 1e-12);
}

TEST(KernelInvariance, RandomSpecsWithKernel) {
  Rng rng(11);
  int checked = 0;
  for (int k = 0; k < 30; ++k) {
    const auto s = testing::random_spec(rng, 3, 3, testing::uniform(rng, 0.3, 3.0));
    const auto verdict = kernel_exists(s);
    if (!verdict.exists) continue;
    ++checked;
    for (int i = 0; i < 10; ++i) {
      const auto g = testing::random_near_identity(rng, 0.3);
      const Complex z = testing::random_point(rng, 0.5), w = testing::random_point(rng, 0.5);
      EXPECT_LE(kernel_invariance_residual(s, *verdict.witness, g, z, w), 1e-8);
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(TransportLaw, MatchesKernelOnDiagonal) {
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto s = testing::shrink_until_kernel(testing::random_spec(rng, 3, 3, 1.0));
    const auto p = solve_normalizer(s);
    for (int i = 0; i < 10; ++i) {
      EXPECT_LE(transport_residual(s, p, testing::random_point(rng, 0.6)), 1e-9);
    }
  }
}

TEST(HermitianStructure, OriginAndScalar) {
  const auto s = testing::scalar_spec(1.0, {1.0});
  const auto p = solve_normalizer(s);
  EXPECT_LT(max_abs(hermitian_structure_at(s, p, 0.0) - CMatrix::Identity(2, 2)), 1e-14);
  const auto sc = testing::scalar_spec(1.4, {});
  const Complex z(0.5, -0.2);
  EXPECT_NEAR(std::abs(hermitian_structure_at(sc, solve_normalizer(sc), z)(0, 0) -
                       std::pow(1.0 - std::norm(z), 2.8)),
              0.0, 1e-14);
}

TEST(HermitianStructure, TransformationLaw) {
  Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    const auto s = testing::shrink_until_kernel(testing::random_spec(rng, 2, 2, 1.5));
    const auto p = solve_normalizer(s);
    for (int i = 0; i < 5; ++i) {
      const auto g = testing::random_near_identity(rng, 0.3);
      EXPECT_LE(hermitian_law_residual(s, p, g, testing::random_point(rng, 0.5)), 1e-8);
    }
  }
}

TEST(HermitianStructure, FailsForIndefiniteProducts) {
  const auto s = testing::scalar_spec(1.0, {1.0});
  NormalizerSolution p = NormalizerSolution::identity(s.multiplicities);
  p.products[1](0, 0) = -1.0;
  p.classify();
  // K(0,0) = diag(1, 1/2 - 1)
  EXPECT_THROW(hermitian_structure_at(s, p, 0.0), NumericalError);
}

TEST(MercerPositivity, GramMatricesArePositive) {
  Rng rng(14);
  for (int k = 0; k < 20; ++k) {
    const auto s = testing::shrink_until_kernel(testing::random_spec(rng, 3, 2, 1.0));
    const auto p = solve_normalizer(s);
    const int d = s.dim();
    std::vector<Complex> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(testing::random_point(rng, 0.9));
    CMatrix gram(4 * d, 4 * d);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) gram.block(i * d, j * d, d, d) = kernel_at(s, p, pts[i], pts[j]);
    }
    for (int t = 0; t < 10; ++t) {
      const CVector u = testing::random_matrix(rng, 4 * d, 1);
      EXPECT_GE(std::real(u.dot(gram * u)), -1e-9);
    }
  }
}

TEST(LineBundleTwist, PreservesOriginAndInvariance) {
  Rng rng(15);
  const auto s = spec_121(2.0, 1.0, 1.0, 1.0);
  const auto p = solve_normalizer(s);
  const LineBundleTwist zero(s, p, 0.0);
  const Complex z(0.3, 0.2), w(-0.1, 0.4);
  EXPECT_LT(max_abs(zero(z, w) - kernel_at(s, p, z, w)), 1e-15);
  for (double eps : {0.25, 1.0}) {
    const LineBundleTwist twist(s, p, eps);
    EXPECT_LT(max_abs(twist(0.0, 0.0) - CMatrix::Identity(4, 4)), 1e-14);
    EXPECT_DOUBLE_EQ(twist.twisted_spec().eta, 2.0 + eps);
    for (int i = 0; i < 10; ++i) {
      const auto g = testing::random_near_identity(rng, 0.3);
      EXPECT_LE(invariance_residual(twist.twisted_spec(), twist.as_function(), g,
                                    testing::random_point(rng, 0.5), testing::random_point(rng, 0.5)),
                1e-8);
    }
  }
  EXPECT_THROW(LineBundleTwist(s, p, -0.1), InputError);
}

TEST(OneTwoOneRegion, RecursionMatchesJointCondition) {
  for (double eta : {0.5, 1.0, 2.0}) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        for (int k = 0; k < 20; ++k) {
          const double a = 0.05 + 0.16 * i, b = 0.05 + 0.16 * j, c = 0.05 + 0.16 * k;
          const double first = 2 * eta - a * a;
          const double second = 2 * eta + 2 - (b * b * (1 - a * a / (2 * (2 * eta + 1))) + c * c);
          if (std::abs(first) < 1e-6 || std::abs(second) < 1e-6) continue;
          const bool joint = first > 0 && second > 0;
          const bool recursion = kernel_exists(spec_121(eta, a, b, c)).exists;
          EXPECT_EQ(recursion, joint) << "eta=" << eta << " a=" << a << " b=" << b << " c=" << c;
          if (recursion) {
            EXPECT_LT(a * a, 2 * eta);
            EXPECT_LT(c * c, 2 * eta + 2);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace cdshift
