#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "twistorlab/poly.hpp"

using namespace tlab;

TEST(Polynomial, TrimsTrailingZerosAndEvaluates) {
  const RealPolynomial p{1.0, -3.0, 2.0, 0.0, 0.0};
  EXPECT_EQ(p.degree(), 2);
  EXPECT_DOUBLE_EQ(p(2.0), 3.0);
  EXPECT_DOUBLE_EQ(evaluate(p, -1.0), 6.0);
  EXPECT_EQ(RealPolynomial{}.degree(), -1);
  EXPECT_TRUE((RealPolynomial{0.0, 0.0}).is_zero());
}

TEST(Polynomial, ArithmeticAndDerivative) {
  const RealPolynomial a{1.0, 1.0};   // 1 + x
  const RealPolynomial b{-1.0, 1.0};  // -1 + x
  const RealPolynomial prod = a * b;
  ASSERT_EQ(prod.degree(), 2);
  EXPECT_DOUBLE_EQ(prod.coeff(0), -1.0);
  EXPECT_DOUBLE_EQ(prod.coeff(1), 0.0);
  EXPECT_DOUBLE_EQ(prod.coeff(2), 1.0);
  EXPECT_TRUE((a - a).is_zero());
  const RealPolynomial d2 = derivative(RealPolynomial{0.0, 0.0, 0.0, 1.0}, 2);  // (x^3)'' = 6x
  ASSERT_EQ(d2.degree(), 1);
  EXPECT_DOUBLE_EQ(d2.coeff(1), 6.0);
  EXPECT_TRUE(derivative(a, 3).is_zero());
}

TEST(Polynomial, ChoppedDropsNegligibleLeadingTerms) {
  const RealPolynomial p{1.0, 2.0, 1e-15};
  EXPECT_EQ(p.chopped(1e-12).degree(), 1);
  EXPECT_EQ(p.chopped(1e-16).degree(), 2);
}

TEST(Roots, SimpleRootsOfCubic) {
  const RealPolynomial p{6.0, -11.0, 6.0, -1.0};  // -(x-1)(x-2)(x-3)
  const auto r = real_roots_with_multiplicity(p);
  ASSERT_EQ(r.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r[i].value.real(), i + 1.0, 1e-12);
    EXPECT_EQ(r[i].multiplicity, 1);
  }
}

TEST(Roots, PlantedMultiplicitiesAreRecovered) {
  // (x - 0.7)^m (x + 2) for m = 2, 3, 4
  for (int m = 2; m <= 4; ++m) {
    RealPolynomial p{2.0, 1.0};
    for (int k = 0; k < m; ++k) p *= RealPolynomial{-0.7, 1.0};
    const auto r = real_roots_with_multiplicity(p);
    ASSERT_EQ(r.size(), 2u) << "m = " << m;
    EXPECT_NEAR(r[0].value.real(), -2.0, 1e-9);
    EXPECT_EQ(r[0].multiplicity, 1);
    EXPECT_NEAR(r[1].value.real(), 0.7, 1e-6);
    EXPECT_EQ(r[1].multiplicity, m);
  }
}

TEST(Roots, ClustersSumToDegree) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> c(6);
    for (double& x : c) x = u(rng);
    const RealPolynomial p(c);
    int total = 0;
    for (const auto& rc : root_clusters(p)) total += rc.multiplicity;
    EXPECT_EQ(total, p.degree());
  }
}

TEST(Roots, ComplexDoubleRootPair) {
  // (x^2 + 1)^2 has double roots at ±i.
  const RealPolynomial p{1.0, 0.0, 2.0, 0.0, 1.0};
  const auto rc = root_clusters(p);
  ASSERT_EQ(rc.size(), 2u);
  for (const auto& c : rc) {
    EXPECT_EQ(c.multiplicity, 2);
    EXPECT_NEAR(std::abs(c.value.imag()), 1.0, 1e-7);
  }
  EXPECT_TRUE(real_roots_with_multiplicity(p).empty());
}

TEST(TwoDoubleRoots, BothBranchesOfTheCriterion) {
  // (x-1)^2 (x-2)^2 = x^4 - 6x^3 + 13x^2 - 12x + 4
  EXPECT_TRUE(has_two_double_roots(-6.0, 13.0, -12.0, 4.0));
  // (x^2 - 1)^2: a1 = 0 branch
  EXPECT_TRUE(has_two_double_roots(0.0, -2.0, 0.0, 1.0));
  EXPECT_FALSE(has_two_double_roots(0.0, -2.0, 0.0, 1.1));
  EXPECT_FALSE(has_two_double_roots(-6.0, 13.0, -12.0, 4.5));
  EXPECT_TRUE(has_two_double_roots(0.0, 0.0, 0.0, 0.0));  // x^4
}

// Randomised agreement with the companion-matrix oracle on planted and
// generic quartics.
TEST(TwoDoubleRoots, AgreesWithCompanionOracle) {
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    std::array<cplx, 4> a;
    if (i % 2 == 0) {
      const cplx r(u(rng), u(rng)), s(u(rng), u(rng));
      // (x-r)^2 (x-s)^2 = (x^2 - (r+s) x + rs)^2
      const cplx p = -(r + s), q = r * s;
      a = {2.0 * p, p * p + 2.0 * q, 2.0 * p * q, q * q};
    } else {
      for (cplx& x : a) x = cplx(u(rng), u(rng));
    }
    const bool lib = has_two_double_roots(a[0], a[1], a[2], a[3], 1e-9);
    const bool oracle = tlab::testing::quartic_has_two_double_roots_oracle(a);
    if (lib != oracle) ++disagreements;
    if (i % 2 == 0) EXPECT_TRUE(lib) << "planted quartic " << i;
  }
  EXPECT_EQ(disagreements, 0);
}
