#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "twistorlab/errors.hpp"
#include "twistorlab/surface.hpp"

using namespace tlab;
using tlab::testing::kDraws;
using tlab::testing::kStar;
using tlab::testing::params_star;

TEST(Surface, PolynomialsMatchDefinitions) {
  const SurfaceParams p{0.5, -0.25, 0.75, 2.0, 3.0};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const double f = x * (x + 1) * (2 * x - 3), Q = 0.5 * x * x - 0.25 * x + 0.75;
    EXPECT_NEAR(f_at(p, x), f, 1e-12 * (1 + std::abs(f)));
    EXPECT_NEAR(evaluate(f_poly(p), x), f, 1e-12 * (1 + std::abs(f)));
    EXPECT_NEAR(Q_at(p, x), Q, 1e-12 * (1 + std::abs(Q)));
    // Q^2 - (Q^2 - f) = f
    const double id = Q_at(p, x) * Q_at(p, x) - evaluate(discriminant_poly(p), x);
    EXPECT_NEAR(id, f, 1e-12 * (1 + Q * Q + std::abs(f)));
  }
}

TEST(Surface, SearchReproducesReferenceParameters) {
  for (const auto& r : kDraws) {
    const SurfaceParams p = tlab::testing::searched(r);
    EXPECT_DOUBLE_EQ(p.q0, r.q0);
    EXPECT_NEAR(p.q1, r.q1, 1e-13);
    EXPECT_NEAR(p.q2, r.q2, 1e-13);
    EXPECT_EQ(p.a, r.a);
    EXPECT_EQ(p.b, r.b);
  }
}

TEST(Surface, SearchResultPassesValidateAndIndependentOracle) {
  for (const auto& r : kDraws) {
    const SurfaceParams p = tlab::testing::searched(r);
    const ValidationReport v = validate(p);
    EXPECT_TRUE(v.all_pass()) << v.condition_i.detail << " / " << v.condition_star.detail;
    const auto g = tlab::testing::grid_oracle(p, r.lambda0);
    EXPECT_TRUE(g.condition_i);
    EXPECT_TRUE(g.condition_star);
    EXPECT_EQ(v.condition_i.pass, g.condition_i);
    EXPECT_EQ(v.condition_star.pass, g.condition_star);
  }
}

TEST(Surface, ValidateIsDeterministic) {
  const ValidationReport a = validate(params_star()), b = validate(params_star());
  EXPECT_EQ(a.condition_i.pass, b.condition_i.pass);
  EXPECT_EQ(a.lambda0, b.lambda0);
  EXPECT_EQ(a.condition_star.detail, b.condition_star.detail);
}

TEST(Surface, ZeroQFailsConditionI) {
  const ValidationReport v = validate({0.0, 0.0, 0.0, 1.0, 1.0});
  EXPECT_FALSE(v.condition_i.pass);
  ASSERT_TRUE(v.condition_i.witness.has_value());
  EXPECT_LT(D_at({0.0, 0.0, 0.0, 1.0, 1.0}, *v.condition_i.witness), 0.0);
}

TEST(Surface, NegativeQOnI2FailsConditionStar) {
  // Same double root, negative q0: Q(λ0) = -√f(λ0) keeps (i) but Q < 0 on I2.
  SurfaceParams p = params_star();
  p.q0 = -p.q0;
  p.q1 = -p.q1;
  p.q2 = -p.q2;
  const ValidationReport v = validate(p);
  EXPECT_TRUE(v.condition_i.pass);
  EXPECT_FALSE(v.condition_star.pass);
  EXPECT_FALSE(tlab::testing::grid_oracle(p, 2.0).condition_star);
}

TEST(Surface, RejectsNonPositiveAB) {
  EXPECT_THROW(validate({1.0, 0.0, 0.0, -1.0, 1.0}), InvalidParameter);
  EXPECT_THROW(validate({1.0, 0.0, 0.0, 1.0, 0.0}), InvalidParameter);
}

TEST(Surface, Lambda0IsPolishedDoubleRoot) {
  const double l0 = lambda0(params_star());
  EXPECT_NEAR(l0, 2.0, 1e-8);
  EXPECT_GT(f_at(params_star(), l0), 0.0);
  EXPECT_GT(l0, params_star().b / params_star().a);
  EXPECT_LT(std::abs(D_at(params_star(), l0)), 1e-10);
  EXPECT_LT(std::abs(evaluate(derivative(discriminant_poly(params_star())), l0)), 1e-10);
}

TEST(Surface, Lambda0OutsideI4GetsRemapHint) {
  // Double root in I2 instead of I4.
  const SurfaceParams p = params_with_double_root(1, 1, -0.5, 4.0);
  const ValidationReport v = validate(p);
  EXPECT_TRUE(v.condition_i.pass) << v.condition_i.detail;
  EXPECT_FALSE(v.lambda0_in_I4.pass);
  EXPECT_NE(v.lambda0_in_I4.detail.find("y0"), std::string::npos) << v.lambda0_in_I4.detail;
  EXPECT_THROW(intervals(p), PreconditionError);
  EXPECT_THROW(lambda0({0.0, 0.0, 0.0, 1.0, 1.0}), PreconditionError);
}

TEST(Surface, IntervalsForStar) {
  const IntervalPartition ip = intervals(params_star());
  EXPECT_TRUE(std::isinf(ip.I1.lo));
  EXPECT_EQ(ip.I1.hi, -1.0);
  EXPECT_EQ(ip.I2.lo, -1.0);
  EXPECT_EQ(ip.I2.hi, 0.0);
  EXPECT_EQ(ip.I3.hi, 1.0);
  EXPECT_EQ(ip.I4minus.lo, 1.0);
  EXPECT_NEAR(ip.I4minus.hi, 2.0, 1e-8);
  EXPECT_NEAR(ip.I4plus.lo, 2.0, 1e-8);
  EXPECT_TRUE(std::isinf(ip.I4plus.hi));
  // sign pattern of f
  for (double x : {-5.0, -1.5}) EXPECT_LT(f_at(params_star(), x), 0.0);
  for (double x : {-0.5, 3.0, 1.5}) EXPECT_GT(f_at(params_star(), x), 0.0);
  EXPECT_LT(f_at(params_star(), 0.5), 0.0);
}

TEST(Surface, SingularLocusOfValidSet) {
  const auto s = singular_locus(params_star());
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].location, SingularLocation::Pinf);
  EXPECT_EQ(s[0].type, SingularType::EllipticE7);
  EXPECT_EQ(s[1].location, SingularLocation::PinfBar);
  EXPECT_EQ(s[1].type, SingularType::EllipticE7);
  EXPECT_EQ(s[2].location, SingularLocation::APoint);
  EXPECT_EQ(s[2].type, SingularType::OrdinaryDoublePoint);
  EXPECT_EQ(s[2].multiplicity, 2);
  EXPECT_NEAR(*s[2].lambda, 2.0, 1e-7);
}

TEST(Surface, TripleRootIsNotAnOrdinaryDoublePoint) {
  // Choose q0 so that Q^2 - f also has vanishing second derivative at r:
  // with s = √f(r), t = f'(r)/(2s), q0 = (f''(r)/2 - t^2) / (2s).
  const double a = 1, b = 1, r = 2;
  const double f = r * (r + 1) * (a * r - b), fp = 3 * a * r * r + 2 * (a - b) * r - b,
               fpp = 6 * a * r + 2 * (a - b);
  const double s = std::sqrt(f), t = fp / (2 * s);
  const double q0 = (fpp / 2 - t * t) / (2 * s);
  const SurfaceParams p = params_with_double_root(a, b, r, q0);
  const auto sl = singular_locus(p);
  ASSERT_EQ(sl.size(), 3u);
  EXPECT_EQ(sl[2].multiplicity, 3);
  EXPECT_EQ(sl[2].type, SingularType::NonODP);
  EXPECT_EQ(sl[2].normal_form, "w2*w3 + w1^3");
  EXPECT_FALSE(validate(p).condition_i.pass);
}

TEST(Surface, GridCertificateAgreesWithOracle) {
  // A sweep across q0 crosses from failing to passing; both certificates must
  // agree everywhere.
  for (double q0 = 0.05; q0 < 3.0; q0 += 0.05) {
    const SurfaceParams p = params_with_double_root(1, 1, 2, q0);
    const auto lib = grid_certify(p, 2.0);
    const auto orc = tlab::testing::grid_oracle(p, 2.0);
    EXPECT_EQ(lib.condition_i, orc.condition_i) << "q0 = " << q0;
    EXPECT_EQ(lib.condition_star, orc.condition_star) << "q0 = " << q0;
    EXPECT_EQ(validate(p).all_pass(), orc.condition_i && orc.condition_star) << "q0 = " << q0;
  }
}

TEST(Surface, SearchErrors) {
  SearchConfig empty;
  empty.q0_min = 2.0;
  empty.q0_max = 1.0;
  EXPECT_THROW(find_valid_params(empty), NotFound);
  SearchConfig bad;
  bad.lambda0 = 0.5;
  EXPECT_THROW(find_valid_params(bad), InvalidParameter);
  SearchConfig tiny;  // q0 far too small everywhere in the range
  tiny.q0_min = 0.01;
  tiny.q0_max = 0.02;
  tiny.samples = 4;
  try {
    find_valid_params(tiny);
    FAIL() << "expected NotFound";
  } catch (const NotFound& e) {
    EXPECT_NE(std::string(e.what()).find("near-miss"), std::string::npos);
  }
}
