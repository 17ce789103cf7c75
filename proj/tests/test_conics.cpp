#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"
#include "twistorlab/conics.hpp"
#include "twistorlab/errors.hpp"
#include "twistorlab/resolution.hpp"

using namespace tlab;
using tlab::testing::params_star;

namespace {

constexpr double kPi = std::numbers::pi;

cplx full_det(const ConicCoeffs& c) { return determinant(c.m) * std::pow(c.scale, 3); }

// λ samples inside each interval of the star parameters (b/a = 1, λ0 = 2).
const double kI1[] = {-20.0, -3.0, -1.5, -1.01};
const double kI2[] = {-0.9, -0.5, -0.2, -0.05};
const double kI3[] = {0.05, 0.3, 0.7, 0.95};
const double kI4[] = {1.05, 1.5, 1.9, 2.1, 3.0, 10.0};

}  // namespace

TEST(Conics, GenericDeterminantClosedForm) {
  for (double l : kI4)
    for (int k = 0; k < 8; ++k) {
      const ConicCoeffs c = generic_conic(params_star(), l, 2 * kPi * k / 8);
      const double closed = generic_det_closed_form(params_star(), l);
      EXPECT_NEAR(full_det(c).real(), closed, 1e-9 * std::abs(closed));
      EXPECT_NEAR(full_det(c).imag(), 0.0, 1e-9 * std::abs(closed));
      const double D = D_at(params_star(), l);
      EXPECT_NEAR(closed, -2 * D * D, 1e-12 * D * D);
    }
}

TEST(Conics, SpecialDeterminantClosedForm) {
  for (double l : kI1)
    for (int k = 0; k < 8; ++k) {
      const ConicCoeffs c = special_conic(params_star(), l, 2 * kPi * k / 8);
      const double closed = special_det_closed_form(params_star(), l);
      EXPECT_NEAR(std::abs(full_det(c) - closed), 0.0, 1e-9 * std::abs(closed));
    }
}

TEST(Conics, FamiliesAreReal) {
  for (double l : kI4) EXPECT_TRUE(is_real(generic_conic(params_star(), l, 0.7)));
  for (double l : kI3) EXPECT_TRUE(is_real(special_conic(params_star(), l, 1.9)));
  EXPECT_TRUE(is_real(orbit_conic(-0.4)));
  const ConicCoeffs nonreal = make_conic({{{1.0, 0.0, 0.0}, {0.0, cplx(0, 1), 0.5}, {0.0, 0.5, 1.0}}});
  EXPECT_FALSE(is_real(nonreal));
}

TEST(Conics, DomainErrorsNameTheConstraint) {
  try {
    generic_conic(params_star(), -2.0, 0.0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.constraint(), "f(lambda) > 0");
  }
  try {
    special_conic(params_star(), -0.5, 0.0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.constraint(), "f(lambda) < 0");
  }
  try {
    generic_conic(params_star(), lambda0(params_star()), 0.0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.constraint(), "lambda != lambda0");
  }
  EXPECT_THROW(orbit_conic(0.0), DegenerateError);
  EXPECT_THROW(make_conic({{{1.0, 2.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}), InvalidInput);
}

TEST(Tangency, GenericConicsTouchAtTwoDoublePointsPerBranch) {
  for (double l : kI4)
    for (int k = 0; k < 24; ++k) {
      const TangencyReport t = verify_touching(generic_conic(params_star(), l, 2 * kPi * k / 24),
                                               params_star(), l);
      EXPECT_EQ(t.type, TangencyType::Generic) << "lambda " << l << " k " << k;
      EXPECT_EQ(t.contact_pinf, 0);
      for (const BranchRecord& b : t.branches) {
        EXPECT_EQ(b.restriction.degree(), 4);
        ASSERT_TRUE(b.two_double_roots.has_value());
        EXPECT_TRUE(*b.two_double_roots);
        EXPECT_LT(b.residual, 1e-8);
        for (const Contact& c : b.contacts) EXPECT_EQ(c.multiplicity, 2);
      }
    }
}

TEST(Tangency, SpecialConicsHaveContactTwoAtTheFixedPoints) {
  for (const auto& ls : {kI1, kI3})
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 24; ++k) {
        const double l = ls[i];
        const TangencyReport t = verify_touching(
            special_conic(params_star(), l, 2 * kPi * k / 24), params_star(), l);
        EXPECT_EQ(t.type, TangencyType::Special) << "lambda " << l;
        EXPECT_EQ(t.contact_pinf, 2);
        EXPECT_EQ(t.contact_pinfbar, 2);
        for (const BranchRecord& b : t.branches) {
          EXPECT_LT(b.residual, 1e-8);
          for (const Contact& c : b.contacts)
            if (!c.at_pinf && !c.at_pinfbar) EXPECT_EQ(c.multiplicity, 2);
        }
      }
}

TEST(Tangency, OrbitConicsAndContainment) {
  for (double l : kI2) {
    const auto [gm, gp] = branch_factors(params_star(), l);
    const TangencyReport t = verify_touching(orbit_conic(-0.5 * gm.real()), params_star(), l);
    EXPECT_EQ(t.type, TangencyType::Orbit);
    EXPECT_EQ(t.contact_pinf, 4);
    // α = -g makes the conic one of the branch curves.
    EXPECT_EQ(verify_touching(orbit_conic(-gm.real()), params_star(), l).type,
              TangencyType::ContainedInB);
    EXPECT_EQ(verify_touching(orbit_conic(-gp.real()), params_star(), l).type,
              TangencyType::ContainedInB);
  }
}

TEST(Tangency, ArbitraryConicIsNotTouching) {
  const ConicCoeffs c = make_conic({{{1.0, 0.3, 0.2}, {0.3, 2.0, 0.7}, {0.2, 0.7, -1.0}}});
  EXPECT_EQ(verify_touching(c, params_star(), 3.0).type, TangencyType::NotTouching);
}

TEST(Tangency, ReducibleConicIsRejected) {
  const ConicCoeffs c = make_conic({{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}});
  EXPECT_THROW(verify_touching(c, params_star(), 3.0), DegenerateError);
}

TEST(RealPoints, GenericAndSpecialConicsHaveNone) {
  for (double l : kI4)
    for (int k = 0; k < 24; ++k) {
      const ConicCoeffs c = generic_conic(params_star(), l, 2 * kPi * k / 24);
      const double m = min_real_form(c), ex = min_real_form_exact(c);
      EXPECT_GT(m, 0.0);
      EXPECT_NEAR(m, ex, 1e-6);
      EXPECT_GE(ex, generic_real_form_bound(params_star(), l) - 1e-12);
    }
  for (const auto& ls : {kI1, kI3})
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 24; ++k) {
        const ConicCoeffs c = special_conic(params_star(), ls[i], 2 * kPi * k / 24);
        EXPECT_GT(min_real_form(c), 0.0);
        EXPECT_GE(min_real_form_exact(c), special_real_form_bound(params_star(), ls[i]) - 1e-12);
      }
}

TEST(RealPoints, OrbitCertificateFlipsAtZero) {
  for (double alpha : {-10.0, -1.0, -1e-3, -1e-9}) EXPECT_GT(min_real_form(orbit_conic(alpha)), 0.0);
  for (double alpha : {1e-9, 1e-3, 1.0, 10.0}) EXPECT_LT(min_real_form(orbit_conic(alpha)), 0.0);
}

TEST(RealPoints, RealFormNeedsARealConic) {
  const ConicCoeffs nonreal = make_conic({{{1.0, 0.0, 0.0}, {0.0, cplx(0, 1), 0.5}, {0.0, 0.5, 1.0}}});
  EXPECT_THROW(real_form_matrix(nonreal), PreconditionError);
}

TEST(LineAtInfinity, RadiiAreReciprocal) {
  for (double l : kI4) {
    const auto [big, small] = linf_radii(params_star(), l);
    EXPECT_GT(big, 1.0);
    EXPECT_NEAR(big * small, 1.0, 1e-12);
    EXPECT_NEAR(big, h_function(HKind::H0, {}, params_star(), l), 1e-12 * big);
    const auto [p1, p2] = linf_points(params_star(), l, 0.4);
    const double r1 = std::abs(p1), r2 = std::abs(p2);
    EXPECT_NEAR(std::max(r1, r2), big, 1e-12 * big);
    EXPECT_NEAR(std::min(r1, r2), small, 1e-12);
  }
}

TEST(Branches, FactorsMultiplyToQSquaredMinusF) {
  for (double l : {-3.0, -0.5, 0.5, 3.0}) {
    const auto [gm, gp] = branch_factors(params_star(), l);
    EXPECT_NEAR(std::abs(gm * gp - D_at(params_star(), l)), 0.0, 1e-12 * (1 + D_at(params_star(), l)));
    EXPECT_NEAR(std::abs(gm + gp - 2 * Q_at(params_star(), l)), 0.0, 1e-12);
  }
  EXPECT_THROW(branch_factors(params_star(), lambda0(params_star())), DegenerateError);
}
