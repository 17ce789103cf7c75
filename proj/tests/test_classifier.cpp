#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"
#include "twistorlab/classifier.hpp"
#include "twistorlab/errors.hpp"

using namespace tlab;
using tlab::testing::kDraws;
using tlab::testing::params_star;
using LF = LinearForm;

namespace {

const ResolutionChoice kFirst{LF::X1, LF::X0plusX1, LF::X0};
const ResolutionChoice kSecond{LF::AX0minusBX1, LF::X0, LF::X0plusX1};

const EliminationResult& star_result() {
  static const EliminationResult r = eliminate(params_star());
  return r;
}

const EliminationTrace& trace_of(const EliminationResult& r, const ResolutionChoice& c, Hypothesis h) {
  for (const auto& t : r.traces)
    if (t.choice == c && t.hypothesis == h) return t;
  throw std::runtime_error("missing trace");
}

bool has_reason(const EliminationTrace& t, Reason r) {
  return std::any_of(t.reasons.begin(), t.reasons.end(), [&](const Witness& w) { return w.reason == r; });
}

}  // namespace

TEST(Types, FixedAssignment) {
  const TypeAssignment t = assign_types(params_star());
  ASSERT_EQ(t.entries.size(), 6u);
  const std::pair<const char*, const char*> want[] = {
      {"I1", "Special"}, {"I2", "Orbit"},     {"I3", "Special"},
      {"I4minus", "Generic"}, {"I4plus", "Generic"}, {"lambda0", "Line-image"}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(t.entries[i].interval, want[i].first);
    EXPECT_EQ(t.entries[i].label, want[i].second);
    EXPECT_FALSE(t.entries[i].justification.empty());
  }
  EXPECT_FALSE(t.entries[5].type.has_value());
}

TEST(Elimination, ExactlyTwoSurvivorsOnEveryDraw) {
  for (const auto& r : kDraws) {
    const EliminationResult e = eliminate(tlab::testing::params_of(r));
    EXPECT_FALSE(e.inconclusive);
    ASSERT_EQ(e.traces.size(), 48u);
    const std::vector<Survivor> want = {{kFirst, Hypothesis::PlusOverI1},
                                        {kSecond, Hypothesis::MinusOverI1}};
    EXPECT_EQ(e.survivors, want);
  }
}

TEST(Elimination, EveryEliminationHasAVerifiedWitness) {
  const SurfaceParams& p = params_star();
  int eliminated = 0;
  for (const auto& t : star_result().traces) {
    if (t.verdict == Verdict::Survives) {
      EXPECT_TRUE(t.reasons.empty());
      continue;
    }
    ASSERT_EQ(t.verdict, Verdict::Eliminated);
    ++eliminated;
    ASSERT_FALSE(t.reasons.empty());
    for (const Witness& w : t.reasons)
      EXPECT_TRUE(verify_witness(w, t.choice, t.hypothesis, p))
          << t.choice.label() << " " << to_string(t.hypothesis) << " " << w.detail;
  }
  EXPECT_EQ(eliminated, 46);
}

TEST(Elimination, WitnessesDoNotVerifyForTheWrongFunction) {
  // A critical point of h2{X0,X0plusX1} is not one of h2{X1,X0plusX1}.
  const auto& t = trace_of(star_result(), {LF::X0, LF::X0plusX1, LF::X1}, Hypothesis::PlusOverI1);
  const auto it = std::find_if(t.reasons.begin(), t.reasons.end(),
                               [](const Witness& w) { return w.reason == Reason::A; });
  ASSERT_NE(it, t.reasons.end());
  EXPECT_FALSE(verify_witness(*it, kFirst, Hypothesis::PlusOverI1, params_star()));
}

TEST(Elimination, PairX0X0plusX1FailsByReasonA) {
  for (const auto& t : star_result().traces) {
    const bool pair = (t.choice.ell1 == LF::X0 && t.choice.ell2 == LF::X0plusX1) ||
                      (t.choice.ell1 == LF::X0plusX1 && t.choice.ell2 == LF::X0);
    if (pair) {
      EXPECT_EQ(t.verdict, Verdict::Eliminated);
      EXPECT_TRUE(has_reason(t, Reason::A)) << t.choice.label();
    }
  }
}

TEST(Elimination, X0plusX1FirstUnderPlusFailsAtMinusOne) {
  for (const auto& t : star_result().traces) {
    if (t.choice.ell1 != LF::X0plusX1 || t.hypothesis != Hypothesis::PlusOverI1) continue;
    EXPECT_EQ(t.verdict, Verdict::Eliminated);
    const bool at_minus_one = std::any_of(t.reasons.begin(), t.reasons.end(), [](const Witness& w) {
      return w.reason == Reason::C && w.interval == "lambda=-1";
    });
    EXPECT_TRUE(at_minus_one) << t.choice.label();
  }
}

TEST(Elimination, MonotoneUnderAddingConstraints) {
  // Replay: survivors of {A} ⊇ survivors of {A,B} ⊇ survivors of {A,B,C}.
  auto survives = [](const EliminationTrace& t, std::initializer_list<Reason> active) {
    for (const Witness& w : t.reasons)
      if (std::find(active.begin(), active.end(), w.reason) != active.end()) return false;
    return true;
  };
  for (const auto& t : star_result().traces) {
    const bool a = survives(t, {Reason::A});
    const bool ab = survives(t, {Reason::A, Reason::B});
    const bool abc = survives(t, {Reason::A, Reason::B, Reason::C});
    EXPECT_TRUE(!ab || a);
    EXPECT_TRUE(!abc || ab);
    EXPECT_EQ(abc, t.verdict == Verdict::Survives);
  }
}

TEST(Schedule, FirstSurvivor) {
  const ComponentSchedule s = component_schedule(kFirst, params_star(), star_result());
  ASSERT_EQ(s.entries.size(), 5u);
  EXPECT_EQ(s.entries[0].component, Component::Plus);
  EXPECT_EQ(s.entries[1].component, Component::Both);
  EXPECT_EQ(s.entries[2].component, Component::Minus);
  EXPECT_NE(s.entries[3].component, s.entries[4].component);
  // Γ1 → Γ2 → Γ3 as λ runs through I1, I2, I3.
  EXPECT_EQ(s.entries[0].curve, "Gamma1");
  EXPECT_EQ(s.entries[1].curve, "Gamma2");
  EXPECT_EQ(s.entries[2].curve, "Gamma3");
}

TEST(Schedule, SecondSurvivorRunsTheOtherWay) {
  const ComponentSchedule a = component_schedule(kFirst, params_star(), star_result());
  const ComponentSchedule b = component_schedule(kSecond, params_star(), star_result());
  EXPECT_EQ(b.entries[0].component, Component::Minus);
  EXPECT_EQ(b.entries[2].component, Component::Plus);
  EXPECT_EQ(b.entries[0].curve, "Gamma3");
  EXPECT_EQ(b.entries[2].curve, "Gamma1");
  EXPECT_NE(a.entries[3].component, b.entries[3].component);
  EXPECT_NE(a.entries[4].component, b.entries[4].component);
}

TEST(Schedule, NonSurvivorIsRejected) {
  EXPECT_THROW(component_schedule({LF::X0, LF::X1, LF::X0plusX1}, params_star(), star_result()),
               PreconditionError);
}
