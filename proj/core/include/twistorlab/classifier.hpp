#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistorlab/analysis.hpp"
#include "twistorlab/conics.hpp"
#include "twistorlab/resolution.hpp"
#include "twistorlab/surface.hpp"

namespace tlab {

struct TypeEntry {
  std::string interval;            // I1, I2, I3, I4minus, I4plus, lambda0
  std::optional<ConicType> type;   // empty for the λ0 plane
  std::string label;               // "Special", ..., "Line-image"
  std::string justification;
};

struct TypeAssignment {
  std::vector<TypeEntry> entries;
};

// Which family of special conics is taken over I1 (the other one is then
// forced over I3).
enum class Hypothesis { PlusOverI1, MinusOverI1 };
std::string to_string(Hypothesis h);

enum class Verdict { Survives, Eliminated, Inconclusive };
std::string to_string(Verdict v);

// A: h2 critical on I2. B: h1/h3 critical on the interval it governs.
// C: limits at -1 or 0 fail to match reciprocally.
enum class Reason { A, B, C };
std::string to_string(Reason r);

struct Witness {
  Reason reason = Reason::A;
  std::string function;   // "h2{X0,X0plusX1}"
  std::string interval;   // A/B: scan interval; C: "lambda=-1" or "lambda=0"
  std::optional<double> lambda;            // A/B: critical point
  std::optional<LimitClass> left, right;   // C: limit from below, from above
  std::string detail;
};

struct EliminationTrace {
  ResolutionChoice choice;
  Hypothesis hypothesis = Hypothesis::PlusOverI1;
  Verdict verdict = Verdict::Survives;
  std::vector<Witness> reasons;
};

struct Survivor {
  ResolutionChoice choice;
  Hypothesis hypothesis;
  auto operator<=>(const Survivor&) const = default;
};

struct EliminationResult {
  bool inconclusive = false;     // some limit could not be classified
  std::vector<Survivor> survivors;  // empty when inconclusive
  std::vector<EliminationTrace> traces;  // 24 choices x 2 hypotheses, fixed order
};

struct ClassifierConfig {
  ScanConfig scan;
  LimitConfig limits;
};

TypeAssignment assign_types(const SurfaceParams& p);

EliminationResult eliminate(const SurfaceParams& p, const ClassifierConfig& cfg = {});

// Recomputes a witness: A/B need a derivative sign change bracketing λ,
// C needs the recomputed limits to mismatch again.
bool verify_witness(const Witness& w, const ResolutionChoice& c, Hypothesis h,
                    const SurfaceParams& p, const ClassifierConfig& cfg = {});

enum class Component { Plus, Minus, Both };
std::string to_string(Component c);

struct ScheduleEntry {
  std::string interval;
  Component component;
  std::string curve;      // Gamma1/Gamma2/Gamma3, or l_inf over I4
  std::string governing;  // h-function locating the intersection
};

struct ComponentSchedule {
  ResolutionChoice choice;
  Hypothesis hypothesis;
  std::vector<ScheduleEntry> entries;  // I1, I2, I3, I4minus, I4plus
};

// Over I4 the component is chosen so that its circle on l_inf (radius h0 for
// Minus, 1/h0 for Plus) degenerates at b/a the same way as the I3 intersection.
// Throws PreconditionError unless the choice survives in `elim`.
ComponentSchedule component_schedule(const ResolutionChoice& c, const SurfaceParams& p,
                                     const EliminationResult& elim,
                                     const ClassifierConfig& cfg = {});
ComponentSchedule component_schedule(const ResolutionChoice& c, const SurfaceParams& p,
                                     const ClassifierConfig& cfg = {});

}  // namespace tlab
