#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "twistorlab/resolution.hpp"
#include "twistorlab/surface.hpp"

namespace tlab {

using RealFunction = std::function<double(double)>;

struct OpenInterval {
  double lo = 0.0, hi = 0.0;  // either end may be infinite
  std::string label;
};

struct ScanConfig {
  int grid = 2000;                 // base grid; the scan is repeated at twice this
  double deriv_step = 1e-6;        // central-difference step, times (1 + |λ|)
  double bisect_width = 1e-9;      // bracket width, times (1 + |λ|)
  int tail_decades = 8;            // extra samples at c ± 10^k on unbounded ends
  double verdict_tol = 1e-7;       // |λ - critical| below this, times (1 + |λ|), is Degenerate
};

struct CriticalReport {
  std::string interval;
  int count = 0;
  std::vector<double> locations;
  std::vector<double> residuals;  // |h'| at each location
  bool stable = true;             // count unchanged when the grid is doubled
};

// Critical points of h on the open interval, located by sign changes of a
// central-difference derivative on a compactified grid and refined by
// bisection. Throws InvalidInput when fewer than 3 grid points are usable.
CriticalReport critical_points(const RealFunction& h, const OpenInterval& iv,
                               const ScanConfig& cfg = {});

double central_derivative(const RealFunction& h, double x, double step);

enum class Side { Below, Above };  // λ ↑ endpoint, λ ↓ endpoint

struct LimitClass {
  enum Kind { Zero, Finite, Infinity } kind = Finite;
  double value = 0.0;  // Finite only
  double rate = 0.0;   // log10 change per decade of approach
  bool operator==(const LimitClass& o) const { return kind == o.kind; }
};

std::string to_string(LimitClass::Kind k);
std::string to_string(const LimitClass& c);

struct LimitConfig {
  int decades = 8;               // approach distances 10^-1 .. 10^-decades (or radii 10^k)
  int window = 5;                // trailing samples that must be monotone (4 decades)
  double zero_threshold = 1e-4;
  double inf_threshold = 1e4;
  double min_rate = 0.2;         // decades of h per decade of approach
};

// Classifies lim h as λ approaches `endpoint` from `side`. For ±∞ use the
// matching infinity with Side::Below for +∞ and Side::Above for -∞.
// Throws Unclassifiable on non-monotone or undecided trends.
LimitClass endpoint_limit(const RealFunction& h, double endpoint, Side side,
                          const LimitConfig& cfg = {});

// Reciprocal matching used by the boundary relations: Zero with Infinity,
// Finite with Finite at reciprocal values to `rel` relative.
bool reciprocal_match(const LimitClass& x, const LimitClass& y, double rel = 1e-3);

enum class FamilyKind { GenPlus, GenMinus, SpPlus, SpMinus, Orbit };
enum class NormalBundle { Balanced, Degenerate };  // O(1)+O(1), O+O(2)
std::string to_string(FamilyKind k);
std::string to_string(NormalBundle n);

HKind governing_function(FamilyKind k);

// The open interval of the scan domain for `kind` that contains λ (I4 pieces
// exclude a radius around λ0 for h0).
OpenInterval scan_interval_for(HKind kind, const SurfaceParams& p, double lambda,
                               double lambda0_exclusion = 1e-3);

NormalBundle normal_bundle_at(FamilyKind kind, const ResolutionChoice& c, const SurfaceParams& p,
                              double lambda, const ScanConfig& cfg = {});
NormalBundle normal_bundle_from(const CriticalReport& rep, double lambda, double verdict_tol);

RealFunction h_of(HKind kind, const ResolutionChoice& c, const SurfaceParams& p);

struct HTableRow {
  std::string function;  // h0 .. h3
  std::string forms;     // "-" for h0, else the forms the function depends on
  std::string interval;
  int expected = 0;
  int computed = 0;
  bool stable = true;
  std::vector<double> locations;
  bool pass = false;
};

struct LimitRow {
  std::string function;
  std::string forms;
  std::string approach;  // e.g. "lambda -> -1-"
  LimitClass::Kind expected = LimitClass::Zero;
  std::optional<LimitClass> computed;  // empty when unclassifiable
  bool pass = false;
};

struct HTables {
  std::vector<HTableRow> counts;
  std::vector<LimitRow> limits;
  bool unclassifiable = false;
  bool all_pass() const;
};

// Compares scanned critical-point counts and endpoint limits of h0..h3
// against the expected tables. Needs a validated parameter set.
HTables verify_h_tables(const SurfaceParams& p, const ScanConfig& scan = {},
                        const LimitConfig& lim = {});

// For λ in I2 away from the h0 critical point λ', the μ on the other side of
// λ' with h0(μ) = h0(λ).
struct CriticalPairing {
  double lambda = 0.0;
  double mu = 0.0;
  double critical = 0.0;
  double h0_lambda = 0.0;
  double h0_mu = 0.0;
};
CriticalPairing pair_across_critical(const SurfaceParams& p, double lambda,
                                     const ScanConfig& cfg = {});

struct PsiReport {
  int samples = 0;
  bool monotone = false;
  double k_at_zero = 0.0;
  double k_at_max = 0.0;      // k(10^6)
  bool below_one = false;     // k < 1 everywhere on the grid
  bool limit_near_one = false;
  double boundary_derivative = 0.0;  // d/ds k(1/s) at s = 0
  bool boundary_nonzero = false;
  bool pass() const {
    return monotone && k_at_zero == 0.0 && below_one && limit_near_one && boundary_nonzero;
  }
};

// k(r) = r / (1 + √(1 + r^2)) on a log grid over [1e-6, 1e6].
PsiReport psi_check(int samples = 1000);

}  // namespace tlab
