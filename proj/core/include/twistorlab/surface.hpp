#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twistorlab/poly.hpp"

namespace tlab {

// Branch quartic (y2 y3 + Q(y0,y1))^2 = y0 y1 (y0+y1)(a y0 - b y1) with
// Q = q0 y0^2 + q1 y0 y1 + q2 y1^2. On the plane y0 = λ y1 the right side
// becomes f(λ) y1^4 with f(λ) = λ(λ+1)(aλ-b).
struct SurfaceParams {
  double q0 = 0.0, q1 = 0.0, q2 = 0.0;
  double a = 1.0, b = 1.0;
};

RealPolynomial f_poly(const SurfaceParams& p);
RealPolynomial Q_restricted(const SurfaceParams& p);
RealPolynomial discriminant_poly(const SurfaceParams& p);  // Q^2 - f

double f_at(const SurfaceParams& p, double lambda);
double Q_at(const SurfaceParams& p, double lambda);
double D_at(const SurfaceParams& p, double lambda);  // Q^2 - f

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool contains(double x) const { return lo < x && x < hi; }
};

struct IntervalPartition {
  double lambda0 = 0.0;
  Interval I1, I2, I3, I4minus, I4plus;
};

struct ConditionResult {
  bool pass = false;
  std::optional<double> witness;  // violating λ, or the double root on success
  std::string detail;
};

struct ValidationReport {
  ConditionResult condition_i;     // Q^2 - f >= 0, zero only at one double root λ0
  ConditionResult condition_star;  // Q > √f wherever f >= 0, λ != λ0
  ConditionResult lambda0_in_I4;   // λ0 > b/a
  std::optional<double> lambda0;
  double f_at_lambda0 = 0.0;
  double Q_at_lambda0 = 0.0;
  bool all_pass() const { return condition_i.pass && condition_star.pass && lambda0_in_I4.pass; }
};

struct ValidationOptions {
  double equality_rel = 1e-9;      // |Q^2-f| below this (relative) counts as a zero
  double grid_spacing = 1e-4;      // floor spacing of the confirmation grid
  double grid_margin = 10.0;       // grid covers [-margin, λ0 + margin]
  double lambda0_exclusion = 1e-3;
  RootOptions roots{};
};

// Throws InvalidParameter unless a > 0 and b > 0.
ValidationReport validate(const SurfaceParams& p, const ValidationOptions& opt = {});

// The unique real double root of Q^2 - f. Throws PreconditionError when
// condition (i) fails.
double lambda0(const SurfaceParams& p, const ValidationOptions& opt = {});

IntervalPartition intervals(const SurfaceParams& p);

enum class SingularLocation { Pinf, PinfBar, APoint };
enum class SingularType { EllipticE7, OrdinaryDoublePoint, NonODP };

struct SingularPoint {
  SingularLocation location = SingularLocation::Pinf;
  std::optional<double> lambda;  // A-points only
  SingularType type = SingularType::EllipticE7;
  int multiplicity = 0;          // multiplicity of λ as a root of Q^2 - f
  std::string normal_form;       // local equation in suitable coordinates w1, w2, w3
};

// P∞ and P̄∞, followed by one A-point for every real multiple root of Q^2 - f.
std::vector<SingularPoint> singular_locus(const SurfaceParams& p, const RootOptions& opt = {});

// Non-real multiple roots of Q^2 - f (the A-points off the real locus).
std::vector<RootCluster> complex_multiple_roots(const SurfaceParams& p,
                                                const RootOptions& opt = {});

std::string to_string(SingularLocation l);
std::string to_string(SingularType t);

// Dense-grid certificate for (i) and (*): independent of the root finder.
struct GridCertificate {
  bool condition_i = false;
  bool condition_star = false;
  double min_reduced = 0.0;      // min of (Q^2-f)/(λ-λ0)^2 over the grid, relative
  double min_star_margin = 0.0;  // min of Q - √f where f >= 0, away from λ0
  double witness = 0.0;          // λ attaining the worst violation or margin
  bool pass() const { return condition_i && condition_star; }
};

GridCertificate grid_certify(const SurfaceParams& p, double lambda0, int points = 100000,
                             double exclusion = 1e-3);

// One-parameter construction: fixing a, b and λ0 forces Q(λ0) = √f(λ0) and
// 2 Q(λ0) Q'(λ0) = f'(λ0), leaving q0 free.
SurfaceParams params_with_double_root(double a, double b, double lambda0, double q0);

struct SearchConfig {
  double a = 1.0, b = 1.0, lambda0 = 2.0;
  double q0_min = 0.05, q0_max = 20.0;
  int samples = 400;
  int oracle_points = 100000;
};

// First q0 in sweep order whose parameters pass the grid certificate.
// Throws NotFound with the best near-miss when the sweep is exhausted.
SurfaceParams find_valid_params(const SearchConfig& cfg = {});

}  // namespace tlab
