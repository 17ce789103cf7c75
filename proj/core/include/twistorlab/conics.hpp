#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistorlab/poly.hpp"
#include "twistorlab/surface.hpp"

namespace tlab {

using Mat3c = std::array<std::array<cplx, 3>, 3>;

// Symmetric matrix of a conic y^T m y = 0 in H_λ with coordinates
// (y1 : y2 : y3). `m` is divided by its largest entry modulus; the original
// matrix is scale * m.
struct ConicCoeffs {
  Mat3c m{};
  double scale = 1.0;
};

ConicCoeffs make_conic(const Mat3c& raw);
cplx determinant(const Mat3c& m);

// σ(y1:y2:y3) = (ȳ1:ȳ3:ȳ2). Returns c with σ(m) = c m when the conic is real.
std::optional<cplx> reality_factor(const ConicCoeffs& c, double tol = 1e-12);
bool is_real(const ConicCoeffs& c, double tol = 1e-12);

// Branches of B_λ: x2 = -g x1^2 in the chart y3 != 0, g = Q ∓ √f.
std::pair<cplx, cplx> branch_factors(const SurfaceParams& p, double lambda,
                                     double degenerate_tol = 1e-12);

// 2(Q^2-f) y1^2 + √f e^{iθ} y2^2 + 2Q y2 y3 + √f e^{-iθ} y3^2
ConicCoeffs generic_conic(const SurfaceParams& p, double lambda, double theta);
// √(Q^2-f) y1^2 + B e^{iθ} y1 y2 + B e^{-iθ} y1 y3 + y2 y3,  B = √((√(Q^2-f) - Q)/2)
ConicCoeffs special_conic(const SurfaceParams& p, double lambda, double theta);
// y2 y3 - α y1^2
ConicCoeffs orbit_conic(double alpha);

double generic_det_closed_form(const SurfaceParams& p, double lambda);  // -2(Q^2-f)^2
double special_det_closed_form(const SurfaceParams& p, double lambda);  // -(Q+√(Q^2-f))/8

enum class TangencyType { Generic, Special, Orbit, NotTouching, ContainedInB };
enum class ConicType { Generic, Special, Orbit };
std::string to_string(TangencyType t);
std::string to_string(ConicType t);

struct Contact {
  cplx x1;                  // affine x1 = y1/y3 of the contact point
  int multiplicity = 1;
  bool at_pinf = false;     // x1 = 0
  bool at_pinfbar = false;  // the point at infinity of the branch (y3 = 0)
};

struct BranchRecord {
  cplx g;
  ComplexPolynomial restriction;  // conic restricted to x2 = -g x1^2
  std::vector<Contact> contacts;
  double residual = 0.0;          // max relative |p| at the finite clusters
  bool identically_zero = false;
  std::optional<bool> two_double_roots;  // criterion on the monic quartic, when degree 4
};

struct TangencyReport {
  std::array<BranchRecord, 2> branches;  // g-, g+
  TangencyType type = TangencyType::NotTouching;
  int contact_pinf = 0;     // intersection number with B_λ at P∞
  int contact_pinfbar = 0;  // and at P̄∞
};

struct TangencyOptions {
  double degenerate_det = 1e-10;  // normalized |det| below this is a reducible conic
  double chop = 1e-12;            // relative size under which a coefficient is zero
  RootOptions roots{};
};

// Substitutes each branch into the conic and reads off contact orders.
// Throws DegenerateError for reducible conics.
TangencyReport verify_touching(const ConicCoeffs& c, const SurfaceParams& p, double lambda,
                               const TangencyOptions& opt = {});

// Real slice y1 = r, y2 = x + iy, y3 = x - iy. The form y^T m y restricted
// there is a real quadratic form in (r, x, y), returned with the sign fixed
// so that its trace is nonnegative.
std::array<std::array<double, 3>, 3> real_form_matrix(const ConicCoeffs& c);

struct SamplerConfig {
  int polar = 24;         // grid cells in the polar angle; azimuth uses twice as many
  int descent_iters = 500;
};
// Minimum of the real-slice form over the unit sphere: grid then steepest
// descent. Positive means the conic has no real point.
// gradient descent. Positive means the conic has no real point.
double min_real_form(const ConicCoeffs& c, const SamplerConfig& s = {});
// Same minimum as the smallest eigenvalue of the real-slice form.
double min_real_form_exact(const ConicCoeffs& c);

// Closed-form lower bounds for the normalized generic and special conics
// (the sum-of-squares decompositions of their real-slice forms).
double generic_real_form_bound(const SurfaceParams& p, double lambda);
double special_real_form_bound(const SurfaceParams& p, double lambda);

// Radii h0 > 1 > 1/h0 of the two circles cut on y1 = 0 by the generic family.
std::pair<double, double> linf_radii(const SurfaceParams& p, double lambda);
// x2 = y2/y3 at those points: ((-Q ± √(Q^2-f))/√f) e^{-iθ}.
std::pair<cplx, cplx> linf_points(const SurfaceParams& p, double lambda, double theta);

}  // namespace tlab
