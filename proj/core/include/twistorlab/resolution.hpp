#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twistorlab/poly.hpp"
#include "twistorlab/surface.hpp"

namespace tlab {

// Linear forms through the compound A3 point; on H_λ (x0 = λ x1) each
// restricts to L(λ) x1.
enum class LinearForm { X0, X1, X0plusX1, AX0minusBX1 };

inline constexpr LinearForm kAllForms[4] = {LinearForm::X0, LinearForm::X1,
                                            LinearForm::X0plusX1, LinearForm::AX0minusBX1};

std::string_view to_string(LinearForm l);
std::optional<LinearForm> parse_form(std::string_view s);

// λ, 1, λ+1, aλ-b
double restricted_value(LinearForm l, const SurfaceParams& p, double lambda);
// Where the restricted value vanishes (none for X1).
std::optional<double> zero_of(LinearForm l, const SurfaceParams& p);

// Ordered triple (ℓ1, ℓ2, ℓ3): blow up ℓ1 = ξ = 0, then ℓ2, then ℓ3. The
// exceptional curves Γ1, Γ2, Γ3 carry u = ξ/ℓ1, v = ξ/ℓ1ℓ2, w = ξ/ℓ1ℓ2ℓ3.
struct ResolutionChoice {
  LinearForm ell1 = LinearForm::X1;
  LinearForm ell2 = LinearForm::X0plusX1;
  LinearForm ell3 = LinearForm::X0;
  auto operator<=>(const ResolutionChoice&) const = default;
  bool valid() const { return ell1 != ell2 && ell1 != ell3 && ell2 != ell3; }
  LinearForm missing() const;
  std::string label() const;  // "(X1,X0plusX1,X0)"
};

std::optional<ResolutionChoice> parse_choice(std::string_view s);  // "X1,X0plusX1,X0"

// All 24 ordered triples, lexicographic in the order of kAllForms.
std::vector<ResolutionChoice> all_resolutions();

// B = √((√(Q^2-f) - Q)/2), evaluated as √(-f / (2(√(Q^2-f) + Q))). Needs f < 0.
double Bfun(const SurfaceParams& p, double lambda);

enum class HKind { H0, H1, H2, H3 };
std::string_view to_string(HKind k);

// H0 = (Q + √(Q^2-f))/√f        f > 0, λ != λ0 (choice ignored)
// H1 = 2B / |L1|                f < 0
// H2 = √f / |L1 L2|             f > 0
// H3 = (-f) / (2B |L1 L2 L3|)   f < 0
// Throws DomainError naming the violated constraint.
double h_function(HKind kind, const ResolutionChoice& c, const SurfaceParams& p, double lambda);

// √f / (L1 L2) without the absolute value.
double h2_signed(const ResolutionChoice& c, const SurfaceParams& p, double lambda);

// Where a special conic's preimage components meet the exceptional chain:
// L+ meets Γ1 at u, L- meets Γ3 at w. Needs f < 0.
struct SpecialIntersections {
  cplx u;
  cplx w;
};
SpecialIntersections special_intersections(const ResolutionChoice& c, const SurfaceParams& p,
                                           double lambda, double theta);

// Both components of an orbit conic's preimage meet Γ2, at
// v = (±√(f - (α+Q)^2) + i(α+Q)) / (L1 L2). Needs f > 0 and |α + Q| <= √f.
struct OrbitIntersections {
  cplx v_plus;
  cplx v_minus;
};
OrbitIntersections orbit_intersections(const ResolutionChoice& c, const SurfaceParams& p,
                                       double lambda, double alpha);

// Power series in x1 along the L+ component over a special conic:
//   x2 = -g(x1) x1,   g = (B e^{-iθ} + √(Q^2-f) x1) / (1 + B e^{iθ} x1)
//   z = K x1 with K^2 = (f - Q^2) x1^2 + 2Q g x1 - g^2, K(0) = -i B e^{-iθ}
//   ξ = z + i(x2 + Q x1^2),  η = z - i(x2 + Q x1^2)
// The L- component is z -> -z, which swaps ξ and η up to sign.
struct SeriesPresentation {
  int order = 0;
  std::vector<cplx> x2, z, xi, eta;  // coefficients of x1^0 .. x1^order
};

SeriesPresentation series_presentation(const SurfaceParams& p, double lambda, double theta,
                                       int order);

}  // namespace tlab
