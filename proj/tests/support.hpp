#pragma once

// Shared fixtures and independent oracles for the test suite. Nothing here
// calls into the library's own certification code.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "twistorlab/surface.hpp"

namespace tlab::testing {

// Reference values computed with mpmath at 40 digits from the one-parameter
// construction (double root forced at λ0, q0 swept over 400 samples of
// [0.05, 20], first q0 passing a 2e5-point numpy check of both conditions).
// λ' is the zero of h0' on I2 found by mpmath root polishing.
struct Reference {
  double a, b, lambda0;
  double q0, q1, q2;
  double lambda_prime;
};

inline constexpr Reference kStar{1.0, 1.0, 2.0,
                                 0.65, -0.3546344024487534988, 0.55875854768068500699,
                                 -0.34480464278429238004};
inline constexpr Reference kDrawB{2.0, 1.0, 1.5,
                                  0.95, -0.020100119556641613912, 0.63126296686079308807,
                                  -0.39792963410283461864};
inline constexpr Reference kDrawC{1.0, 3.0, 5.0,
                                  0.4, -0.64341443328690558822, 0.96303885884936115636,
                                  -0.36177819716336845116};
inline constexpr std::array<Reference, 3> kDraws{kStar, kDrawB, kDrawC};

inline SurfaceParams params_of(const Reference& r) { return {r.q0, r.q1, r.q2, r.a, r.b}; }

inline const SurfaceParams& params_star() {
  static const SurfaceParams p = find_valid_params();
  return p;
}

inline SurfaceParams searched(const Reference& r) {
  SearchConfig sc;
  sc.a = r.a;
  sc.b = r.b;
  sc.lambda0 = r.lambda0;
  return find_valid_params(sc);
}

// Dense-grid oracle for the two admissibility conditions, written directly
// from f = λ(λ+1)(aλ-b) and Q = q0 λ^2 + q1 λ + q2.
struct GridVerdict {
  bool condition_i = false;
  bool condition_star = false;
  double min_reduced = 0.0;
  double min_margin = 0.0;
};

inline GridVerdict grid_oracle(const SurfaceParams& p, double l0, int points = 100000) {
  auto f = [&](double x) { return x * (x + 1.0) * (p.a * x - p.b); };
  auto Q = [&](double x) { return (p.q0 * x + p.q1) * x + p.q2; };
  auto D = [&](double x) { return Q(x) * Q(x) - f(x); };
  // Q^2 - f = (x - l0)^2 R(x) with R a quadratic when l0 is a double root.
  auto reduced = [&](double x) {
    const double d = x - l0;
    return D(x) / (d * d);
  };
  const double lo = -10.0, hi = l0 + 10.0, h = (hi - lo) / (points - 1);
  const double excl = 1e-3;

  GridVerdict g;
  g.min_reduced = INFINITY;
  g.min_margin = INFINITY;
  std::vector<double> xs(points), rs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = lo + i * h;
    rs[i] = std::abs(xs[i] - l0) > 1e-6 ? reduced(xs[i]) : INFINITY;
  }
  for (int i = 0; i < points; ++i) {
    double m = rs[i];
    // Refine interior local minima by ternary search on the adjacent cells.
    if (i > 0 && i + 1 < points && rs[i] <= rs[i - 1] && rs[i] <= rs[i + 1]) {
      double u = xs[i - 1], v = xs[i + 1];
      for (int it = 0; it < 100; ++it) {
        const double m1 = u + (v - u) / 3, m2 = v - (v - u) / 3;
        if (reduced(m1) < reduced(m2)) v = m2;
        else u = m1;
      }
      if (std::abs(0.5 * (u + v) - l0) > 1e-6) m = std::min(m, reduced(0.5 * (u + v)));
    }
    g.min_reduced = std::min(g.min_reduced, m);
    if (f(xs[i]) >= 0.0 && std::abs(xs[i] - l0) > excl)
      g.min_margin = std::min(g.min_margin, Q(xs[i]) - std::sqrt(f(xs[i])));
  }
  // Outside the grid the quartic is dominated by q0^2 x^4; check a few decades.
  bool tails = p.q0 != 0.0;
  for (int k = 2; k <= 8; ++k)
    for (double s : {-1.0, 1.0}) tails = tails && D(s * std::pow(10.0, k)) > 0.0;
  const double scale = std::abs(p.q0 * p.q0) + std::abs(p.a) + 1.0;
  g.condition_i = tails && g.min_reduced > 1e-12 * scale && std::abs(D(l0)) < 1e-9 * scale;
  g.condition_star = p.q0 > 0.0 && g.min_margin > 0.0 && Q(l0) > 0.0;
  return g;
}

// Companion-matrix oracle: a monic quartic has two double roots when its four
// eigenvalues split into two pairs of nearly equal values.
inline bool quartic_has_two_double_roots_oracle(const std::array<std::complex<double>, 4>& a) {
  Eigen::Matrix4cd C = Eigen::Matrix4cd::Zero();
  for (int i = 1; i < 4; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) C(i, 3) = -a[3 - i];  // a = (a1, a2, a3, a4)
  const Eigen::Vector4cd r = Eigen::ComplexEigenSolver<Eigen::Matrix4cd>(C).eigenvalues();
  double scale = 1.0;
  for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(r[i]));
  const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  double best = INFINITY;
  for (const auto& pr : pairs)
    best = std::min(best, std::max(std::abs(r[pr[0]] - r[pr[1]]), std::abs(r[pr[2]] - r[pr[3]])));
  return best <= 1e-5 * scale;
}

}  // namespace tlab::testing
