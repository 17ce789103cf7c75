#include "twistorlab/conics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twistorlab/errors.hpp"
#include "twistorlab/resolution.hpp"

namespace tlab {

namespace {

constexpr cplx I{0.0, 1.0};

double max_entry(const Mat3c& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (const cplx& z : row) s = std::max(s, std::abs(z));
  return s;
}

void require_generic_domain(const SurfaceParams& p, double lambda) {
  const double f = f_at(p, lambda);
  if (!(f > 0.0))
    throw DomainError("f(lambda) > 0",
                      "no generic touching conic: f(lambda) <= 0 at lambda = " +
                          std::to_string(lambda));
  const double q = Q_at(p, lambda);
  if (!(D_at(p, lambda) > 1e-12 * (q * q + std::abs(f))))
    throw DomainError("lambda != lambda0", "no generic touching conic on the lambda0 plane");
}

}  // namespace

cplx determinant(const Mat3c& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

ConicCoeffs make_conic(const Mat3c& raw) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (raw[i][j] != raw[j][i]) throw InvalidInput("conic matrix must be symmetric");
  const double s = max_entry(raw);
  if (s == 0.0) throw InvalidInput("zero conic matrix");
  ConicCoeffs c;
  c.scale = s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = raw[i][j] / s;
  return c;
}

std::optional<cplx> reality_factor(const ConicCoeffs& c, double tol) {
  static constexpr int swap23[3] = {0, 2, 1};
  Mat3c s{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[i][j] = std::conj(c.m[swap23[i]][swap23[j]]);
  // Ratio read off the largest entry, then checked everywhere.
  int bi = 0, bj = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(c.m[i][j]) > std::abs(c.m[bi][bj])) {
        bi = i;
        bj = j;
      }
  const cplx k = s[bi][bj] / c.m[bi][bj];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(s[i][j] - k * c.m[i][j]) > tol) return std::nullopt;
  return k;
}

bool is_real(const ConicCoeffs& c, double tol) { return reality_factor(c, tol).has_value(); }

std::pair<cplx, cplx> branch_factors(const SurfaceParams& p, double lambda, double tol) {
  const double q = Q_at(p, lambda);
  const double f = f_at(p, lambda);
  if (std::abs(q * q - f) <= tol * (q * q + std::abs(f)))
    throw DegenerateError("Q^2 = f: the two branch conics coincide on the lambda0 plane");
  const cplx r = f >= 0.0 ? cplx(std::sqrt(f), 0.0) : cplx(0.0, std::sqrt(-f));
  return {q - r, q + r};
}

ConicCoeffs generic_conic(const SurfaceParams& p, double lambda, double theta) {
  require_generic_domain(p, lambda);
  const double q = Q_at(p, lambda);
  const double sf = std::sqrt(f_at(p, lambda));
  const double d = D_at(p, lambda);
  Mat3c m{};
  m[0][0] = 2.0 * d;
  m[1][1] = sf * std::exp(I * theta);
  m[2][2] = sf * std::exp(-I * theta);
  m[1][2] = m[2][1] = q;
  return make_conic(m);
}

ConicCoeffs special_conic(const SurfaceParams& p, double lambda, double theta) {
  if (!(f_at(p, lambda) < 0.0))
    throw DomainError("f(lambda) < 0", "no special touching conic: f(lambda) >= 0");
  const double sd = std::sqrt(D_at(p, lambda));
  const double B = Bfun(p, lambda);
  Mat3c m{};
  m[0][0] = sd;
  m[0][1] = m[1][0] = 0.5 * B * std::exp(I * theta);
  m[0][2] = m[2][0] = 0.5 * B * std::exp(-I * theta);
  m[1][2] = m[2][1] = 0.5;
  return make_conic(m);
}

ConicCoeffs orbit_conic(double alpha) {
  if (alpha == 0.0) throw DegenerateError("alpha = 0: y2 y3 = 0 is a pair of lines");
  Mat3c m{};
  m[0][0] = -alpha;
  m[1][2] = m[2][1] = 0.5;
  return make_conic(m);
}

double generic_det_closed_form(const SurfaceParams& p, double lambda) {
  const double d = D_at(p, lambda);
  return -2.0 * d * d;
}

double special_det_closed_form(const SurfaceParams& p, double lambda) {
  return -(Q_at(p, lambda) + std::sqrt(D_at(p, lambda))) / 8.0;
}

std::string to_string(TangencyType t) {
  switch (t) {
    case TangencyType::Generic: return "Generic";
    case TangencyType::Special: return "Special";
    case TangencyType::Orbit: return "Orbit";
    case TangencyType::NotTouching: return "NotTouching";
    case TangencyType::ContainedInB: return "ContainedInB";
  }
  return "?";
}

std::string to_string(ConicType t) {
  switch (t) {
    case ConicType::Generic: return "Generic";
    case ConicType::Special: return "Special";
    case ConicType::Orbit: return "Orbit";
  }
  return "?";
}

namespace {

BranchRecord analyse_branch(const ConicCoeffs& c, cplx g, const TangencyOptions& opt) {
  const Mat3c& m = c.m;
  const cplx a = m[0][0], b = 2.0 * m[0][1], cc = m[1][1], d = 2.0 * m[0][2], e = 2.0 * m[1][2],
             h = m[2][2];
  // g^2 c x^4 - g b x^3 + (a - g e) x^2 + d x + h
  std::array<cplx, 5> co = {h, d, a - g * e, -g * b, g * g * cc};

  BranchRecord br;
  br.g = g;
  double big = 0.0;
  for (const cplx& z : co) big = std::max(big, std::abs(z));
  for (cplx& z : co)
    if (std::abs(z) <= opt.chop * big) z = 0.0;
  br.restriction = ComplexPolynomial(std::vector<cplx>(co.begin(), co.end()));
  if (br.restriction.is_zero()) {
    br.identically_zero = true;
    return br;
  }

  int low = 0;
  while (co[low] == cplx{}) ++low;
  const int deg = br.restriction.degree();
  if (low > 0) br.contacts.push_back({0.0, low, true, false});
  if (deg < 4) br.contacts.push_back({std::numeric_limits<double>::infinity(), 4 - deg, false, true});

  if (deg - low >= 1) {
    const ComplexPolynomial core(std::vector<cplx>(co.begin() + low, co.begin() + deg + 1));
    for (const RootCluster& rc : root_clusters(core, opt.roots)) {
      br.contacts.push_back({rc.value, rc.multiplicity, false, false});
      const double s = taylor_scale(core, rc.value, 0);
      br.residual = std::max(br.residual, std::abs(core(rc.value)) / (s > 0.0 ? s : 1.0));
    }
  }
  if (deg == 4)
    br.two_double_roots =
        has_two_double_roots(co[3] / co[4], co[2] / co[4], co[1] / co[4], co[0] / co[4]);
  return br;
}

}  // namespace

TangencyReport verify_touching(const ConicCoeffs& c, const SurfaceParams& p, double lambda,
                               const TangencyOptions& opt) {
  const double det = std::abs(determinant(c.m));
  if (det < opt.degenerate_det)
    throw DegenerateError("reducible conic (|det| = " + std::to_string(det) +
                          "): a pair of lines or a double line, not a touching conic");
  const auto [gm, gp] = branch_factors(p, lambda);
  TangencyReport rep;
  rep.branches = {analyse_branch(c, gm, opt), analyse_branch(c, gp, opt)};

  for (const BranchRecord& br : rep.branches)
    if (br.identically_zero) {
      rep.type = TangencyType::ContainedInB;
      return rep;
    }

  bool transversal = false;
  for (const BranchRecord& br : rep.branches)
    for (const Contact& ct : br.contacts) {
      if (ct.at_pinf) rep.contact_pinf += ct.multiplicity;
      else if (ct.at_pinfbar) rep.contact_pinfbar += ct.multiplicity;
      else if (ct.multiplicity < 2) transversal = true;
    }
  if (transversal || rep.contact_pinf != rep.contact_pinfbar) {
    rep.type = TangencyType::NotTouching;
    return rep;
  }
  switch (rep.contact_pinf) {
    case 0: rep.type = TangencyType::Generic; break;
    case 2: rep.type = TangencyType::Special; break;
    case 4: rep.type = TangencyType::Orbit; break;
    default: rep.type = TangencyType::NotTouching; break;
  }
  return rep;
}

std::array<std::array<double, 3>, 3> real_form_matrix(const ConicCoeffs& c) {
  const auto k = reality_factor(c, 1e-9);
  if (!k) throw PreconditionError("conic is not real: no real-slice form");
  const cplx phase = std::exp(I * (std::arg(*k) / 2.0));

  auto F = [&](double r, double x, double y) {
    const std::array<cplx, 3> v = {r, cplx(x, y), cplx(x, -y)};
    cplx s{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += c.m[i][j] * v[i] * v[j];
    return (phase * s).real();
  };
  const std::array<std::array<double, 3>, 3> e = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::array<std::array<double, 3>, 3> R{};
  for (int i = 0; i < 3; ++i) R[i][i] = F(e[i][0], e[i][1], e[i][2]);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double s = F(e[i][0] + e[j][0], e[i][1] + e[j][1], e[i][2] + e[j][2]);
      R[i][j] = R[j][i] = 0.5 * (s - R[i][i] - R[j][j]);
    }
  if (R[0][0] + R[1][1] + R[2][2] < 0.0)
    for (auto& row : R)
      for (double& x : row) x = -x;
  return R;
}

double min_real_form(const ConicCoeffs& c, const SamplerConfig& s) {
  const auto R = real_form_matrix(c);
  auto quad = [&](const std::array<double, 3>& v) {
    double q = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) q += R[i][j] * v[i] * v[j];
    return q;
  };

  std::array<double, 3> best{0, 0, 1};
  double best_q = quad(best);
  const double pi = std::numbers::pi;
  for (int i = 0; i < s.polar; ++i) {
    const double th = pi * (i + 0.5) / s.polar;
    for (int j = 0; j < 2 * s.polar; ++j) {
      const double ph = pi * j / s.polar;
      const std::array<double, 3> v = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                       std::cos(th)};
      const double q = quad(v);
      if (q < best_q) {
        best_q = q;
        best = v;
      }
    }
  }

  // Steepest descent with the exact minimum on span{v, gradient} at each step.
  std::array<double, 3> v = best;
  auto apply = [&](const std::array<double, 3>& x) {
    std::array<double, 3> y{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) y[i] += R[i][j] * x[j];
    return y;
  };
  auto dot = [](const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  };
  for (int it = 0; it < s.descent_iters; ++it) {
    const auto rv = apply(v);
    const double a = dot(v, rv);
    std::array<double, 3> u{};
    for (int i = 0; i < 3; ++i) u[i] = rv[i] - a * v[i];
    const double gn = std::sqrt(dot(u, u));
    if (!(gn > 1e-15 * std::max(std::abs(a), 1e-300))) break;
    for (double& x : u) x /= gn;
    const auto ru = apply(u);
    const double b = dot(v, ru), cc = dot(u, ru);
    // Smallest eigenpair of [[a, b], [b, cc]].
    const double mid = 0.5 * (a + cc), rad = std::hypot(0.5 * (a - cc), b);
    const double lo = mid - rad;
    double x0 = b, x1 = lo - a;
    if (std::abs(x0) + std::abs(x1) < 1e-300) break;
    const double n = std::hypot(x0, x1);
    x0 /= n;
    x1 /= n;
    std::array<double, 3> w{};
    for (int i = 0; i < 3; ++i) w[i] = x0 * v[i] + x1 * u[i];
    const double wn = std::sqrt(dot(w, w));
    for (double& x : w) x /= wn;
    if (!(quad(w) < quad(v))) break;
    v = w;
  }
  return std::min(best_q, quad(v));
}

double min_real_form_exact(const ConicCoeffs& c) {
  const auto R = real_form_matrix(c);
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = R[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double generic_real_form_bound(const SurfaceParams& p, double lambda) {
  require_generic_domain(p, lambda);
  const double q = Q_at(p, lambda), sf = std::sqrt(f_at(p, lambda)), d = D_at(p, lambda);
  const double scale = std::max({2.0 * d, sf, std::abs(q)});
  // (Q^2-f) y1^2 + Q|y2|^2 + √f Re(e^{iθ} y2^2) >= (Q^2-f) y1^2 + (Q - √f)|y2|^2
  return 2.0 * std::min(d, q - sf) / scale;
}

double special_real_form_bound(const SurfaceParams& p, double lambda) {
  if (!(f_at(p, lambda) < 0.0))
    throw DomainError("f(lambda) < 0", "special bound needs f(lambda) < 0");
  const double sd = std::sqrt(D_at(p, lambda));
  const double B = Bfun(p, lambda);
  const double scale = std::max({sd, 0.5 * B, 0.5});
  // √D r^2 + 2B r Re(e^{iθ} y2) + |y2|^2 >= (|y2| - B r)^2 + (√D - B^2) r^2:
  // smallest eigenvalue of [[√D, -B], [-B, 1]].
  const double lo = 0.5 * ((sd + 1.0) - std::sqrt((sd - 1.0) * (sd - 1.0) + 4.0 * B * B));
  return lo / scale;
}

std::pair<double, double> linf_radii(const SurfaceParams& p, double lambda) {
  require_generic_domain(p, lambda);
  const double h0 = h_function(HKind::H0, ResolutionChoice{}, p, lambda);
  return {h0, 1.0 / h0};
}

std::pair<cplx, cplx> linf_points(const SurfaceParams& p, double lambda, double theta) {
  require_generic_domain(p, lambda);
  const double q = Q_at(p, lambda), sf = std::sqrt(f_at(p, lambda)), sd = std::sqrt(D_at(p, lambda));
  const cplx rot = std::exp(-I * theta);
  return {(-q + sd) / sf * rot, (-q - sd) / sf * rot};
}

}  // namespace tlab
