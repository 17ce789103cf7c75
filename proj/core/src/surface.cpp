#include "twistorlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "twistorlab/errors.hpp"

namespace tlab {

RealPolynomial f_poly(const SurfaceParams& p) {
  // λ(λ+1)(aλ-b) = aλ^3 + (a-b)λ^2 - bλ
  return RealPolynomial({0.0, -p.b, p.a - p.b, p.a});
}

RealPolynomial Q_restricted(const SurfaceParams& p) {
  return RealPolynomial({p.q2, p.q1, p.q0});
}

RealPolynomial discriminant_poly(const SurfaceParams& p) {
  const RealPolynomial Q = Q_restricted(p);
  return Q * Q - f_poly(p);
}

double f_at(const SurfaceParams& p, double x) { return x * (x + 1.0) * (p.a * x - p.b); }
double Q_at(const SurfaceParams& p, double x) { return (p.q0 * x + p.q1) * x + p.q2; }
double D_at(const SurfaceParams& p, double x) {
  const double q = Q_at(p, x);
  return q * q - f_at(p, x);
}

namespace {

void require_positive_ab(const SurfaceParams& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0))
    throw InvalidParameter("surface parameters need a > 0 and b > 0");
}

double rel_value(const RealPolynomial& d, double x) {
  const double s = taylor_scale(d, x, 0);
  return s > 0.0 ? d(x) / s : d(x);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Sign-change witness for a degree <= 3 discriminant.
double negative_witness(const SurfaceParams& p) {
  for (int k = 0; k <= 8; ++k)
    for (double s : {1.0, -1.0}) {
      const double x = s * std::pow(10.0, k);
      if (D_at(p, x) < 0.0) return x;
    }
  return -0.5;
}

ConditionResult check_condition_i(const SurfaceParams& p, const ValidationOptions& opt,
                                  std::optional<double>* lambda0_out) {
  ConditionResult r;
  const RealPolynomial D = discriminant_poly(p);
  if (D.degree() < 4) {
    r.witness = negative_witness(p);
    r.detail = "q0 = 0: Q^2 - f has degree <= 3 and changes sign";
    return r;
  }

  // The minima of a quartic sit at real roots of its derivative cubic.
  const auto crit = real_roots_with_multiplicity(derivative(D), opt.roots);
  std::vector<double> zeros;
  double worst = std::numeric_limits<double>::infinity();
  double worst_at = 0.0;
  for (const RootCluster& c : crit) {
    const double x = c.value.real();
    const double v = rel_value(D, x);
    if (v < worst) {
      worst = v;
      worst_at = x;
    }
    if (std::abs(v) <= opt.equality_rel) zeros.push_back(x);
  }
  if (worst < -opt.equality_rel) {
    r.witness = worst_at;
    r.detail = "Q^2 - f < 0 at lambda = " + fmt(worst_at);
    return r;
  }
  if (zeros.empty()) {
    r.witness = worst_at;
    r.detail = "Q^2 - f > 0 everywhere: no double root";
    return r;
  }
  if (zeros.size() > 1) {
    r.witness = zeros[1];
    r.detail = "Q^2 - f vanishes at more than one real point";
    return r;
  }
  const double l0 = zeros.front();

  int mult = 0;
  double best = std::numeric_limits<double>::infinity();
  for (const RootCluster& c : root_clusters(D, opt.roots)) {
    const double d = std::abs(c.value - cplx(l0, 0.0));
    if (d < best) {
      best = d;
      mult = c.multiplicity;
    }
  }
  if (mult != 2) {
    r.witness = l0;
    r.detail = "the real root " + fmt(l0) + " has multiplicity " + std::to_string(mult) +
               " (expected exactly 2)";
    return r;
  }

  // Confirmation grid away from λ0.
  const double lo = -opt.grid_margin, hi = l0 + opt.grid_margin;
  const long n = static_cast<long>(std::ceil((hi - lo) / opt.grid_spacing));
  for (long i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    if (std::abs(x - l0) <= opt.lambda0_exclusion) continue;
    if (rel_value(D, x) < -opt.equality_rel) {
      r.witness = x;
      r.detail = "grid: Q^2 - f < 0 at lambda = " + fmt(x);
      return r;
    }
  }

  r.pass = true;
  r.witness = l0;
  r.detail = "single real double root";
  *lambda0_out = l0;
  return r;
}

ConditionResult check_condition_star(const SurfaceParams& p, const ValidationOptions& opt,
                                     std::optional<double> l0) {
  ConditionResult r;
  if (!(p.q0 > 0.0)) {
    r.witness = 1e6;
    r.detail = "q0 <= 0: Q falls below sqrt(f) as lambda -> +inf";
    return r;
  }
  const double upper = (l0 ? *l0 : p.b / p.a) + opt.grid_margin;
  const Interval pieces[2] = {{-1.0, 0.0}, {p.b / p.a, upper}};
  double worst = std::numeric_limits<double>::infinity();
  double worst_at = 0.0;
  for (const Interval& iv : pieces) {
    const long n = std::max(2L, static_cast<long>(std::ceil((iv.hi - iv.lo) / opt.grid_spacing)));
    for (long i = 0; i <= n; ++i) {
      const double x = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n);
      if (l0 && std::abs(x - *l0) <= opt.lambda0_exclusion) continue;
      const double fx = f_at(p, x);
      if (fx < 0.0) continue;
      const double m = Q_at(p, x) - std::sqrt(fx);
      if (m < worst) {
        worst = m;
        worst_at = x;
      }
    }
  }
  r.witness = worst_at;
  if (worst <= 0.0) {
    r.detail = "Q - sqrt(f) <= 0 at lambda = " + fmt(worst_at);
    return r;
  }
  r.pass = true;
  r.detail = l0 ? "Q > sqrt(f) on f >= 0 away from lambda0"
                : "Q > sqrt(f) on the grid (no lambda0 to exclude)";
  return r;
}

}  // namespace

ValidationReport validate(const SurfaceParams& p, const ValidationOptions& opt) {
  require_positive_ab(p);
  ValidationReport rep;
  rep.condition_i = check_condition_i(p, opt, &rep.lambda0);
  rep.condition_star = check_condition_star(p, opt, rep.lambda0);
  if (rep.lambda0) {
    const double l0 = *rep.lambda0;
    rep.f_at_lambda0 = f_at(p, l0);
    rep.Q_at_lambda0 = Q_at(p, l0);
    rep.lambda0_in_I4.witness = l0;
    if (l0 > p.b / p.a) {
      rep.lambda0_in_I4.pass = true;
      rep.lambda0_in_I4.detail = "lambda0 > b/a";
    } else {
      rep.lambda0_in_I4.detail =
          "lambda0 = " + fmt(l0) +
          " is not in (b/a, inf); remap with a real projective change of (y0, y1) that moves it "
          "past b/a (for lambda0 in (-1, 0) swap the roles of y0 and y1)";
    }
  } else {
    rep.lambda0_in_I4.detail = "no lambda0: condition (i) failed";
  }
  return rep;
}

double lambda0(const SurfaceParams& p, const ValidationOptions& opt) {
  require_positive_ab(p);
  std::optional<double> l0;
  const ConditionResult r = check_condition_i(p, opt, &l0);
  if (!r.pass || !l0) throw PreconditionError("lambda0 undefined: " + r.detail);
  return *l0;
}

IntervalPartition intervals(const SurfaceParams& p) {
  const double l0 = lambda0(p);
  const double ba = p.b / p.a;
  if (!(l0 > ba))
    throw PreconditionError("lambda0 = " + fmt(l0) + " must exceed b/a = " + fmt(ba));
  const double inf = std::numeric_limits<double>::infinity();
  IntervalPartition ip;
  ip.lambda0 = l0;
  ip.I1 = {-inf, -1.0};
  ip.I2 = {-1.0, 0.0};
  ip.I3 = {0.0, ba};
  ip.I4minus = {ba, l0};
  ip.I4plus = {l0, inf};
  return ip;
}

std::string to_string(SingularLocation l) {
  switch (l) {
    case SingularLocation::Pinf: return "Pinf";
    case SingularLocation::PinfBar: return "PinfBar";
    case SingularLocation::APoint: return "A-point";
  }
  return "?";
}

std::string to_string(SingularType t) {
  switch (t) {
    case SingularType::EllipticE7: return "elliptic-E7";
    case SingularType::OrdinaryDoublePoint: return "ordinary-double-point";
    case SingularType::NonODP: return "non-ODP";
  }
  return "?";
}

std::vector<SingularPoint> singular_locus(const SurfaceParams& p, const RootOptions& opt) {
  require_positive_ab(p);
  std::vector<SingularPoint> out;
  out.push_back({SingularLocation::Pinf, std::nullopt, SingularType::EllipticE7, 0,
                 "elliptic singularity of type E7~"});
  out.push_back({SingularLocation::PinfBar, std::nullopt, SingularType::EllipticE7, 0,
                 "elliptic singularity of type E7~"});
  const RealPolynomial D = discriminant_poly(p);
  if (D.degree() < 1) return out;
  for (const RootCluster& c : real_roots_with_multiplicity(D, opt)) {
    if (c.multiplicity < 2) continue;
    SingularPoint sp;
    sp.location = SingularLocation::APoint;
    sp.lambda = c.value.real();
    sp.multiplicity = c.multiplicity;
    sp.type = c.multiplicity == 2 ? SingularType::OrdinaryDoublePoint : SingularType::NonODP;
    sp.normal_form = "w2*w3 + w1^" + std::to_string(c.multiplicity);
    out.push_back(sp);
  }
  return out;
}

std::vector<RootCluster> complex_multiple_roots(const SurfaceParams& p, const RootOptions& opt) {
  std::vector<RootCluster> out;
  const RealPolynomial D = discriminant_poly(p);
  if (D.degree() < 1) return out;
  for (const RootCluster& c : root_clusters(D, opt))
    if (c.multiplicity >= 2 && c.value.imag() != 0.0) out.push_back(c);
  return out;
}

GridCertificate grid_certify(const SurfaceParams& p, double l0, int points, double exclusion) {
  GridCertificate g;
  g.min_reduced = std::numeric_limits<double>::infinity();
  g.min_star_margin = std::numeric_limits<double>::infinity();
  if (!(p.q0 != 0.0) || points < 3) return g;

  const double lo = -10.0, hi = l0 + 10.0;
  const double h = (hi - lo) / (points - 1);
  const double lead = p.q0 * p.q0;
  auto reduced = [&](double x) { return D_at(p, x) / ((x - l0) * (x - l0)) / lead; };

  double reduced_at = 0.0;
  std::vector<double> xs(points), rs(points);
  for (int i = 0; i < points; ++i) {
    const double x = lo + h * i;
    xs[i] = x;
    rs[i] = std::abs(x - l0) > exclusion ? reduced(x) : std::numeric_limits<double>::infinity();
    if (rs[i] < g.min_reduced) {
      g.min_reduced = rs[i];
      reduced_at = x;
    }
    const double fx = f_at(p, x);
    if (fx >= 0.0 && std::abs(x - l0) > exclusion) {
      const double m = Q_at(p, x) - std::sqrt(fx);
      if (m < g.min_star_margin) {
        g.min_star_margin = m;
        g.witness = x;
      }
    }
  }

  // Refine each grid-local minimum of the reduced quotient by golden section.
  for (int i = 1; i + 1 < points; ++i) {
    if (!(rs[i] <= rs[i - 1] && rs[i] <= rs[i + 1]) || !std::isfinite(rs[i])) continue;
    double a = xs[i - 1], b = xs[i + 1];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
      const double c = b - gr * (b - a), d = a + gr * (b - a);
      if (reduced(c) < reduced(d)) b = d; else a = c;
    }
    const double x = 0.5 * (a + b);
    if (std::abs(x - l0) > exclusion && reduced(x) < g.min_reduced) {
      g.min_reduced = reduced(x);
      reduced_at = x;
    }
  }

  // Outside the grid the quartic is dominated by q0^2 λ^4; confirm on a few decades.
  bool tails_ok = true;
  for (int k = 2; k <= 6; ++k)
    for (double s : {1.0, -1.0}) tails_ok = tails_ok && D_at(p, s * std::pow(10.0, k)) > 0.0;
  // λ0 must be a genuine zero with positive curvature.
  const double eps = 1e-4 * (1.0 + std::abs(l0));
  const double scale = taylor_scale(discriminant_poly(p), l0, 0);
  const bool touches = std::abs(D_at(p, l0)) <= 1e-9 * scale && D_at(p, l0 - eps) > 0.0 &&
                       D_at(p, l0 + eps) > 0.0;

  g.condition_i = tails_ok && touches && g.min_reduced > 0.0;
  g.condition_star = p.q0 > 0.0 && g.min_star_margin > 0.0;
  if (!g.condition_i) g.witness = reduced_at;
  return g;
}

SurfaceParams params_with_double_root(double a, double b, double l0, double q0) {
  SurfaceParams p{q0, 0.0, 0.0, a, b};
  require_positive_ab(p);
  const double fl = f_at(p, l0);
  if (!(fl > 0.0)) throw InvalidParameter("f(lambda0) must be positive");
  const double s = std::sqrt(fl);
  const double fp = (3.0 * a * l0 + 2.0 * (a - b)) * l0 - b;
  const double t = fp / (2.0 * s);
  // Q(λ) = q0 (λ-λ0)^2 + t (λ-λ0) + s
  p.q1 = t - 2.0 * q0 * l0;
  p.q2 = q0 * l0 * l0 - t * l0 + s;
  return p;
}

SurfaceParams find_valid_params(const SearchConfig& cfg) {
  require_positive_ab({0, 0, 0, cfg.a, cfg.b});
  if (!(cfg.lambda0 > cfg.b / cfg.a))
    throw InvalidParameter("target lambda0 must exceed b/a");
  if (cfg.samples < 1 || !(cfg.q0_min <= cfg.q0_max))
    throw NotFound("empty q0 range: no candidates to test");

  double best_score = -std::numeric_limits<double>::infinity();
  double best_q0 = cfg.q0_min, best_witness = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const double q0 = cfg.samples == 1
                          ? cfg.q0_min
                          : cfg.q0_min + (cfg.q0_max - cfg.q0_min) * i / (cfg.samples - 1);
    const SurfaceParams p = params_with_double_root(cfg.a, cfg.b, cfg.lambda0, q0);
    const GridCertificate g = grid_certify(p, cfg.lambda0, cfg.oracle_points);
    if (g.pass()) return p;
    const double score = std::min(g.min_reduced, g.min_star_margin);
    if (score > best_score) {
      best_score = score;
      best_q0 = q0;
      best_witness = g.witness;
    }
  }
  throw NotFound("no valid parameters in the q0 sweep; best near-miss q0 = " + fmt(best_q0) +
                 " violates at lambda = " + fmt(best_witness));
}

}  // namespace tlab
