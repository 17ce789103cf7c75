#include "twistorlab/resolution.hpp"

#include <algorithm>
#include <cmath>

#include "twistorlab/errors.hpp"
#include "twistorlab/series.hpp"

namespace tlab {

namespace {

constexpr cplx I{0.0, 1.0};

void require_valid(const ResolutionChoice& c) {
  if (!c.valid()) throw InvalidInput("resolution choice repeats a linear form: " + c.label());
}

double require_f(const SurfaceParams& p, double lambda, bool positive) {
  const double f = f_at(p, lambda);
  if (positive && !(f > 0.0))
    throw DomainError("f(lambda) > 0", "needs f(lambda) > 0 at lambda = " + std::to_string(lambda));
  if (!positive && !(f < 0.0))
    throw DomainError("f(lambda) < 0", "needs f(lambda) < 0 at lambda = " + std::to_string(lambda));
  return f;
}

double forms_product(std::initializer_list<LinearForm> ls, const SurfaceParams& p, double lambda) {
  double prod = 1.0;
  for (LinearForm l : ls) {
    const double v = restricted_value(l, p, lambda);
    if (v == 0.0)
      throw DomainError("L(lambda) != 0", std::string("linear form ") + std::string(to_string(l)) +
                                              " vanishes at lambda = " + std::to_string(lambda));
    prod *= v;
  }
  return prod;
}

}  // namespace

std::string_view to_string(LinearForm l) {
  switch (l) {
    case LinearForm::X0: return "X0";
    case LinearForm::X1: return "X1";
    case LinearForm::X0plusX1: return "X0plusX1";
    case LinearForm::AX0minusBX1: return "AX0minusBX1";
  }
  return "?";
}

std::optional<LinearForm> parse_form(std::string_view s) {
  for (LinearForm l : kAllForms)
    if (s == to_string(l)) return l;
  return std::nullopt;
}

double restricted_value(LinearForm l, const SurfaceParams& p, double lambda) {
  switch (l) {
    case LinearForm::X0: return lambda;
    case LinearForm::X1: return 1.0;
    case LinearForm::X0plusX1: return lambda + 1.0;
    case LinearForm::AX0minusBX1: return p.a * lambda - p.b;
  }
  return 0.0;
}

std::optional<double> zero_of(LinearForm l, const SurfaceParams& p) {
  switch (l) {
    case LinearForm::X0: return 0.0;
    case LinearForm::X1: return std::nullopt;
    case LinearForm::X0plusX1: return -1.0;
    case LinearForm::AX0minusBX1: return p.b / p.a;
  }
  return std::nullopt;
}

LinearForm ResolutionChoice::missing() const {
  for (LinearForm l : kAllForms)
    if (l != ell1 && l != ell2 && l != ell3) return l;
  return ell1;
}

std::string ResolutionChoice::label() const {
  return "(" + std::string(to_string(ell1)) + "," + std::string(to_string(ell2)) + "," +
         std::string(to_string(ell3)) + ")";
}

std::optional<ResolutionChoice> parse_choice(std::string_view s) {
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  LinearForm out[3];
  for (int i = 0; i < 3; ++i) {
    const auto comma = s.find(',');
    if ((i < 2) == (comma == std::string_view::npos)) return std::nullopt;
    const auto f = parse_form(s.substr(0, comma));
    if (!f) return std::nullopt;
    out[i] = *f;
    s = i < 2 ? s.substr(comma + 1) : std::string_view{};
  }
  ResolutionChoice c{out[0], out[1], out[2]};
  if (!c.valid()) return std::nullopt;
  return c;
}

std::vector<ResolutionChoice> all_resolutions() {
  std::vector<ResolutionChoice> out;
  for (LinearForm a : kAllForms)
    for (LinearForm b : kAllForms)
      for (LinearForm c : kAllForms) {
        const ResolutionChoice r{a, b, c};
        if (r.valid()) out.push_back(r);
      }
  return out;
}

double Bfun(const SurfaceParams& p, double lambda) {
  const double f = require_f(p, lambda, false);
  const double q = Q_at(p, lambda);
  // √(Q^2-f) - Q = -f / (√(Q^2-f) + Q); avoids cancellation when Q > 0.
  const double sd = std::sqrt(q * q - f);
  const double diff = q > 0.0 ? -f / (sd + q) : sd - q;
  return std::sqrt(0.5 * diff);
}

std::string_view to_string(HKind k) {
  switch (k) {
    case HKind::H0: return "h0";
    case HKind::H1: return "h1";
    case HKind::H2: return "h2";
    case HKind::H3: return "h3";
  }
  return "?";
}

double h_function(HKind kind, const ResolutionChoice& c, const SurfaceParams& p, double lambda) {
  switch (kind) {
    case HKind::H0: {
      const double f = require_f(p, lambda, true);
      const double q = Q_at(p, lambda);
      const double d = q * q - f;
      if (!(d > 1e-14 * (q * q + f)))
        throw DomainError("lambda != lambda0", "h0 is not defined at lambda0");
      return (q + std::sqrt(d)) / std::sqrt(f);
    }
    case HKind::H1: {
      require_valid(c);
      require_f(p, lambda, false);
      return 2.0 * Bfun(p, lambda) / std::abs(forms_product({c.ell1}, p, lambda));
    }
    case HKind::H2: {
      require_valid(c);
      const double f = require_f(p, lambda, true);
      return std::sqrt(f) / std::abs(forms_product({c.ell1, c.ell2}, p, lambda));
    }
    case HKind::H3: {
      require_valid(c);
      const double f = require_f(p, lambda, false);
      return -f / (2.0 * Bfun(p, lambda) *
                   std::abs(forms_product({c.ell1, c.ell2, c.ell3}, p, lambda)));
    }
  }
  return 0.0;
}

double h2_signed(const ResolutionChoice& c, const SurfaceParams& p, double lambda) {
  require_valid(c);
  const double f = require_f(p, lambda, true);
  return std::sqrt(f) / forms_product({c.ell1, c.ell2}, p, lambda);
}

SpecialIntersections special_intersections(const ResolutionChoice& c, const SurfaceParams& p,
                                           double lambda, double theta) {
  require_valid(c);
  const double f = require_f(p, lambda, false);
  const double B = Bfun(p, lambda);
  const double L1 = forms_product({c.ell1}, p, lambda);
  const double L123 = forms_product({c.ell1, c.ell2, c.ell3}, p, lambda);
  SpecialIntersections s;
  s.u = -2.0 * I * B * std::exp(-I * theta) / L1;
  s.w = -(I * std::exp(I * theta) * f) / (2.0 * B * L123);
  return s;
}

OrbitIntersections orbit_intersections(const ResolutionChoice& c, const SurfaceParams& p,
                                       double lambda, double alpha) {
  require_valid(c);
  const double f = require_f(p, lambda, true);
  const double shift = alpha + Q_at(p, lambda);
  const double rad = f - shift * shift;
  if (rad < -1e-12 * f)
    throw DomainError("-Q - sqrt(f) <= alpha <= -Q + sqrt(f)",
                      "alpha outside the reality window: the preimage components are not real");
  const double r = std::sqrt(std::max(rad, 0.0));
  const double L12 = forms_product({c.ell1, c.ell2}, p, lambda);
  return {cplx(r, shift) / L12, cplx(-r, shift) / L12};
}

SeriesPresentation series_presentation(const SurfaceParams& p, double lambda, double theta,
                                       int order) {
  if (order < 1 || order > 6) throw InvalidInput("series order must be in [1, 6]");
  const double f = require_f(p, lambda, false);
  const double q = Q_at(p, lambda);
  const double sd = std::sqrt(q * q - f);
  const double B = Bfun(p, lambda);
  const cplx bm = B * std::exp(-I * theta), bp = B * std::exp(I * theta);

  Series num(order, {bm, sd});
  Series den(order, {1.0, bp});
  const Series g = num / den;
  const Series t(order, {0.0, 1.0});
  const Series x2 = cplx(-1.0) * g.shifted(1);

  const Series k2 = cplx(f - q * q) * t.shifted(1) + cplx(2.0 * q) * g.shifted(1) -
                    g * g;
  const Series K = k2.sqrt_with(-I * bm);
  const Series z = K.shifted(1);
  const Series w = x2 + cplx(q) * t.shifted(1);
  const Series xi = z + I * w;
  const Series eta = z - I * w;

  SeriesPresentation s;
  s.order = order;
  s.x2 = x2.coeffs();
  s.z = z.coeffs();
  s.xi = xi.coeffs();
  s.eta = eta.coeffs();
  return s;
}

}  // namespace tlab
