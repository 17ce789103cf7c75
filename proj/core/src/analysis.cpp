#include "twistorlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twistorlab/errors.hpp"

namespace tlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const RealFunction& h, double x) {
  try {
    const double v = h(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<double> scan_grid(const OpenInterval& iv, int n, int tail_decades) {
  std::vector<double> xs;
  const double pi = std::numbers::pi;
  const bool lo_inf = std::isinf(iv.lo), hi_inf = std::isinf(iv.hi);
  for (int i = 1; i <= n; ++i) {
    const double s = static_cast<double>(i) / (n + 1);
    double x;
    if (!lo_inf && !hi_inf) x = iv.lo + (iv.hi - iv.lo) * 0.5 * (1.0 - std::cos(pi * s));
    else if (!lo_inf) x = iv.lo + std::tan(0.5 * pi * s);
    else if (!hi_inf) x = iv.hi - std::tan(0.5 * pi * (1.0 - s));
    else x = std::tan(pi * (s - 0.5));
    xs.push_back(x);
  }
  // Asymptotic samples beyond the compactified grid.
  for (int k = 3; k <= tail_decades; ++k) {
    const double r = std::pow(10.0, k);
    if (hi_inf) xs.push_back((lo_inf ? 0.0 : iv.lo) + r);
    if (lo_inf) xs.push_back((hi_inf ? 0.0 : iv.hi) - r);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::erase_if(xs, [&](double x) { return !(x > iv.lo && x < iv.hi); });
  return xs;
}

double step_at(const OpenInterval& iv, double x, double rel) {
  double h = rel * (1.0 + std::abs(x));
  if (std::isfinite(iv.lo)) h = std::min(h, 0.5 * (x - iv.lo));
  if (std::isfinite(iv.hi)) h = std::min(h, 0.5 * (iv.hi - x));
  return h;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

CriticalReport scan_once(const RealFunction& h, const OpenInterval& iv, int n,
                         const ScanConfig& cfg) {
  CriticalReport rep;
  rep.interval = iv.label;
  auto deriv = [&](double x) { return central_derivative(h, x, step_at(iv, x, cfg.deriv_step)); };

  int valid = 0;
  double last_x = 0.0;
  int last_s = 0;
  for (double x : scan_grid(iv, n, cfg.tail_decades)) {
    const double d = deriv(x);
    if (!std::isfinite(d)) continue;
    ++valid;
    const int s = sign(d);
    if (s == 0) continue;
    if (last_s != 0 && s != last_s) {
      double lo = last_x, hi = x;
      while (hi - lo > cfg.bisect_width * (1.0 + std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        const int sm = sign(deriv(mid));
        if (sm == 0) {
          lo = hi = mid;
          break;
        }
        (sm == last_s ? lo : hi) = mid;
      }
      const double loc = 0.5 * (lo + hi);
      if (rep.locations.empty() ||
          std::abs(loc - rep.locations.back()) > 10.0 * cfg.bisect_width * (1.0 + std::abs(loc))) {
        rep.locations.push_back(loc);
        rep.residuals.push_back(std::abs(deriv(loc)));
      }
    }
    last_x = x;
    last_s = s;
  }
  if (valid < 3) throw InvalidInput("insufficient domain: fewer than 3 valid grid points on " + iv.label);
  rep.count = static_cast<int>(rep.locations.size());
  return rep;
}

}  // namespace

double central_derivative(const RealFunction& h, double x, double step) {
  const double a = safe_eval(h, x + step), b = safe_eval(h, x - step);
  return (a - b) / (2.0 * step);
}

CriticalReport critical_points(const RealFunction& h, const OpenInterval& iv,
                               const ScanConfig& cfg) {
  const CriticalReport coarse = scan_once(h, iv, cfg.grid, cfg);
  CriticalReport fine = scan_once(h, iv, 2 * cfg.grid, cfg);
  fine.stable = coarse.count == fine.count;
  return fine;
}

std::string to_string(LimitClass::Kind k) {
  switch (k) {
    case LimitClass::Zero: return "Zero";
    case LimitClass::Finite: return "Finite";
    case LimitClass::Infinity: return "Infinity";
  }
  return "?";
}

std::string to_string(const LimitClass& c) {
  if (c.kind == LimitClass::Finite) return "Finite(" + std::to_string(c.value) + ")";
  return to_string(c.kind);
}

LimitClass endpoint_limit(const RealFunction& h, double endpoint, Side side,
                          const LimitConfig& cfg) {
  std::vector<double> v;
  for (int k = 1; k <= cfg.decades; ++k) {
    const double d = std::pow(10.0, std::isinf(endpoint) ? k : -k);
    double x;
    if (std::isinf(endpoint)) x = endpoint > 0 ? d : -d;
    else x = side == Side::Below ? endpoint - d : endpoint + d;
    v.push_back(safe_eval(h, x));
  }
  const int w = cfg.window;
  if (static_cast<int>(v.size()) < w) throw Unclassifiable("too few approach samples");
  const std::vector<double> tail(v.end() - w, v.end());
  for (double x : tail)
    if (!std::isfinite(x) || x < 0.0) throw Unclassifiable("h undefined near the endpoint");

  LimitClass out;
  const double last = tail.back();
  if (last == 0.0) {
    out.kind = LimitClass::Zero;
    return out;
  }
  bool inc = true, dec = true;
  for (int i = 1; i < w; ++i) {
    inc = inc && tail[i] > tail[i - 1];
    dec = dec && tail[i] < tail[i - 1];
  }
  if (tail.front() > 0.0) out.rate = (std::log10(last) - std::log10(tail.front())) / (w - 1);
  if (dec && (out.rate <= -cfg.min_rate || last < cfg.zero_threshold)) {
    out.kind = LimitClass::Zero;
    return out;
  }
  if (inc && (out.rate >= cfg.min_rate || last > cfg.inf_threshold)) {
    out.kind = LimitClass::Infinity;
    return out;
  }

  const double d1 = tail[w - 1] - tail[w - 2], d0 = tail[w - 2] - tail[w - 3];
  double spread = 0.0;
  for (double x : tail) spread = std::max(spread, std::abs(x - last));
  if (spread <= 1e-9 * std::abs(last)) {
    out.kind = LimitClass::Finite;
    out.value = last;
    return out;
  }
  if ((inc || dec) && std::abs(d1) <= 1e-3 * std::abs(last) && std::abs(d1) < std::abs(d0)) {
    const double r = d1 / d0;
    out.kind = LimitClass::Finite;
    out.value = last + d1 * r / (1.0 - r);
    return out;
  }
  throw Unclassifiable("no monotone trend toward 0, infinity or a finite value");
}

bool reciprocal_match(const LimitClass& x, const LimitClass& y, double rel) {
  if (x.kind == LimitClass::Zero) return y.kind == LimitClass::Infinity;
  if (x.kind == LimitClass::Infinity) return y.kind == LimitClass::Zero;
  return y.kind == LimitClass::Finite && std::abs(x.value * y.value - 1.0) <= rel;
}

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::GenPlus: return "GenPlus";
    case FamilyKind::GenMinus: return "GenMinus";
    case FamilyKind::SpPlus: return "SpPlus";
    case FamilyKind::SpMinus: return "SpMinus";
    case FamilyKind::Orbit: return "Orbit";
  }
  return "?";
}

std::string to_string(NormalBundle n) {
  return n == NormalBundle::Balanced ? "Balanced" : "Degenerate";
}

HKind governing_function(FamilyKind k) {
  switch (k) {
    case FamilyKind::GenPlus:
    case FamilyKind::GenMinus: return HKind::H0;
    case FamilyKind::SpPlus: return HKind::H1;
    case FamilyKind::SpMinus: return HKind::H3;
    case FamilyKind::Orbit: return HKind::H2;
  }
  return HKind::H0;
}

RealFunction h_of(HKind kind, const ResolutionChoice& c, const SurfaceParams& p) {
  return [kind, c, p](double x) { return h_function(kind, c, p, x); };
}

OpenInterval scan_interval_for(HKind kind, const SurfaceParams& p, double lambda, double excl) {
  const double ba = p.b / p.a;
  std::vector<OpenInterval> cands;
  switch (kind) {
    case HKind::H0: {
      const double l0 = tlab::lambda0(p);
      cands = {{-1.0, 0.0, "I2"}, {ba, l0 - excl, "I4minus"}, {l0 + excl, kInf, "I4plus"}};
      break;
    }
    case HKind::H1:
    case HKind::H3: cands = {{-kInf, -1.0, "I1"}, {0.0, ba, "I3"}}; break;
    case HKind::H2: cands = {{-1.0, 0.0, "I2"}, {ba, kInf, "I4"}}; break;
  }
  for (const OpenInterval& iv : cands)
    if (lambda > iv.lo && lambda < iv.hi) return iv;
  throw DomainError("lambda in the legal domain",
                    "lambda = " + std::to_string(lambda) + " is outside the domain of " +
                        std::string(to_string(kind)));
}

NormalBundle normal_bundle_from(const CriticalReport& rep, double lambda, double tol) {
  for (double c : rep.locations)
    if (std::abs(lambda - c) <= tol * (1.0 + std::abs(lambda))) return NormalBundle::Degenerate;
  return NormalBundle::Balanced;
}

NormalBundle normal_bundle_at(FamilyKind kind, const ResolutionChoice& c, const SurfaceParams& p,
                              double lambda, const ScanConfig& cfg) {
  const HKind hk = governing_function(kind);
  const OpenInterval iv = scan_interval_for(hk, p, lambda);
  h_function(hk, c, p, lambda);  // domain errors surface here
  return normal_bundle_from(critical_points(h_of(hk, c, p), iv, cfg), lambda, cfg.verdict_tol);
}

bool HTables::all_pass() const {
  if (unclassifiable) return false;
  for (const auto& r : counts)
    if (!r.pass) return false;
  for (const auto& r : limits)
    if (!r.pass) return false;
  return true;
}

namespace {

using LF = LinearForm;

ResolutionChoice with_first(LF l) {
  for (const ResolutionChoice& c : all_resolutions())
    if (c.ell1 == l) return c;
  return {};
}

ResolutionChoice with_pair(LF x, LF y) {
  for (const ResolutionChoice& c : all_resolutions())
    if (c.ell1 == x && c.ell2 == y) return c;
  return {};
}

ResolutionChoice without(LF m) {
  for (const ResolutionChoice& c : all_resolutions())
    if (c.missing() == m) return c;
  return {};
}

std::string forms_label(std::initializer_list<LF> ls) {
  std::string s = "{";
  for (LF l : ls) {
    if (s.size() > 1) s += ",";
    s += to_string(l);
  }
  return s + "}";
}

struct LimitSpec {
  double endpoint;
  Side side;
  LimitClass::Kind expected;
};

std::string approach_label(double e, Side s) {
  if (std::isinf(e)) return e > 0 ? "lambda -> +inf" : "lambda -> -inf";
  std::ostringstream os;
  os << "lambda -> " << e << (s == Side::Below ? "-" : "+");
  return os.str();
}

}  // namespace

HTables verify_h_tables(const SurfaceParams& p, const ScanConfig& scan, const LimitConfig& lim) {
  const double l0 = tlab::lambda0(p);
  const double ba = p.b / p.a;
  const double excl = 1e-3;
  const OpenInterval I1{-kInf, -1.0, "I1"}, I2{-1.0, 0.0, "I2"}, I3{0.0, ba, "I3"},
      I4m{ba, l0 - excl, "I4minus"}, I4p{l0 + excl, kInf, "I4plus"}, I4{ba, kInf, "I4"};
  constexpr auto Z = LimitClass::Zero;
  constexpr auto F = LimitClass::Infinity;
  const double ninf = -kInf, pinf = kInf;

  HTables t;
  auto add_count = [&](HKind k, const ResolutionChoice& c, const std::string& forms,
                       const OpenInterval& iv, int expected) {
    const CriticalReport r = critical_points(h_of(k, c, p), iv, scan);
    t.counts.push_back({std::string(to_string(k)), forms, iv.label, expected, r.count, r.stable,
                        r.locations, r.stable && r.count == expected});
  };
  auto add_limits = [&](HKind k, const ResolutionChoice& c, const std::string& forms,
                        const std::vector<LimitSpec>& specs) {
    for (const LimitSpec& s : specs) {
      LimitRow row{std::string(to_string(k)), forms, approach_label(s.endpoint, s.side),
                   s.expected, std::nullopt, false};
      try {
        row.computed = endpoint_limit(h_of(k, c, p), s.endpoint, s.side, lim);
        row.pass = row.computed->kind == s.expected;
      } catch (const Unclassifiable&) {
        t.unclassifiable = true;
      }
      t.limits.push_back(row);
    }
  };

  const ResolutionChoice any{};
  add_count(HKind::H0, any, "-", I2, 1);
  add_count(HKind::H0, any, "-", I4m, 0);
  add_count(HKind::H0, any, "-", I4p, 0);
  add_limits(HKind::H0, any, "-", {{-1.0, Side::Above, F}, {0.0, Side::Below, F}});

  struct H1Row {
    LF l;
    int i1, i3;
    std::vector<LimitSpec> lims;
  };
  const H1Row h1rows[] = {
      {LF::X1, 0, 1, {{ninf, Side::Above, F}, {-1.0, Side::Below, Z}}},
      {LF::X0, 1, 0, {{0.0, Side::Above, F}, {ba, Side::Below, Z}}},
      {LF::X0plusX1, 0, 1, {{ninf, Side::Above, Z}, {-1.0, Side::Below, F}}},
      {LF::AX0minusBX1, 1, 0, {{0.0, Side::Above, Z}, {ba, Side::Below, F}}},
  };
  for (const H1Row& r : h1rows) {
    const ResolutionChoice c = with_first(r.l);
    const std::string forms = forms_label({r.l});
    add_count(HKind::H1, c, forms, I1, r.i1);
    add_count(HKind::H1, c, forms, I3, r.i3);
    add_limits(HKind::H1, c, forms, r.lims);
  }

  // h3 depends on the unordered triple, named here by the missing form.
  struct H3Row {
    LF missing;
    int i1, i3;
    std::vector<LimitSpec> lims;
  };
  const H3Row h3rows[] = {
      {LF::X1, 0, 1, {{ninf, Side::Above, Z}, {-1.0, Side::Below, F}}},
      {LF::X0, 1, 0, {{0.0, Side::Above, Z}, {ba, Side::Below, F}}},
      {LF::X0plusX1, 0, 1, {{ninf, Side::Above, F}, {-1.0, Side::Below, Z}}},
      {LF::AX0minusBX1, 1, 0, {{0.0, Side::Above, F}, {ba, Side::Below, Z}}},
  };
  for (const H3Row& r : h3rows) {
    const ResolutionChoice c = without(r.missing);
    std::string forms = "{";
    for (LF l : kAllForms)
      if (l != r.missing) forms += (forms.size() > 1 ? "," : "") + std::string(to_string(l));
    forms += "}";
    add_count(HKind::H3, c, forms, I1, r.i1);
    add_count(HKind::H3, c, forms, I3, r.i3);
    add_limits(HKind::H3, c, forms, r.lims);
  }

  struct H2Row {
    LF x, y;
    int i2, i4;
    std::vector<LimitSpec> lims;
  };
  const H2Row h2rows[] = {
      {LF::X0, LF::X1, 0, 0,
       {{-1.0, Side::Above, Z}, {0.0, Side::Below, F}, {ba, Side::Above, Z}, {pinf, Side::Below, F}}},
      {LF::X0plusX1, LF::AX0minusBX1, 0, 0,
       {{-1.0, Side::Above, F}, {0.0, Side::Below, Z}, {ba, Side::Above, F}, {pinf, Side::Below, Z}}},
      {LF::X1, LF::X0plusX1, 0, 0,
       {{-1.0, Side::Above, F}, {0.0, Side::Below, Z}, {ba, Side::Above, Z}, {pinf, Side::Below, F}}},
      {LF::X0, LF::AX0minusBX1, 0, 0,
       {{-1.0, Side::Above, Z}, {0.0, Side::Below, F}, {ba, Side::Above, F}}},
      {LF::X0, LF::X0plusX1, 1, 1, {}},
      {LF::X1, LF::AX0minusBX1, 1, 1, {}},
  };
  for (const H2Row& r : h2rows) {
    const ResolutionChoice c = with_pair(r.x, r.y);
    const std::string forms = forms_label({r.x, r.y});
    add_count(HKind::H2, c, forms, I2, r.i2);
    add_count(HKind::H2, c, forms, I4, r.i4);
    add_limits(HKind::H2, c, forms, r.lims);
  }
  return t;
}

CriticalPairing pair_across_critical(const SurfaceParams& p, double lambda, const ScanConfig& cfg) {
  if (!(lambda > -1.0 && lambda < 0.0)) throw DomainError("lambda in I2", "pairing needs lambda in I2");
  const RealFunction h0 = h_of(HKind::H0, ResolutionChoice{}, p);
  const CriticalReport rep = critical_points(h0, {-1.0, 0.0, "I2"}, cfg);
  if (rep.count != 1) throw PreconditionError("h0 must have exactly one critical point on I2");
  const double c = rep.locations.front();
  if (std::abs(lambda - c) <= cfg.verdict_tol * (1.0 + std::abs(c)))
    throw PreconditionError("lambda is the critical point itself");

  const double target = h0(lambda);
  // h0 has its minimum at c and blows up at both ends of I2.
  const double end = lambda < c ? 0.0 : -1.0;
  const double dir = lambda < c ? -1.0 : 1.0;  // from `end` back into I2
  double far = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k <= 15; ++k) {
    const double x = end + dir * std::pow(10.0, -k) * std::abs(end - c);
    if (safe_eval(h0, x) > target) {
      far = x;
      break;
    }
  }
  if (std::isnan(far)) throw NotFound("no partner: h0 does not exceed h0(lambda) near the end of I2");

  double lo = c, hi = far;  // h0(lo) < target < h0(hi)
  for (int it = 0; it < 200 && lo != hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (h0(mid) < target ? lo : hi) = mid;
  }
  const double mu = std::abs(h0(lo) - target) < std::abs(h0(hi) - target) ? lo : hi;
  return {lambda, mu, c, target, h0(mu)};
}

PsiReport psi_check(int samples) {
  if (samples < 10) throw InvalidInput("psi_check needs at least 10 samples");
  auto k = [](double r) { return r / (1.0 + std::sqrt(1.0 + r * r)); };
  PsiReport rep;
  rep.samples = samples;
  rep.monotone = true;
  rep.below_one = true;
  double prev = k(0.0);
  rep.k_at_zero = prev;
  for (int i = 0; i < samples; ++i) {
    const double r = std::pow(10.0, -6.0 + 12.0 * i / (samples - 1));
    const double v = k(r);
    rep.monotone = rep.monotone && v > prev;
    rep.below_one = rep.below_one && v < 1.0;
    prev = v;
  }
  rep.k_at_max = k(1e6);
  rep.limit_near_one = rep.k_at_max > 1.0 - 1e-5;
  // s -> k(1/s) extends to s = 0 with value 1.
  const double s = 1e-7;
  rep.boundary_derivative = (k(1.0 / s) - 1.0) / s;
  rep.boundary_nonzero = std::abs(rep.boundary_derivative) > 1e-3;
  return rep;
}

}  // namespace tlab
