#include "twistorlab/classifier.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "twistorlab/errors.hpp"

namespace tlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string forms_of(HKind k, const ResolutionChoice& c) {
  std::vector<LinearForm> ls;
  if (k == HKind::H1) ls = {c.ell1};
  if (k == HKind::H2) ls = {c.ell1, c.ell2};
  if (k == HKind::H3) {
    for (LinearForm l : kAllForms)
      if (l != c.missing()) ls.push_back(l);
  }
  std::string s = std::string(to_string(k)) + "{";
  for (std::size_t i = 0; i < ls.size(); ++i) s += (i ? "," : "") + std::string(to_string(ls[i]));
  return s + "}";
}

// Functions governing I1 and I3 under a hypothesis.
HKind on_i1(Hypothesis h) { return h == Hypothesis::PlusOverI1 ? HKind::H1 : HKind::H3; }
HKind on_i3(Hypothesis h) { return h == Hypothesis::PlusOverI1 ? HKind::H3 : HKind::H1; }

OpenInterval interval_named(const std::string& name, const SurfaceParams& p) {
  if (name == "I1") return {-kInf, -1.0, "I1"};
  if (name == "I2") return {-1.0, 0.0, "I2"};
  if (name == "I3") return {0.0, p.b / p.a, "I3"};
  throw InvalidInput("unknown interval " + name);
}

// Memoises scans and limits; h1/h2/h3 only depend on ℓ1, {ℓ1,ℓ2} and the
// unordered triple, so most of the 48 traces share work.
class Evaluator {
 public:
  Evaluator(const SurfaceParams& p, const ClassifierConfig& cfg) : p_(p), cfg_(cfg) {}

  const CriticalReport& scan(HKind k, const ResolutionChoice& c, const std::string& iv) {
    const auto key = std::make_pair(forms_of(k, c), iv);
    auto it = scans_.find(key);
    if (it == scans_.end())
      it = scans_.emplace(key, critical_points(h_of(k, c, p_), interval_named(iv, p_), cfg_.scan))
               .first;
    return it->second;
  }

  // Empty when unclassifiable.
  std::optional<LimitClass> limit(HKind k, const ResolutionChoice& c, double e, Side s) {
    const auto key = std::make_tuple(forms_of(k, c), e, s);
    auto it = limits_.find(key);
    if (it == limits_.end()) {
      std::optional<LimitClass> v;
      try {
        v = endpoint_limit(h_of(k, c, p_), e, s, cfg_.limits);
      } catch (const Unclassifiable&) {
      }
      it = limits_.emplace(key, v).first;
    }
    return it->second;
  }

 private:
  SurfaceParams p_;
  ClassifierConfig cfg_;
  std::map<std::pair<std::string, std::string>, CriticalReport> scans_;
  std::map<std::tuple<std::string, double, Side>, std::optional<LimitClass>> limits_;
};

void check_critical(Evaluator& ev, HKind k, const ResolutionChoice& c, const std::string& iv,
                    Reason r, EliminationTrace& t) {
  const CriticalReport& rep = ev.scan(k, c, iv);
  for (double x : rep.locations)
    t.reasons.push_back({r, forms_of(k, c), iv, x, std::nullopt, std::nullopt,
                         forms_of(k, c) + " has a critical point on " + iv});
}

// Returns false when a limit is unclassifiable.
bool check_matching(Evaluator& ev, HKind below_k, HKind above_k, const ResolutionChoice& c,
                    double at, EliminationTrace& t) {
  const auto lo = ev.limit(below_k, c, at, Side::Below);
  const auto hi = ev.limit(above_k, c, at, Side::Above);
  if (!lo || !hi) return false;
  if (!reciprocal_match(*lo, *hi)) {
    const std::string where = at == 0.0 ? "lambda=0" : "lambda=-1";
    t.reasons.push_back({Reason::C, forms_of(below_k, c) + " | " + forms_of(above_k, c), where,
                         std::nullopt, lo, hi,
                         forms_of(below_k, c) + " -> " + to_string(*lo) + " from below but " +
                             forms_of(above_k, c) + " -> " + to_string(*hi) + " from above"});
  }
  return true;
}

}  // namespace

std::string to_string(Hypothesis h) {
  return h == Hypothesis::PlusOverI1 ? "PlusOverI1" : "MinusOverI1";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Survives: return "Survives";
    case Verdict::Eliminated: return "Eliminated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Reason r) {
  switch (r) {
    case Reason::A: return "A";
    case Reason::B: return "B";
    case Reason::C: return "C";
  }
  return "?";
}

std::string to_string(Component c) {
  switch (c) {
    case Component::Plus: return "Plus";
    case Component::Minus: return "Minus";
    case Component::Both: return "Both";
  }
  return "?";
}

TypeAssignment assign_types(const SurfaceParams& p) {
  if (!(p.a > 0.0 && p.b > 0.0)) throw InvalidParameter("a and b must be positive");
  TypeAssignment t;
  t.entries = {
      {"I1", ConicType::Special, "Special",
       "f < 0: no generic or orbit conic is real there, and the image must touch B at both "
       "fixed points with contact 2"},
      {"I2", ConicType::Orbit, "Orbit",
       "generic conics on I2 carry no twistor lines; only orbit conics remain"},
      {"I3", ConicType::Special, "Special", "same sign of f as on I1"},
      {"I4minus", ConicType::Generic, "Generic",
       "orbit conics over I4 contain the branch locus or have real points away from the double "
       "point; the generic family remains"},
      {"I4plus", ConicType::Generic, "Generic", "as on I4minus"},
      {"lambda0", std::nullopt, "Line-image",
       "the plane through the real double point: the image of a twistor line is a line"},
  };
  return t;
}

EliminationResult eliminate(const SurfaceParams& p, const ClassifierConfig& cfg) {
  Evaluator ev(p, cfg);
  EliminationResult out;
  for (const ResolutionChoice& c : all_resolutions()) {
    for (Hypothesis h : {Hypothesis::PlusOverI1, Hypothesis::MinusOverI1}) {
      EliminationTrace t{c, h, Verdict::Survives, {}};
      check_critical(ev, HKind::H2, c, "I2", Reason::A, t);
      check_critical(ev, on_i1(h), c, "I1", Reason::B, t);
      check_critical(ev, on_i3(h), c, "I3", Reason::B, t);
      bool classified = check_matching(ev, on_i1(h), HKind::H2, c, -1.0, t);
      classified = check_matching(ev, HKind::H2, on_i3(h), c, 0.0, t) && classified;
      if (!classified) out.inconclusive = true;
      if (!t.reasons.empty()) t.verdict = Verdict::Eliminated;
      else if (!classified) t.verdict = Verdict::Inconclusive;
      else out.survivors.push_back({c, h});
      out.traces.push_back(std::move(t));
    }
  }
  if (out.inconclusive) out.survivors.clear();
  return out;
}

bool verify_witness(const Witness& w, const ResolutionChoice& c, Hypothesis h,
                    const SurfaceParams& p, const ClassifierConfig& cfg) {
  if (w.reason == Reason::C) {
    if (!w.left || !w.right) return false;
    const double at = w.interval == "lambda=0" ? 0.0 : -1.0;
    const HKind below = at == 0.0 ? HKind::H2 : on_i1(h);
    const HKind above = at == 0.0 ? on_i3(h) : HKind::H2;
    try {
      const LimitClass lo = endpoint_limit(h_of(below, c, p), at, Side::Below, cfg.limits);
      const LimitClass hi = endpoint_limit(h_of(above, c, p), at, Side::Above, cfg.limits);
      return lo.kind == w.left->kind && hi.kind == w.right->kind && !reciprocal_match(lo, hi);
    } catch (const Unclassifiable&) {
      return false;
    }
  }
  if (!w.lambda) return false;
  HKind k = HKind::H2;
  if (w.reason == Reason::B) k = w.interval == "I1" ? on_i1(h) : on_i3(h);
  const RealFunction fn = h_of(k, c, p);
  const OpenInterval iv = interval_named(w.interval, p);
  const double x = *w.lambda;
  if (!(x > iv.lo && x < iv.hi)) return false;
  double d = 1e-5 * (1.0 + std::abs(x));
  if (std::isfinite(iv.lo)) d = std::min(d, 0.25 * (x - iv.lo));
  if (std::isfinite(iv.hi)) d = std::min(d, 0.25 * (iv.hi - x));
  const double step = 0.1 * d;
  const double dl = central_derivative(fn, x - d, step);
  const double dr = central_derivative(fn, x + d, step);
  return std::isfinite(dl) && std::isfinite(dr) && dl * dr < 0.0;
}

ComponentSchedule component_schedule(const ResolutionChoice& c, const SurfaceParams& p,
                                     const EliminationResult& elim, const ClassifierConfig& cfg) {
  std::optional<Hypothesis> hyp;
  for (const Survivor& s : elim.survivors)
    if (s.choice == c) hyp = s.hypothesis;
  if (!hyp) throw PreconditionError("resolution " + c.label() + " does not survive elimination");

  const Hypothesis h = *hyp;
  const Component i1 = h == Hypothesis::PlusOverI1 ? Component::Plus : Component::Minus;
  const Component i3 = h == Hypothesis::PlusOverI1 ? Component::Minus : Component::Plus;
  auto curve = [](HKind k) { return k == HKind::H1 ? "Gamma1" : k == HKind::H2 ? "Gamma2" : "Gamma3"; };

  const double ba = p.b / p.a;
  const LimitClass i3_end =
      endpoint_limit(h_of(on_i3(h), c, p), ba, Side::Below, cfg.limits);
  const LimitClass h0_end =
      endpoint_limit(h_of(HKind::H0, c, p), ba, Side::Above, cfg.limits);
  // Plus has radius 1/h0, so it degenerates like the reciprocal of h0.
  const Component i4m = reciprocal_match(h0_end, i3_end) ? Component::Plus : Component::Minus;
  const Component i4p = i4m == Component::Plus ? Component::Minus : Component::Plus;

  ComponentSchedule s{c, h, {}};
  s.entries = {
      {"I1", i1, curve(on_i1(h)), std::string(to_string(on_i1(h)))},
      {"I2", Component::Both, "Gamma2", "h2"},
      {"I3", i3, curve(on_i3(h)), std::string(to_string(on_i3(h)))},
      {"I4minus", i4m, "l_inf", "h0"},
      {"I4plus", i4p, "l_inf", "h0"},
  };
  return s;
}

ComponentSchedule component_schedule(const ResolutionChoice& c, const SurfaceParams& p,
                                     const ClassifierConfig& cfg) {
  return component_schedule(c, p, eliminate(p, cfg), cfg);
}

}  // namespace tlab
