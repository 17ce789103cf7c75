#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twistorlab/analysis.hpp"
#include "twistorlab/classifier.hpp"
#include "twistorlab/conics.hpp"
#include "twistorlab/errors.hpp"
#include "twistorlab/resolution.hpp"
#include "twistorlab/surface.hpp"

namespace tlab::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "twistorlab.report/v1";
constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::optional<std::string> params;
  std::optional<std::string> params_file;
  std::optional<std::string> target;  // a,b,lambda0 for the parameter search
  std::optional<double> lambda, theta, alpha;
  std::optional<std::string> resolution;
  std::optional<std::string> family;
  int grid = 2000;
  std::optional<int> samples;
  double tol = 1e-9;
  std::optional<std::string> out;
  std::string format = "json";
  bool timings = false;
};

// ---- parsing helpers -------------------------------------------------------

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError(flag + ": not a number: '" + item + "'");
    }
  }
  if (v.size() != n)
    throw UsageError(flag + ": expected " + std::to_string(n) + " comma-separated values");
  return v;
}

// Flat `key = value` lines (# comments) or a JSON object with q0..b.
SurfaceParams read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--params-file: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::map<std::string, double> kv;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      const json j = json::parse(text);
      for (const char* k : {"q0", "q1", "q2", "a", "b"})
        if (j.contains(k)) kv[k] = j.at(k).get<double>();
    } catch (const json::exception& e) {
      throw UsageError("--params-file: " + std::string(e.what()));
    }
  } else {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      line = line.substr(0, line.find('#'));
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        if (line.find_first_not_of(" \t\r") != std::string::npos)
          throw UsageError("--params-file: malformed line '" + line + "'");
        continue;
      }
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
      };
      kv[trim(line.substr(0, eq))] = parse_list(trim(line.substr(eq + 1)), 1, "--params-file")[0];
    }
  }
  SurfaceParams p;
  for (const char* k : {"q0", "q1", "q2"})
    if (!kv.count(k)) throw UsageError(std::string("--params-file: missing ") + k);
  p.q0 = kv["q0"];
  p.q1 = kv["q1"];
  p.q2 = kv["q2"];
  if (kv.count("a")) p.a = kv["a"];
  if (kv.count("b")) p.b = kv["b"];
  return p;
}

SearchConfig search_config(const RunConfig& rc) {
  SearchConfig sc;
  if (rc.target) {
    const auto v = parse_list(*rc.target, 3, "--target");
    sc.a = v[0];
    sc.b = v[1];
    sc.lambda0 = v[2];
  }
  if (rc.command == "search-params" && rc.samples) sc.samples = *rc.samples;
  return sc;
}

std::pair<SurfaceParams, std::string> resolve_params(const RunConfig& rc) {
  if (rc.params) {
    const auto v = parse_list(*rc.params, 5, "--params");
    return {{v[0], v[1], v[2], v[3], v[4]}, "inline"};
  }
  if (rc.params_file) return {read_params_file(*rc.params_file), "file"};
  return {find_valid_params(search_config(rc)), "search"};
}

ResolutionChoice resolve_choice(const RunConfig& rc) {
  if (!rc.resolution) return {};
  const auto c = parse_choice(*rc.resolution);
  if (!c) throw UsageError("--resolution: expected three distinct forms among X0,X1,X0plusX1,AX0minusBX1");
  return *c;
}

// ---- serialization ---------------------------------------------------------

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

json to_json(const SurfaceParams& p) {
  return {{"q0", p.q0}, {"q1", p.q1}, {"q2", p.q2}, {"a", p.a}, {"b", p.b}};
}

json to_json(const ConditionResult& c) {
  return {{"pass", c.pass}, {"witness", opt(c.witness)}, {"detail", c.detail}};
}

json to_json(const ValidationReport& v) {
  return {{"condition_i", to_json(v.condition_i)},
          {"condition_star", to_json(v.condition_star)},
          {"lambda0_in_I4", to_json(v.lambda0_in_I4)},
          {"lambda0", opt(v.lambda0)},
          {"f_at_lambda0", v.f_at_lambda0},
          {"Q_at_lambda0", v.Q_at_lambda0},
          {"pass", v.all_pass()}};
}

json to_json(const std::vector<SingularPoint>& pts) {
  json a = json::array();
  for (const SingularPoint& s : pts)
    a.push_back({{"location", to_string(s.location)},
                 {"lambda", opt(s.lambda)},
                 {"type", to_string(s.type)},
                 {"multiplicity", s.multiplicity},
                 {"normal_form", s.normal_form}});
  return a;
}

json to_json(const GridCertificate& g) {
  return {{"condition_i", g.condition_i},     {"condition_star", g.condition_star},
          {"min_reduced", g.min_reduced},     {"min_star_margin", g.min_star_margin},
          {"witness", g.witness},             {"pass", g.pass()}};
}

json to_json(const LimitClass& c) {
  json j = {{"class", to_string(c.kind)}, {"rate", c.rate}};
  if (c.kind == LimitClass::Finite) j["value"] = c.value;
  return j;
}

json to_json(const HTables& t) {
  json counts = json::array(), limits = json::array();
  for (const HTableRow& r : t.counts)
    counts.push_back({{"function", r.function},
                      {"forms", r.forms},
                      {"interval", r.interval},
                      {"expected", r.expected},
                      {"computed", r.computed},
                      {"stable", r.stable},
                      {"locations", r.locations},
                      {"pass", r.pass}});
  for (const LimitRow& r : t.limits)
    limits.push_back({{"function", r.function},
                      {"forms", r.forms},
                      {"approach", r.approach},
                      {"expected", to_string(r.expected)},
                      {"computed", r.computed ? to_json(*r.computed) : json(nullptr)},
                      {"pass", r.pass}});
  return {{"counts", counts},
          {"limits", limits},
          {"unclassifiable", t.unclassifiable},
          {"pass", t.all_pass()}};
}

json to_json(const Witness& w) {
  json j = {{"reason", to_string(w.reason)}, {"function", w.function}, {"where", w.interval}};
  if (w.lambda) j["lambda"] = *w.lambda;
  if (w.left) j["limit_below"] = to_json(*w.left);
  if (w.right) j["limit_above"] = to_json(*w.right);
  j["detail"] = w.detail;
  return j;
}

json to_json(const ComponentSchedule& s) {
  json e = json::array();
  for (const ScheduleEntry& x : s.entries)
    e.push_back({{"interval", x.interval},
                 {"component", to_string(x.component)},
                 {"curve", x.curve},
                 {"governing", x.governing}});
  return {{"resolution", s.choice.label()},
          {"hypothesis", to_string(s.hypothesis)},
          {"entries", e}};
}

json to_json(const TangencyReport& t) {
  json br = json::array();
  for (const BranchRecord& b : t.branches) {
    json contacts = json::array();
    for (const Contact& c : b.contacts)
      contacts.push_back({{"x1", c.at_pinfbar ? json(nullptr) : to_json(c.x1)},
                          {"multiplicity", c.multiplicity},
                          {"at_pinf", c.at_pinf},
                          {"at_pinfbar", c.at_pinfbar}});
    json coeffs = json::array();
    for (const cplx& c : b.restriction.coeffs()) coeffs.push_back(to_json(c));
    br.push_back({{"g", to_json(b.g)},
                  {"restriction", coeffs},
                  {"contacts", contacts},
                  {"residual", b.residual},
                  {"identically_zero", b.identically_zero},
                  {"two_double_roots",
                   b.two_double_roots ? json(*b.two_double_roots) : json(nullptr)}});
  }
  return {{"type", to_string(t.type)},
          {"contact_pinf", t.contact_pinf},
          {"contact_pinfbar", t.contact_pinfbar},
          {"branches", br}};
}

json to_json(const PsiReport& r) {
  return {{"samples", r.samples},
          {"monotone", r.monotone},
          {"k_at_zero", r.k_at_zero},
          {"k_at_max", r.k_at_max},
          {"below_one", r.below_one},
          {"limit_near_one", r.limit_near_one},
          {"boundary_derivative", r.boundary_derivative},
          {"boundary_nonzero", r.boundary_nonzero},
          {"pass", r.pass()}};
}

json config_json(const RunConfig& rc, const SurfaceParams& p, const std::string& source) {
  return {{"params", to_json(p)},
          {"params_source", source},
          {"target", rc.target ? json(*rc.target) : json(nullptr)},
          {"lambda", opt(rc.lambda)},
          {"theta", opt(rc.theta)},
          {"alpha", opt(rc.alpha)},
          {"resolution", rc.resolution ? json(*rc.resolution) : json(nullptr)},
          {"family", rc.family ? json(*rc.family) : json(nullptr)},
          {"grid", rc.grid},
          {"samples", rc.samples ? json(*rc.samples) : json(nullptr)},
          {"tol", rc.tol},
          {"format", rc.format},
          {"timings", rc.timings}};
}

// ---- command bodies --------------------------------------------------------

enum class Status { Pass, Fail, Inconclusive };

int exit_code(Status s) {
  return s == Status::Pass ? kPass : s == Status::Fail ? kFail : kInconclusive;
}

Status worst(Status a, Status b) {
  if (a == Status::Fail || b == Status::Fail) return Status::Fail;
  if (a == Status::Inconclusive || b == Status::Inconclusive) return Status::Inconclusive;
  return Status::Pass;
}

class Runner {
 public:
  Runner(const RunConfig& rc, json& rep) : rc_(rc), rep_(rep) {}

  template <class F>
  auto timed(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = f();
    if (rc_.timings)
      rep_["timings"][name] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

  ValidationOptions vopt() const {
    ValidationOptions o;
    o.equality_rel = rc_.tol;
    return o;
  }

  ScanConfig scan() const {
    ScanConfig s;
    s.grid = rc_.grid;
    return s;
  }

  Status validation(const SurfaceParams& p) {
    const ValidationReport v = timed("validation", [&] { return validate(p, vopt()); });
    rep_["validation"] = to_json(v);
    rep_["singular_locus"] = to_json(timed("singular_locus", [&] { return singular_locus(p); }));
    return v.all_pass() ? Status::Pass : Status::Fail;
  }

  Status search(const SurfaceParams& p) {
    const double l0 = search_config(rc_).lambda0;
    rep_["search"] = {{"lambda0_target", l0},
                      {"params", to_json(p)},
                      {"certificate", to_json(grid_certify(p, l0))}};
    return Status::Pass;
  }

  Status h_tables(const SurfaceParams& p) {
    const HTables t = timed("h_tables", [&] { return verify_h_tables(p, scan()); });
    rep_["h_tables"] = to_json(t);
    csv_tables_ = t;
    if (t.unclassifiable) return Status::Inconclusive;
    return t.all_pass() ? Status::Pass : Status::Fail;
  }

  Status classification(const SurfaceParams& p) {
    ClassifierConfig cc;
    cc.scan = scan();
    const TypeAssignment types = assign_types(p);
    const EliminationResult e = timed("eliminate", [&] { return eliminate(p, cc); });

    json jt = json::array();
    for (const TypeEntry& t : types.entries)
      jt.push_back({{"interval", t.interval}, {"type", t.label}, {"justification", t.justification}});
    json surv = json::array(), traces = json::array(), sched = json::array();
    for (const Survivor& s : e.survivors)
      surv.push_back({{"resolution", s.choice.label()}, {"hypothesis", to_string(s.hypothesis)}});
    for (const EliminationTrace& t : e.traces) {
      json rs = json::array();
      for (const Witness& w : t.reasons) {
        json jw = to_json(w);
        jw["verified"] = verify_witness(w, t.choice, t.hypothesis, p, cc);
        rs.push_back(jw);
      }
      traces.push_back({{"resolution", t.choice.label()},
                        {"hypothesis", to_string(t.hypothesis)},
                        {"verdict", to_string(t.verdict)},
                        {"reasons", rs}});
    }
    for (const Survivor& s : e.survivors) sched.push_back(to_json(component_schedule(s.choice, p, e, cc)));

    // Degenerate normal bundle of the generic family on I2, and the pairing
    // h0(μ) = h0(λ) across it.
    const CriticalReport crit = critical_points(h_of(HKind::H0, {}, p), {-1.0, 0.0, "I2"}, scan());
    json pairing = nullptr;
    if (rc_.lambda && *rc_.lambda > -1.0 && *rc_.lambda < 0.0) {
      const CriticalPairing cp = pair_across_critical(p, *rc_.lambda, scan());
      pairing = {{"lambda", cp.lambda}, {"mu", cp.mu}, {"h0_lambda", cp.h0_lambda}, {"h0_mu", cp.h0_mu}};
    }

    const std::vector<Survivor> expected = {
        {{LinearForm::X1, LinearForm::X0plusX1, LinearForm::X0}, Hypothesis::PlusOverI1},
        {{LinearForm::AX0minusBX1, LinearForm::X0, LinearForm::X0plusX1}, Hypothesis::MinusOverI1}};
    const bool matches = e.survivors == expected;
    rep_["classification"] = {{"types", jt},
                              {"inconclusive", e.inconclusive},
                              {"survivors", surv},
                              {"matches_expected", matches},
                              {"schedules", sched},
                              {"degenerate_lambda_I2", crit.locations},
                              {"pairing", pairing},
                              {"traces", traces}};
    if (e.inconclusive) return Status::Inconclusive;
    return matches ? Status::Pass : Status::Fail;
  }

  Status psi() {
    const PsiReport r = psi_check(rc_.samples.value_or(1000));
    rep_["psi"] = to_json(r);
    return r.pass() ? Status::Pass : Status::Fail;
  }

  Status conic(const SurfaceParams& p) {
    std::string family = rc_.family.value_or("");
    if (family.empty()) {
      if (rc_.alpha) family = "orbit";
      else if (rc_.lambda) family = f_at(p, *rc_.lambda) > 0.0 ? "generic" : "special";
      else throw UsageError("conic: give --lambda, or --alpha for an orbit conic");
    }
    const double theta = rc_.theta.value_or(0.0);
    json j = {{"family", family}, {"lambda", opt(rc_.lambda)}, {"theta", theta}, {"alpha", opt(rc_.alpha)}};
    Status st = Status::Pass;
    if (family == "orbit") {
      if (!rc_.alpha) throw UsageError("conic --family orbit needs --alpha");
      const ConicCoeffs c = orbit_conic(*rc_.alpha);
      put_matrix(j, c);
      const double mn = min_real_form_exact(c);
      j["min_real_form"] = mn;
      j["has_real_points"] = !(mn > 0.0);
      if (rc_.lambda) {
        const TangencyReport t = verify_touching(c, p, *rc_.lambda);
        j["tangency"] = to_json(t);
        if (t.type != TangencyType::Orbit) st = Status::Fail;
      }
    } else if (family == "generic" || family == "special") {
      if (!rc_.lambda) throw UsageError("conic --family " + family + " needs --lambda");
      const double l = *rc_.lambda;
      const bool gen = family == "generic";
      const ConicCoeffs c = gen ? generic_conic(p, l, theta) : special_conic(p, l, theta);
      put_matrix(j, c);
      const double closed = gen ? generic_det_closed_form(p, l) : special_det_closed_form(p, l);
      j["det_closed_form"] = closed;
      const TangencyReport t = verify_touching(c, p, l);
      j["tangency"] = to_json(t);
      const double mn = min_real_form(c);
      j["min_real_form"] = mn;
      j["min_real_form_exact"] = min_real_form_exact(c);
      j["analytic_bound"] = gen ? generic_real_form_bound(p, l) : special_real_form_bound(p, l);
      const TangencyType want = gen ? TangencyType::Generic : TangencyType::Special;
      if (t.type != want || !(mn > 0.0)) st = Status::Fail;
    } else {
      throw UsageError("--family must be generic, special or orbit");
    }
    rep_["conic"] = j;
    return st;
  }

  Status tangency(const SurfaceParams& p) {
    const IntervalPartition ip = intervals(p);
    const int n = rc_.samples.value_or(24);
    struct Piece {
      std::string name;
      Interval iv;
    };
    const std::vector<Piece> pieces = {{"I1", ip.I1}, {"I2", ip.I2}, {"I3", ip.I3},
                                       {"I4minus", ip.I4minus}, {"I4plus", ip.I4plus}};
    json rows = json::array();
    Status st = Status::Pass;
    double worst_residual = 0.0, worst_det = 0.0;
    for (const Piece& pc : pieces) {
      std::vector<double> ls;
      if (rc_.lambda) {
        if (pc.iv.contains(*rc_.lambda)) ls.push_back(*rc_.lambda);
      } else {
        ls = sample_interval(pc.iv, 8);
      }
      for (double l : ls) {
        for (int k = 0; k < n; ++k) {
          json row = {{"interval", pc.name}, {"lambda", l}};
          ConicCoeffs c;
          TangencyType want;
          std::optional<double> closed;
          if (pc.name == "I2") {
            // α strictly inside the window where the preimage is real.
            const double q = Q_at(p, l), s = std::sqrt(f_at(p, l));
            const double alpha = -q - s + 2.0 * s * (k + 1) / (n + 1);
            if (alpha == 0.0) continue;
            row["alpha"] = alpha;
            row["family"] = "orbit";
            c = orbit_conic(alpha);
            want = TangencyType::Orbit;
          } else {
            const double theta = 2.0 * std::numbers::pi * k / n;
            const bool gen = pc.name == "I4minus" || pc.name == "I4plus";
            row["theta"] = theta;
            row["family"] = gen ? "generic" : "special";
            c = gen ? generic_conic(p, l, theta) : special_conic(p, l, theta);
            closed = gen ? generic_det_closed_form(p, l) : special_det_closed_form(p, l);
            want = gen ? TangencyType::Generic : TangencyType::Special;
          }
          const TangencyReport t = verify_touching(c, p, l);
          double res = 0.0;
          for (const BranchRecord& b : t.branches) res = std::max(res, b.residual);
          const double mn = min_real_form_exact(c);
          row["type"] = to_string(t.type);
          row["residual"] = res;
          if (closed) {
            const double det_err = std::abs(determinant(c.m) * std::pow(c.scale, 3) - *closed) /
                                   std::abs(*closed);
            row["det_rel_err"] = det_err;
            worst_det = std::max(worst_det, det_err);
          }
          row["min_real_form"] = mn;
          const bool ok = t.type == want && res < 1e-8 && mn > 0.0 &&
                          (!closed || row["det_rel_err"].get<double>() < 1e-9);
          row["pass"] = ok;
          if (!ok) st = Status::Fail;
          worst_residual = std::max(worst_residual, res);
          rows.push_back(row);
        }
      }
    }
    rep_["tangency"] = {{"samples_per_lambda", n},
                        {"rows", rows},
                        {"max_residual", worst_residual},
                        {"max_det_rel_err", worst_det},
                        {"pass", st == Status::Pass}};
    return st;
  }

  Status hscan(const SurfaceParams& p) {
    std::vector<ResolutionChoice> choices;
    if (rc_.resolution) choices = {resolve_choice(rc_)};
    else choices = all_resolutions();
    const IntervalPartition ip = intervals(p);
    const int n = rc_.samples.value_or(32);
    const std::vector<std::pair<std::string, Interval>> pieces = {
        {"I1", ip.I1}, {"I2", ip.I2}, {"I3", ip.I3}, {"I4minus", ip.I4minus}, {"I4plus", ip.I4plus}};
    json rows = json::array();
    for (const ResolutionChoice& c : choices)
      for (const auto& [name, iv] : pieces)
        for (double l : sample_interval(iv, n)) {
          json row = {{"resolution", c.label()}, {"interval", name}, {"lambda", l}};
          for (HKind k : {HKind::H0, HKind::H1, HKind::H2, HKind::H3}) {
            try {
              row[std::string(to_string(k))] = h_function(k, c, p, l);
            } catch (const DomainError&) {
              row[std::string(to_string(k))] = nullptr;
            }
          }
          rows.push_back(row);
        }
    rep_["hscan"] = {{"samples_per_interval", n}, {"rows", rows}};
    return Status::Pass;
  }

  std::optional<HTables> csv_tables_;

 private:
  static void put_matrix(json& j, const ConicCoeffs& c) {
    json m = json::array();
    for (const auto& row : c.m) {
      json r = json::array();
      for (const cplx& z : row) r.push_back(to_json(z));
      m.push_back(r);
    }
    j["matrix"] = m;
    j["scale"] = c.scale;
    j["determinant"] = to_json(determinant(c.m) * std::pow(c.scale, 3));
    const auto k = reality_factor(c, 1e-9);
    j["real"] = k.has_value();
  }

  // Interior samples; unbounded ends are sampled logarithmically out to 10^3.
  static std::vector<double> sample_interval(const Interval& iv, int n) {
    std::vector<double> out;
    for (int i = 1; i <= n; ++i) {
      const double s = static_cast<double>(i) / (n + 1);
      if (std::isinf(iv.lo)) out.push_back(iv.hi - std::pow(10.0, -3.0 + 6.0 * (1.0 - s)));
      else if (std::isinf(iv.hi)) out.push_back(iv.lo + std::pow(10.0, -3.0 + 6.0 * s));
      else out.push_back(iv.lo + s * (iv.hi - iv.lo));
    }
    return out;
  }

  const RunConfig& rc_;
  json& rep_;
};

std::string csv_hscan(const json& hs) {
  std::ostringstream os;
  os.precision(17);
  os << "resolution,interval,lambda,h0,h1,h2,h3\n";
  for (const json& r : hs.at("rows")) {
    os << r.at("resolution").get<std::string>() << ',' << r.at("interval").get<std::string>() << ','
       << r.at("lambda").get<double>();
    for (const char* k : {"h0", "h1", "h2", "h3"}) {
      os << ',';
      if (!r.at(k).is_null()) os << r.at(k).get<double>();
    }
    os << '\n';
  }
  return os.str();
}

std::string csv_tables(const HTables& t) {
  std::ostringstream os;
  os.precision(17);
  os << "kind,function,forms,where,expected,computed,pass\n";
  for (const HTableRow& r : t.counts)
    os << "count," << r.function << ",\"" << r.forms << "\"," << r.interval << ',' << r.expected
       << ',' << r.computed << ',' << (r.pass ? "true" : "false") << '\n';
  for (const LimitRow& r : t.limits)
    os << "limit," << r.function << ",\"" << r.forms << "\",\"" << r.approach << "\","
       << to_string(r.expected) << ',' << (r.computed ? to_string(*r.computed) : "Unclassifiable")
       << ',' << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

int execute(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const bool csv = rc.format == "csv";
  if (csv && rc.command != "hscan" && rc.command != "critical")
    throw UsageError("--format csv is only available for hscan and critical");

  json rep;
  rep["schema"] = kSchema;
  rep["version"] = kVersion;
  rep["command"] = rc.command;
  rep["config"] = nullptr;
  for (const char* k : {"validation", "singular_locus", "h_tables", "classification", "psi"})
    rep[k] = nullptr;

  Status st = Status::Pass;
  Runner run(rc, rep);
  try {
    if (rc.command == "psi") {
      rep["config"] = config_json(rc, {}, "none");
      rep["config"]["params"] = nullptr;
      st = run.psi();
    } else {
      auto [p, source] = run.timed("params", [&] { return resolve_params(rc); });
      rep["config"] = config_json(rc, p, source);
      if (rc.command == "validate") {
        st = run.validation(p);
      } else if (rc.command == "search-params") {
        st = run.search(p);
        st = worst(st, run.validation(p));
      } else if (rc.command == "conic") {
        st = run.conic(p);
      } else if (rc.command == "tangency") {
        st = run.tangency(p);
      } else if (rc.command == "hscan") {
        st = run.hscan(p);
      } else if (rc.command == "critical") {
        st = run.h_tables(p);
      } else if (rc.command == "classify") {
        st = run.validation(p);
        if (st == Status::Pass) st = run.classification(p);
      } else if (rc.command == "report") {
        st = run.validation(p);
        if (st == Status::Pass) {
          st = worst(st, run.h_tables(p));
          st = worst(st, run.classification(p));
        }
        st = worst(st, run.psi());
      }
    }
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    json je = {{"type", "Error"}, {"message", e.what()}};
    if (const auto* d = dynamic_cast<const DomainError*>(&e)) {
      je["type"] = "DomainError";
      je["constraint"] = d->constraint();
    } else if (dynamic_cast<const NotFound*>(&e)) {
      je["type"] = "NotFound";
    } else if (dynamic_cast<const PreconditionError*>(&e)) {
      je["type"] = "PreconditionError";
    } else if (dynamic_cast<const InvalidParameter*>(&e)) {
      je["type"] = "InvalidParameter";
    } else if (dynamic_cast<const DegenerateError*>(&e)) {
      je["type"] = "DegenerateError";
    } else if (dynamic_cast<const Unclassifiable*>(&e)) {
      je["type"] = "Unclassifiable";
    }
    rep["error"] = je;
    st = dynamic_cast<const Unclassifiable*>(&e) ? Status::Inconclusive : Status::Fail;
    err << "error: " << e.what() << '\n';
  }

  rep["status"] = st == Status::Pass ? "pass" : st == Status::Fail ? "fail" : "inconclusive";
  if (!rep.contains("timings")) rep["timings"] = json::object();
  else {
    // keep timings last
    json t = rep["timings"];
    rep.erase("timings");
    rep["timings"] = t;
  }

  std::string text;
  if (csv && rc.command == "hscan" && rep.contains("hscan")) text = csv_hscan(rep["hscan"]);
  else if (csv && run.csv_tables_) text = csv_tables(*run.csv_tables_);
  else text = rep.dump(2) + "\n";

  if (rc.out) {
    std::ofstream f(*rc.out);
    if (!f) throw UsageError("--out: cannot write " + *rc.out);
    f << text;
    out << rc.command << ": " << rep["status"].get<std::string>() << " (report written to " << *rc.out
        << ")\n";
  } else {
    out << text;
  }
  return exit_code(st);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Verification tools for a family of quartic double solids and their small resolutions",
               "twistorlab"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Flat key = value file mirroring the long flags");

  app.add_option("--params", rc.params, "Surface parameters q0,q1,q2,a,b");
  app.add_option("--params-file", rc.params_file, "File with q0, q1, q2, a, b (key = value or JSON)");
  app.add_option("--target", rc.target, "Parameter search target a,b,lambda0 (default 1,1,2)");
  app.add_option("--lambda", rc.lambda, "Plane parameter lambda");
  app.add_option("--theta", rc.theta, "Conic phase theta");
  app.add_option("--alpha", rc.alpha, "Orbit conic parameter alpha");
  app.add_option("--resolution", rc.resolution, "Resolution choice ELL1,ELL2,ELL3");
  app.add_option("--family", rc.family, "Conic family: generic, special or orbit");
  app.add_option("--grid", rc.grid, "Critical-point scan grid size")
      ->check(CLI::Range(16, 10000000));
  app.add_option("--samples", rc.samples,
                 "theta/alpha samples (tangency), lambda samples per interval (hscan), q0 samples "
                 "(search-params), grid size (psi)")
      ->check(CLI::Range(16, 10000000));
  app.add_option("--tol", rc.tol, "Equality tolerance for zeros of Q^2 - f")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", rc.out, "Write the report to this path");
  app.add_option("--format", rc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--timings", rc.timings, "Record wall-clock timings (reports are then not reproducible)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "Check the admissibility conditions and list the singular points"},
      {"search-params", "Construct a valid parameter set with a double root at the target lambda0"},
      {"conic", "Build one touching conic and certify its contact and real points"},
      {"tangency", "Sweep touching conics over every interval"},
      {"hscan", "Tabulate h0..h3 over lambda"},
      {"critical", "Check critical-point counts and endpoint limits of h0..h3"},
      {"classify", "Assign conic types and eliminate resolutions"},
      {"psi", "Check monotonicity of the radial profile k(r)"},
      {"report", "Run validation, h-tables, classification and psi together"},
  };
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsage;
  }
  rc.command = app.get_subcommands().front()->get_name();

  try {
    return execute(rc, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return kUsage;
  }
}

}  // namespace tlab::cli
