#include "hgs/io.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "hgs/targets.hpp"

namespace hgs {

namespace {

std::string number(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::kNumericalHealth, "non-finite number in output document");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void dump(const Json& j, std::string& out, int indent) {
  const std::string pad(indent, ' '), inner(indent + 2, ' ');
  if (j.is_number_float()) {
    out += number(j.get<double>());
  } else if (scalar(j)) {
    out += j.dump();
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return scalar(e); });
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += flat ? (i ? ", " : "") : (i ? ",\n" : "\n") + inner;
      dump(j[i], out, indent + 2);
    }
    out += flat ? "]" : "\n" + pad + "]";
  } else {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      out += (first ? "\n" : ",\n") + inner + Json(it.key()).dump() + ": ";
      dump(it.value(), out, indent + 2);
      first = false;
    }
    out += "\n" + pad + "}";
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::kStructural, where + ": missing field '" + key + "'");
  return j.at(key);
}

double real_from(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(ErrorKind::kStructural, where + ": expected a number");
  return j.get<double>();
}

int int_from(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(ErrorKind::kStructural, where + ": expected an integer");
  return j.get<int>();
}

std::vector<int> ints_from(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::kStructural, where + ": expected an array of integers");
  std::vector<int> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(int_from(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

Json multi_index_entries(const CoefficientMap& c) {
  Json a = Json::array();
  for (const auto& [n, v] : c) {
    Json e;
    e["multi_index"] = n;
    e["re"] = v.real();
    e["im"] = v.imag();
    a.push_back(e);
  }
  return a;
}

}  // namespace

std::string dump_document(const Json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kStructural, std::string("malformed document: ") + e.what());
  }
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::kStructural, where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) fail(ErrorKind::kStructural, where + ": unknown field '" + it.key() + "'");
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

Json to_json(const CMat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(CVec(m.row(i).transpose())));
  return a;
}

Json to_json(const RVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

cplx complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::kStructural, where + ": expected a number or [re, im]");
}

CVec vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::kStructural, where + ": expected an array");
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

CMat matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::kStructural, where + ": expected an array of rows");
  const std::size_t n = j.size();
  CMat m(n, n == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const CVec row = vector_from_json(j[i], w);
    if (row.size() != m.cols()) fail(ErrorKind::kStructural, w + ": ragged matrix row");
    m.row(i) = row.transpose();
  }
  return m;
}

Json to_json(const CircuitSpec& c) {
  Json j;
  j["n_modes"] = c.n_modes;
  j["squeezings"] = to_json(c.squeezings);
  j["displacements"] = to_json(c.displacements);
  j["unitary"] = to_json(c.unitary);
  return j;
}

CircuitSpec circuit_from_json(const Json& j) {
  require_keys(j, {"n_modes", "squeezings", "displacements", "unitary"}, "circuit");
  CircuitSpec c;
  c.n_modes = int_from(field(j, "n_modes", "circuit"), "circuit.n_modes");
  c.squeezings = vector_from_json(field(j, "squeezings", "circuit"), "circuit.squeezings");
  c.displacements = j.contains("displacements") ? vector_from_json(j["displacements"], "circuit.displacements")
                                                : CVec::Zero(c.n_modes);
  c.unitary = j.contains("unitary") ? matrix_from_json(j["unitary"], "circuit.unitary")
                                    : CMat::Identity(c.n_modes, c.n_modes);
  check_circuit(c);
  return c;
}

Json to_json(const GaussianState& s) {
  Json j;
  j["n_modes"] = s.n_modes;
  j["basis"] = s.basis == Basis::kComplex ? "complex" : "real";
  j["mean"] = to_json(s.mean);
  j["cov"] = to_json(s.cov);
  return j;
}

GaussianState state_from_json(const Json& j) {
  require_keys(j, {"n_modes", "basis", "mean", "cov"}, "state");
  Basis basis = Basis::kComplex;
  if (j.contains("basis")) {
    const std::string b = j["basis"].is_string() ? j["basis"].get<std::string>() : "";
    if (b == "real") basis = Basis::kReal;
    else if (b != "complex") fail(ErrorKind::kStructural, "state.basis: expected \"complex\" or \"real\"");
  }
  const CMat cov = matrix_from_json(field(j, "cov", "state"), "state.cov");
  const CVec mean = j.contains("mean") ? vector_from_json(j["mean"], "state.mean") : CVec::Zero(cov.rows());
  GaussianState s = make_state(mean, cov, basis);
  if (j.contains("n_modes") && int_from(j["n_modes"], "state.n_modes") != s.n_modes)
    fail(ErrorKind::kStructural, "state.n_modes disagrees with the covariance size");
  return s;
}

Json to_json(const Gate& g) {
  Json j;
  j["unitary"] = to_json(g.k);
  j["squeezings"] = to_json(g.zeta);
  j["displacement"] = to_json(g.d);
  return j;
}

Gate gate_from_json(const Json& j, int m) {
  require_keys(j, {"unitary", "squeezings", "displacement"}, "gate");
  Gate g = Gate::identity(m);
  if (j.contains("unitary")) g.k = matrix_from_json(j["unitary"], "gate.unitary");
  if (j.contains("squeezings")) g.zeta = vector_from_json(j["squeezings"], "gate.squeezings");
  if (j.contains("displacement")) g.d = vector_from_json(j["displacement"], "gate.displacement");
  if (g.k.rows() != m || g.k.cols() != m || g.zeta.size() != m || g.d.size() != m)
    fail(ErrorKind::kStructural, "gate: sizes must match the heralded mode count");
  if (unitarity_error(g.k) > 1e-9) fail(ErrorKind::kStructural, "gate.unitary is not unitary");
  return g;
}

Json to_json(const DetectionPattern& p) {
  Json j;
  j["modes"] = p.modes;
  j["counts"] = p.counts;
  return j;
}

DetectionPattern pattern_from_json(const Json& j) {
  require_keys(j, {"modes", "counts"}, "pattern");
  DetectionPattern p{ints_from(field(j, "modes", "pattern"), "pattern.modes"),
                     ints_from(field(j, "counts", "pattern"), "pattern.counts")};
  if (p.modes.size() != p.counts.size()) fail(ErrorKind::kStructural, "pattern: modes and counts differ in length");
  return p;
}

Json to_json(const CoefficientMap& c) { return multi_index_entries(c); }

Json to_json(const FockVector& v) {
  Json j;
  j["modes"] = v.n_modes();
  j["cutoff"] = v.cutoffs.empty() ? 0 : v.cutoffs[0];
  j["coefficients"] = multi_index_entries(v.to_map(0.0));
  return j;
}

FockVector fock_from_json(const Json& j) {
  require_keys(j, {"modes", "cutoff", "coefficients"}, "fock");
  const int m = int_from(field(j, "modes", "fock"), "fock.modes");
  if (m < 1) fail(ErrorKind::kStructural, "fock.modes must be positive");
  const Json& list = field(j, "coefficients", "fock");
  if (!list.is_array()) fail(ErrorKind::kStructural, "fock.coefficients: expected an array");
  CoefficientMap c;
  int cutoff = 1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string w = "fock.coefficients[" + std::to_string(i) + "]";
    require_keys(list[i], {"multi_index", "re", "im"}, w);
    const auto n = ints_from(field(list[i], "multi_index", w), w + ".multi_index");
    if (static_cast<int>(n.size()) != m) fail(ErrorKind::kStructural, w + ": multi_index length differs from modes");
    for (int k : n) {
      if (k < 0) fail(ErrorKind::kStructural, w + ": negative photon number");
      cutoff = std::max(cutoff, k + 1);
    }
    const double im = list[i].contains("im") ? real_from(list[i]["im"], w + ".im") : 0.0;
    c[n] += cplx(real_from(field(list[i], "re", w), w + ".re"), im);
  }
  if (j.contains("cutoff")) {
    const int want = int_from(j["cutoff"], "fock.cutoff");
    if (want < cutoff) fail(ErrorKind::kStructural, "fock.cutoff is smaller than a listed multi_index");
    cutoff = want;
  }
  return FockVector::from_map(c, cutoff);
}

Json to_json(const Health& h) {
  Json j;
  j["worst_rcond"] = h.worst_rcond;
  j["max_term"] = h.max_term;
  j["warnings"] = h.warnings;
  return j;
}

Json to_json(const HeraldedState& h) {
  Json j;
  j["heralded"] = h.heralded;
  j["gate"] = to_json(h.gate);
  j["coefficients"] = to_json(h.coefficients);
  j["probability"] = h.probability;
  j["normalized"] = h.normalized;
  j["health"] = to_json(h.health);
  return j;
}

Json to_json(const Mesh& m) {
  Json j;
  j["n_modes"] = m.n_modes;
  Json el = Json::array();
  for (const auto& e : m.elements) {
    Json x;
    x["mode"] = e.mode;
    x["theta"] = e.theta;
    x["phi"] = e.phi;
    x["transmissivity"] = e.transmissivity();
    el.push_back(x);
  }
  j["elements"] = el;
  j["output_phases"] = to_json(m.output_phases);
  return j;
}

Json to_json(const StateDiagnostic& d) {
  Json j;
  j["valid"] = d.valid;
  j["min_eigenvalue"] = d.min_eigenvalue;
  j["purity"] = d.purity;
  j["message"] = d.message;
  return j;
}

Json to_json(const OptimizationResult& r) {
  Json j;
  j["feasible"] = r.feasible;
  j["strategy"] = r.strategy;
  j["heralded"] = r.heralded;
  j["pattern"] = to_json(r.pattern);
  j["probability"] = r.probability;
  j["probability_check"] = r.probability_check;
  j["fidelity"] = r.fidelity;
  j["infidelity"] = r.infidelity;
  if (r.feasible) {
    j["b"] = to_json(r.b);
    j["w"] = to_json(r.w);
    j["circuit"] = to_json(r.circuit);
    j["mesh"] = to_json(r.mesh);
  }
  Json tr = Json::array();
  for (const auto& t : r.trace) {
    Json x;
    x["pattern"] = t.pattern;
    x["restart"] = t.restart;
    x["probability"] = t.probability;
    x["infidelity"] = t.infidelity;
    x["feasible"] = t.feasible;
    tr.push_back(x);
  }
  j["trace"] = tr;
  return j;
}

OptimizationProblem problem_from_json(const Json& j) {
  require_keys(j, {"target", "n_modes", "heralded", "patterns", "mode", "fidelity_floor", "config"}, "problem");
  OptimizationProblem pr;
  const Json& t = field(j, "target", "problem");
  if (t.contains("kind")) {
    require_keys(t, {"kind", "n", "modes", "a", "gate"}, "target");
    const std::string kind = t["kind"].is_string() ? t["kind"].get<std::string>() : "";
    if (kind == "noon") {
      pr.target.coefficients = noon_state(int_from(field(t, "n", "target"), "target.n"));
    } else if (kind == "w") {
      pr.target.coefficients = w_state(int_from(field(t, "modes", "target"), "target.modes"));
    } else if (kind == "cubic") {
      pr.target.coefficients = cubic_state(real_from(field(t, "a", "target"), "target.a"));
    } else {
      fail(ErrorKind::kStructural, "target.kind: expected \"noon\", \"w\" or \"cubic\"");
    }
  } else {
    require_keys(t, {"modes", "cutoff", "coefficients", "gate"}, "target");
    Json f = t;
    f.erase("gate");
    pr.target.coefficients = fock_from_json(f);
    const double n = pr.target.coefficients.norm();
    if (n == 0.0) fail(ErrorKind::kStructural, "target has no nonzero coefficient");
    pr.target.coefficients.data /= n;
  }
  const int m = pr.target.coefficients.n_modes();
  pr.target.gate = t.contains("gate") ? gate_from_json(t["gate"], m) : Gate::identity(m);
  pr.n_modes = int_from(field(j, "n_modes", "problem"), "problem.n_modes");
  if (j.contains("heralded")) pr.heralded = ints_from(j["heralded"], "problem.heralded");
  if (j.contains("patterns")) {
    if (!j["patterns"].is_array()) fail(ErrorKind::kStructural, "problem.patterns: expected an array");
    for (const auto& p : j["patterns"]) pr.patterns.push_back(pattern_from_json(p));
  }
  if (j.contains("mode")) {
    const std::string mode = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
    if (mode == "fidelity-floor") pr.mode = ConstraintMode::kFidelityFloor;
    else if (mode != "exact") fail(ErrorKind::kStructural, "problem.mode: expected \"exact\" or \"fidelity-floor\"");
  }
  if (j.contains("fidelity_floor")) pr.fidelity_floor = real_from(j["fidelity_floor"], "problem.fidelity_floor");
  if (j.contains("config")) {
    const Json& c = j["config"];
    require_keys(c,
                 {"restarts", "max_iterations", "seed", "penalty_weight", "pattern_cap", "strategy",
                  "feasibility_tolerance", "fidelity_cutoff"},
                 "config");
    auto& cfg = pr.config;
    if (c.contains("restarts")) cfg.restarts = int_from(c["restarts"], "config.restarts");
    if (c.contains("max_iterations")) cfg.max_iterations = int_from(c["max_iterations"], "config.max_iterations");
    if (c.contains("seed")) {
      if (!c["seed"].is_number_unsigned()) fail(ErrorKind::kStructural, "config.seed: expected a nonnegative integer");
      cfg.seed = c["seed"].get<std::uint64_t>();
    }
    if (c.contains("penalty_weight")) cfg.penalty_weight = real_from(c["penalty_weight"], "config.penalty_weight");
    if (c.contains("pattern_cap")) cfg.pattern_cap = int_from(c["pattern_cap"], "config.pattern_cap");
    if (c.contains("feasibility_tolerance"))
      cfg.feasibility_tolerance = real_from(c["feasibility_tolerance"], "config.feasibility_tolerance");
    if (c.contains("fidelity_cutoff")) cfg.fidelity_cutoff = int_from(c["fidelity_cutoff"], "config.fidelity_cutoff");
    if (c.contains("strategy")) {
      const std::string s = c["strategy"].is_string() ? c["strategy"].get<std::string>() : "";
      if (s == "auto") cfg.strategy = Strategy::kAuto;
      else if (s == "closed-form") cfg.strategy = Strategy::kClosedForm;
      else if (s == "elimination") cfg.strategy = Strategy::kElimination;
      else if (s == "penalty") cfg.strategy = Strategy::kPenalty;
      else fail(ErrorKind::kStructural, "config.strategy: unknown value");
    }
  }
  return pr;
}

std::string wigner_to_text(const WignerGrid& g, const std::vector<std::string>& meta) {
  std::ostringstream os;
  for (const auto& line : meta) os << "# " << line << "\n";
  const int m = g.n_modes;
  for (int k = 0; k < m; ++k) os << "q" << k + 1 << "\t";
  for (int k = 0; k < m; ++k) os << "p" << k + 1 << "\t";
  os << "W\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (double c : g.coordinates(i)) os << number(c) << "\t";
    os << number(g.values[i]) << "\n";
  }
  return os.str();
}

}  // namespace hgs
