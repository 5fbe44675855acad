// hgs: batch front end for heralding, optimization, mesh decomposition,
// Wigner grids and state validation. One command per run.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hgs/bdata.hpp"
#include "hgs/io.hpp"
#include "hgs/mesh.hpp"

namespace fs = std::filesystem;
using namespace hgs;

namespace {

struct Options {
  std::string input;
  std::string pattern;
  std::string heralded;
  std::string out;
  std::string grid;
  int cutoff = 0;
  std::uint64_t seed = 0;
  int restarts = 0;
  int pattern_cap = 0;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kNumericalHealth:
    case ErrorKind::kConvergence:
    case ErrorKind::kResource: return 3;
    case ErrorKind::kInfeasible: return 4;
    default: return 2;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kUsage, "cannot read input file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::kNumericalHealth, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::vector<int> parse_list(const std::string& s, const char* what) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::kUsage, std::string("--") + what + ": '" + item + "' is not an integer");
    }
  }
  return v;
}

std::pair<double, int> parse_grid(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(s);
    const double hw = std::stod(s.substr(0, colon));
    const int res = std::stoi(s.substr(colon + 1));
    if (!(hw > 0.0) || res < 2) throw std::invalid_argument(s);
    return {hw, res};
  } catch (const std::exception&) {
    fail(ErrorKind::kUsage, "--grid: expected halfwidth:resolution with halfwidth > 0 and resolution >= 2");
  }
}

fs::path output_dir(const Options& o) {
  std::string dir = o.out;
  if (dir.empty()) {
    const char* env = std::getenv("HGS_OUTPUT_DIR");
    dir = env ? env : ".";
  }
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kUsage, "cannot write '" + path.string() + "'");
  f << text;
}

std::string render(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g\n", x);
  return buf;
}

Json meta(const std::string& command, const std::string& input_text, const Json& tolerances) {
  Json m;
  m["tool"] = "hgs";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["input_sha256"] = sha256_hex(input_text);
  m["tolerances"] = tolerances;
  return m;
}

// Herald-style inputs: a circuit or a state, plus heralded modes and pattern.
struct HeraldInput {
  GaussianState state;
  std::vector<int> heralded;
  DetectionPattern pattern;
};

HeraldInput herald_input(const Json& doc, const Options& o) {
  require_keys(doc, {"circuit", "state", "heralded", "pattern"}, "input");
  if (doc.contains("circuit") == doc.contains("state"))
    fail(ErrorKind::kStructural, "input: give exactly one of 'circuit' or 'state'");
  HeraldInput h;
  h.state = doc.contains("circuit") ? state_from_circuit(circuit_from_json(doc["circuit"]))
                                    : state_from_json(doc["state"]);
  if (!o.heralded.empty()) h.heralded = parse_list(o.heralded, "heralded");
  else if (doc.contains("heralded")) {
    for (const auto& v : doc["heralded"]) {
      if (!v.is_number_integer()) fail(ErrorKind::kStructural, "input.heralded: expected integers");
      h.heralded.push_back(v.get<int>());
    }
  } else {
    h.heralded = {0};
  }
  const auto measured = complement_modes(h.state.n_modes, h.heralded);
  if (!o.pattern.empty()) {
    h.pattern = DetectionPattern{measured, parse_list(o.pattern, "pattern")};
    if (h.pattern.counts.size() != measured.size())
      fail(ErrorKind::kUsage, "--pattern needs one count per measured mode");
  } else if (doc.contains("pattern")) {
    h.pattern = pattern_from_json(doc["pattern"]);
  } else {
    fail(ErrorKind::kUsage, "no detection pattern given");
  }
  return h;
}

int run_herald(const Options& o, bool wigner_only) {
  const std::string text = read_file(o.input);
  const HeraldInput in = herald_input(parse_document(text), o);
  const fs::path dir = output_dir(o);
  Json tol;
  tol["gram_tolerance"] = HeraldOptions{}.gram_tolerance;
  tol["order_cap"] = HeraldOptions{}.order_cap;
  const Json m = meta(wigner_only ? "wigner" : "herald", text, tol);

  if (!wigner_only) {
    const HeraldedState hs = herald(in.state, in.pattern, in.heralded);
    Json doc;
    doc["meta"] = m;
    doc["pattern"] = to_json(in.pattern);
    doc["state"] = to_json(hs);
    if (o.cutoff > 0) {
      // Output state in the Fock basis with the gate applied.
      const FockVector v = FockVector::from_map(hs.coefficients, in.pattern.total() + 1);
      doc["fock_state"] = to_json(apply_gate(hs.gate, v, o.cutoff));
    }
    write_text(dir / "herald.json", dump_document(doc));
    write_text(dir / "probability.txt", render(hs.probability));
  }
  if (wigner_only || !o.grid.empty()) {
    if (o.grid.empty()) fail(ErrorKind::kUsage, "wigner needs --grid halfwidth:resolution");
    const auto [hw, res] = parse_grid(o.grid);
    const WignerGrid g = wigner(in.state, in.pattern, in.heralded,
                                uniform_axes(static_cast<int>(in.heralded.size()), hw, res));
    std::vector<std::string> lines = {"tool hgs " + std::string(kToolVersion),
                                      "input_sha256 " + sha256_hex(text),
                                      "convention W(alpha) = 2^M Wbar(q, p), alpha = (q + i p)/sqrt(2)",
                                      "normalization " + render(g.normalization).substr(0, render(g.normalization).size() - 1)};
    write_text(dir / "wigner.tsv", wigner_to_text(g, lines));
  }
  return 0;
}

int run_optimize(const Options& o) {
  const std::string text = read_file(o.input);
  OptimizationProblem pr = problem_from_json(parse_document(text));
  if (o.seed) pr.config.seed = o.seed;
  if (o.restarts) pr.config.restarts = o.restarts;
  if (o.pattern_cap) pr.config.pattern_cap = o.pattern_cap;
  if (o.cutoff) pr.config.fidelity_cutoff = o.cutoff;
  if (!o.heralded.empty()) pr.heralded = parse_list(o.heralded, "heralded");
  if (!o.pattern.empty()) {
    std::vector<int> heralded = pr.heralded;
    if (heralded.empty())
      for (int k = 0; k < pr.target.coefficients.n_modes(); ++k) heralded.push_back(k);
    const auto measured = complement_modes(pr.n_modes, heralded);
    pr.patterns = {DetectionPattern{measured, parse_list(o.pattern, "pattern")}};
    if (pr.patterns[0].counts.size() != measured.size())
      fail(ErrorKind::kUsage, "--pattern needs one count per measured mode");
  }
  const OptimizationResult r = optimize(pr);
  Json tol;
  tol["feasibility_tolerance"] = pr.config.feasibility_tolerance;
  tol["penalty_weight"] = pr.config.penalty_weight;
  tol["physicality_margin"] = 1e-6;
  tol["fidelity_cutoff"] = pr.config.fidelity_cutoff;
  Json doc;
  doc["meta"] = meta("optimize", text, tol);
  doc["meta"]["seed"] = pr.config.seed;
  doc["meta"]["restarts"] = pr.config.restarts;
  doc["meta"]["pattern_cap"] = pr.config.pattern_cap;
  doc["result"] = to_json(r);
  const fs::path dir = output_dir(o);
  write_text(dir / "optimize.json", dump_document(doc));
  if (!r.feasible) {
    std::cerr << "hgs: infeasible: best infidelity " << r.infidelity << "\n";
    return 4;
  }
  write_text(dir / "probability.txt", render(r.probability));
  return 0;
}

int run_decompose(const Options& o) {
  const std::string text = read_file(o.input);
  const Json in = parse_document(text);
  require_keys(in, {"unitary", "circuit"}, "input");
  CMat u;
  if (in.contains("unitary")) u = matrix_from_json(in["unitary"], "input.unitary");
  else if (in.contains("circuit")) u = circuit_from_json(in["circuit"]).unitary;
  else fail(ErrorKind::kStructural, "input: give 'unitary' or 'circuit'");
  const Mesh mesh = decompose_interferometer(u);
  Json tol;
  tol["unitarity"] = 1e-9;
  Json doc;
  doc["meta"] = meta("decompose", text, tol);
  doc["mesh"] = to_json(mesh);
  doc["reconstruction_error"] = (recompose(mesh) - u).cwiseAbs().maxCoeff();
  write_text(output_dir(o) / "mesh.json", dump_document(doc));
  return 0;
}

int run_validate(const Options& o) {
  const std::string text = read_file(o.input);
  const Json in = parse_document(text);
  require_keys(in, {"state", "circuit"}, "input");
  GaussianState st;
  if (in.contains("state")) st = state_from_json(in["state"]);
  else if (in.contains("circuit")) st = state_from_circuit(circuit_from_json(in["circuit"]));
  else fail(ErrorKind::kStructural, "input: give 'state' or 'circuit'");
  const StateDiagnostic d = validate_state(st);
  Json tol;
  tol["min_eigenvalue"] = -1e-9;
  Json doc;
  doc["meta"] = meta("validate", text, tol);
  doc["diagnostic"] = to_json(d);
  doc["pure"] = d.valid && is_pure(st);
  write_text(output_dir(o) / "validation.json", dump_document(doc));
  if (!d.valid) {
    std::cerr << "hgs: invalid state: " << d.message << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded non-Gaussian state preparation from Gaussian states"};
  app.require_subcommand(1, 1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--input", o.input, "input document (JSON)")->required();
    c->add_option("--out", o.out, "output directory (default $HGS_OUTPUT_DIR or .)");
  };
  auto* herald_cmd = app.add_subcommand("herald", "herald a circuit or state with a detection pattern");
  auto* opt_cmd = app.add_subcommand("optimize", "search for the most probable heralding setup of a target");
  auto* dec_cmd = app.add_subcommand("decompose", "beam-splitter mesh of an interferometer");
  auto* wig_cmd = app.add_subcommand("wigner", "Wigner function grid of a heralded state");
  auto* val_cmd = app.add_subcommand("validate", "physicality diagnostic of a Gaussian state");
  for (auto* c : {herald_cmd, opt_cmd, dec_cmd, wig_cmd, val_cmd}) common(c);
  for (auto* c : {herald_cmd, opt_cmd, wig_cmd}) {
    c->add_option("--pattern", o.pattern, "photon counts of the measured modes, \"n1,n2,...\"");
    c->add_option("--heralded", o.heralded, "heralded modes, \"i,j,...\"");
  }
  for (auto* c : {herald_cmd, wig_cmd}) c->add_option("--grid", o.grid, "Wigner grid \"halfwidth:resolution\"");
  herald_cmd->add_option("--cutoff", o.cutoff, "also emit the output state in a Fock box of this cutoff");
  opt_cmd->add_option("--cutoff", o.cutoff, "Fock cutoff for gated fidelity checks");
  opt_cmd->add_option("--seed", o.seed, "random seed");
  opt_cmd->add_option("--restarts", o.restarts, "multistart count");
  opt_cmd->add_option("--pattern-cap", o.pattern_cap, "largest number of candidate patterns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*herald_cmd) return run_herald(o, false);
    if (*wig_cmd) return run_herald(o, true);
    if (*opt_cmd) return run_optimize(o);
    if (*dec_cmd) return run_decompose(o);
    if (*val_cmd) return run_validate(o);
  } catch (const Error& e) {
    std::cerr << "hgs: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "hgs: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    std::cerr << "hgs: out of memory\n";
    return 3;
  }
  return 2;
}
