#include "hgs/optimize.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <numeric>
#include <random>

#include "hgs/bdata.hpp"
#include "hgs/closed_form.hpp"
#include "hgs/constraints.hpp"
#include "hgs/minimize.hpp"
#include "hgs/takagi.hpp"
#include "hgs/targets.hpp"

namespace hgs {

namespace {

constexpr double kBarrier = 1e20;  // above any penalized objective value
constexpr double kSigmaMax = 1.0 - 1e-6;

// Heralded modes first, then the measured modes in ascending order.
struct Layout {
  int n = 0, m = 0, d = 0;
  std::vector<int> heralded, detected, order;
};

Layout make_layout(int n, const std::vector<int>& heralded) {
  Layout l;
  l.n = n;
  l.heralded = heralded;
  l.detected = complement_modes(n, heralded);
  l.m = static_cast<int>(heralded.size());
  l.d = static_cast<int>(l.detected.size());
  l.order = heralded;
  l.order.insert(l.order.end(), l.detected.begin(), l.detected.end());
  return l;
}

std::pair<CMat, CVec> to_original(const Layout& l, const CMat& bp, const CVec& wp) {
  CMat b(l.n, l.n);
  CVec w(l.n);
  for (int i = 0; i < l.n; ++i) {
    w(l.order[i]) = wp(i);
    for (int j = 0; j < l.n; ++j) b(l.order[i], l.order[j]) = bp(i, j);
  }
  return {b, w};
}

std::vector<int> counts_for(const Layout& l, const DetectionPattern& p) {
  std::vector<int> c(l.d, -1);
  for (std::size_t i = 0; i < p.modes.size(); ++i) {
    const auto it = std::find(l.detected.begin(), l.detected.end(), p.modes[i]);
    if (it == l.detected.end()) fail(ErrorKind::kUsage, "pattern names a mode that is not measured");
    c[it - l.detected.begin()] = p.counts[i];
  }
  for (int x : c)
    if (x < 0) fail(ErrorKind::kUsage, "pattern does not cover every measured mode");
  return c;
}

CVec complex_from(const RVec& x, int offset, int n) {
  CVec c(n);
  for (int i = 0; i < n; ++i) c(i) = cplx(x(offset + 2 * i), x(offset + 2 * i + 1));
  return c;
}

bool gate_is_identity(const Gate& g) { return g.zeta.norm() + g.d.norm() < 1e-14; }

bool same_gate(const Gate& a, const Gate& b) {
  if (a.m() != b.m()) return false;
  if (gate_is_identity(a) && gate_is_identity(b)) return true;
  const GaussianUnitary ua = gate_unitary(a), ub = gate_unitary(b);
  return (ua.s - ub.s).norm() + (ua.d - ub.d).norm() < 1e-10;
}

double total_squeezing(const CMat& b) {
  double s = 0.0;
  for (double l : takagi(b).lambda) s += std::atanh(std::min(l, kSigmaMax));
  return s;
}

// A gate-free candidate in the heralded-first layout.
struct Candidate {
  bool valid = false;
  CMat bp;
  CVec wp;
  double probability = 0.0;
  double infidelity = 1.0;
};

// Probability and infidelity of a gate-free state against target amplitudes
// t over multi_indices(m, n_T).
Candidate evaluate(const Layout& l, const CMat& bp, const CVec& wp, const std::vector<int>& counts, const CVec& t) {
  Candidate c;
  c.bp = bp;
  c.wp = wp;
  if (max_singular_value(bp) >= kSigmaMax) return c;
  std::vector<int> herald_pos(l.m);
  std::iota(herald_pos.begin(), herald_pos.end(), 0);
  try {
    const BData bd = b_data_from_pure(bp, wp, herald_pos);
    c.probability = probability_from_bdata(bd, counts);
    const CVec a = heralded_amplitudes(bd, counts);
    const double na = a.squaredNorm();
    c.infidelity = na > 0.0 ? std::max(0.0, 1.0 - std::norm(t.dot(a)) / na) : 1.0;
    c.valid = std::isfinite(c.probability) && std::isfinite(c.infidelity);
  } catch (const Error&) {
    c.valid = false;
  }
  return c;
}

// ---- general parameterization: B_hd, upper B_dd, w_d --------------------

int penalty_dim(const Layout& l) { return 2 * (l.m * l.d + l.d * (l.d + 1) / 2 + l.d); }

std::pair<CMat, CVec> penalty_state(const Layout& l, const RVec& x) {
  CMat b = CMat::Zero(l.n, l.n);
  CVec w = CVec::Zero(l.n);
  int o = 0;
  for (int i = 0; i < l.m; ++i)
    for (int j = 0; j < l.d; ++j, o += 2) b(i, l.m + j) = b(l.m + j, i) = cplx(x(o), x(o + 1));
  for (int i = 0; i < l.d; ++i)
    for (int j = i; j < l.d; ++j, o += 2) b(l.m + i, l.m + j) = b(l.m + j, l.m + i) = cplx(x(o), x(o + 1));
  for (int j = 0; j < l.d; ++j, o += 2) w(l.m + j) = cplx(x(o), x(o + 1));
  return {b, w};
}

// Component of the normalized amplitudes orthogonal to the target; its
// squared norm is the infidelity.
RVec orthogonal_residual(const Layout& l, const RVec& x, const std::vector<int>& counts, const CVec& t, bool& ok) {
  const auto [b, w] = penalty_state(l, x);
  ok = false;
  RVec r = RVec::Zero(2 * t.size());
  if (max_singular_value(b) >= kSigmaMax) return r;
  std::vector<int> hp(l.m);
  std::iota(hp.begin(), hp.end(), 0);
  try {
    CVec a = heralded_amplitudes(b_data_from_pure(b, w, hp), counts);
    if (a.norm() == 0.0) return r;
    a /= a.norm();
    const CVec o = a - t * t.dot(a);
    r << o.real(), o.imag();
    ok = true;
  } catch (const Error&) {
  }
  return r;
}

// Gauss-Newton with minimum-norm steps and a finite-difference Jacobian.
void project_penalty(const Layout& l, RVec& x, const std::vector<int>& counts, const CVec& t, int iters) {
  bool ok = false;
  RVec r = orthogonal_residual(l, x, counts, t, ok);
  if (!ok) return;
  for (int it = 0; it < iters && r.norm() > 1e-13; ++it) {
    RMat j(r.size(), x.size());
    for (int k = 0; k < x.size(); ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(k)));
      RVec xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      bool a = false, b = false;
      const RVec rp = orthogonal_residual(l, xp, counts, t, a);
      const RVec rm = orthogonal_residual(l, xm, counts, t, b);
      if (!a || !b) return;
      j.col(k) = (rp - rm) / (2 * h);
    }
    const RVec step = j.completeOrthogonalDecomposition().solve(r);
    double s = 1.0;
    bool moved = false;
    for (int back = 0; back < 30; ++back, s *= 0.5) {
      const RVec trial = x - s * step;
      const RVec rt = orthogonal_residual(l, trial, counts, t, ok);
      if (ok && rt.norm() < r.norm()) {
        x = trial;
        r = rt;
        moved = true;
        break;
      }
    }
    if (!moved) return;
  }
}

Candidate penalty_restart(const OptimizationProblem& pr, const Layout& l, const std::vector<int>& counts, const CVec& t,
                          std::mt19937_64& rng) {
  const int dim = penalty_dim(l);
  std::normal_distribution<double> g(0.0, 0.3);
  RVec x(dim);
  for (int k = 0; k < dim; ++k) x(k) = g(rng);
  // Pull the starting B inside the physical region.
  const double s0 = max_singular_value(penalty_state(l, x).first);
  if (s0 > 0.8) x.head(dim - 2 * l.d) *= 0.8 / s0;
  const bool exact = pr.mode == ConstraintMode::kExact;
  const double floor = pr.fidelity_floor;
  double mu = pr.config.penalty_weight;
  // Linear in the floor gap so the penalty is exact for a large weight.
  auto violation = [&](double infid) { return exact ? infid : std::max(0.0, infid - (1.0 - floor)); };
  auto objective = [&](const RVec& y) {
    const auto [b, w] = penalty_state(l, y);
    const Candidate c = evaluate(l, b, w, counts, t);
    if (!c.valid) return kBarrier;
    return -c.probability + mu * violation(c.infidelity);
  };
  auto feasible = [&](const Candidate& c) {
    return c.valid && (exact ? c.infidelity <= pr.config.feasibility_tolerance
                             : c.infidelity <= 1.0 - floor + pr.config.feasibility_tolerance);
  };
  const RVec step = RVec::Constant(dim, 0.1);
  for (int round = 0; round < 8; ++round) {
    x = nelder_mead(objective, x, step, pr.config.max_iterations, 1e-10).x;
    const auto [b, w] = penalty_state(l, x);
    if (feasible(evaluate(l, b, w, counts, t))) break;
    mu *= 2.0;  // stagnation: tighten the penalty
  }
  if (exact) {
    project_penalty(l, x, counts, t, 40);
    // Short refine at a much stiffer weight, then project again.
    mu = std::max(mu, pr.config.penalty_weight) * 1e3;
    x = nelder_mead(objective, x, RVec::Constant(dim, 1e-3), pr.config.max_iterations, 1e-12).x;
    project_penalty(l, x, counts, t, 40);
  }
  const auto [b, w] = penalty_state(l, x);
  Candidate c = evaluate(l, b, w, counts, t);
  c.valid = feasible(c);
  return c;
}

// ---- elimination for one heralded mode ----------------------------------

Candidate elimination_restart(const OptimizationProblem& pr, const Layout& l, const RelationSet& rel,
                              const std::vector<int>& counts, const CVec& t, const CVec& ratio_target,
                              std::mt19937_64& rng) {
  const int d = l.d, nv = rel.n_vars;
  const int dim = 2 * d + 2 * nv;
  std::normal_distribution<double> g(0.0, 0.4);
  RVec x(dim);
  for (int k = 0; k < dim; ++k) x(k) = g(rng);
  for (int shrink = 0; shrink < 40; ++shrink) {
    CVec z = complex_from(x, 2 * d, nv);
    project_onto_relations(rel, ratio_target, z, 40);
    if (max_singular_value(gate_free_state(complex_from(x, 0, d), z).first) < 0.8) break;
    x.head(2 * d) *= 0.8;  // smaller kappa keeps B physical
  }

  auto build = [&](const RVec& y, CVec& z) -> Candidate {
    z = complex_from(y, 2 * d, nv);
    const double res = project_onto_relations(rel, ratio_target, z, 40);
    Candidate c;
    if (!(res < 1e-10)) return c;
    const auto [b, w] = gate_free_state(complex_from(y, 0, d), z);
    return evaluate(l, b, w, counts, t);
  };
  auto objective = [&](const RVec& y) {
    CVec z;
    const Candidate c = build(y, z);
    return c.valid ? -c.probability : kBarrier;
  };
  const auto r = nelder_mead(objective, x, RVec::Constant(dim, 0.1), pr.config.max_iterations, 1e-11);
  CVec z;
  Candidate c = build(r.x, z);
  c.valid = c.valid && c.infidelity <= pr.config.feasibility_tolerance;
  return c;
}

// ---- closed-form families ------------------------------------------------

struct FamilyMatch {
  Family family;
  int w_modes;
};

std::optional<FamilyMatch> detect_family(const OptimizationProblem& pr) {
  const int m = static_cast<int>(pr.heralded.size());
  for (int i = 0; i < m; ++i)
    if (pr.heralded[i] != i) return std::nullopt;
  const FockVector& c = pr.target.coefficients;
  if (m == 2) {
    const Family fam[] = {Family::kNoon2, Family::kNoon3, Family::kNoon4};
    for (int n = 2; n <= 4; ++n)
      if (pr.n_modes == n + 2 && fidelity(c, noon_state(n, n + 1)) > 1.0 - 1e-12) return FamilyMatch{fam[n - 2], 0};
  }
  if (m >= 2 && pr.n_modes == m + 1 && fidelity(c, w_state(m)) > 1.0 - 1e-12)
    return FamilyMatch{Family::kWState, pr.n_modes};
  return std::nullopt;
}

CVec target_amplitudes(const FockVector& v, int m, int nt) {
  const auto idx = multi_indices(m, nt);
  CVec t(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) t(i) = v.contains(idx[i]) ? v.at(idx[i]) : cplx(0.0);
  return t;
}

}  // namespace

int target_photon_number(const FockVector& v, double tol) {
  int best = -1;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v.data(i)) > tol) {
      const auto n = v.multi_index(i);
      best = std::max(best, std::accumulate(n.begin(), n.end(), 0));
    }
  return best;
}

std::vector<DetectionPattern> candidate_patterns(int total, const std::vector<int>& modes, int cap) {
  std::vector<DetectionPattern> out;
  const int d = static_cast<int>(modes.size());
  if (d == 0) return out;
  std::vector<int> c(d, 0);
  // Reverse-lexicographic compositions, largest count in the first mode first.
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (static_cast<int>(out.size()) >= cap) return;
    if (i == d - 1) {
      c[i] = left;
      out.push_back(DetectionPattern{modes, c});
      return;
    }
    for (int k = left; k >= 0; --k) {
      c[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, total);
  return out;
}

void finish_result(const OptimizationProblem& pr, const CMat& b0, const CVec& w0, OptimizationResult& out) {
  const std::vector<int> detected = complement_modes(pr.n_modes, out.heralded);
  GaussianState st = state_from_b(b0, w0);
  if (!gate_is_identity(pr.target.gate))
    st = absorb_unitary(st, out.heralded, detected, gate_unitary(pr.target.gate));
  out.b = b_from_state(st);
  out.w = w_from_state(st);
  out.circuit = circuit_from_b(out.b, out.w);
  out.mesh = decompose_interferometer(out.circuit.unitary);
  const GaussianState rebuilt = state_from_circuit(out.circuit);
  const HeraldedState hs = herald(rebuilt, out.pattern, out.heralded);
  out.probability_check = hs.probability;
  const FockVector got = FockVector::from_map(hs.coefficients, out.pattern.total() + 1);
  if (same_gate(hs.gate, pr.target.gate)) {
    out.fidelity = fidelity(got, pr.target.coefficients);
  } else {
    out.fidelity = fidelity(GatedFock{hs.gate, got}, GatedFock{pr.target.gate, pr.target.coefficients},
                            pr.config.fidelity_cutoff);
  }
}

OptimizationResult optimize(const OptimizationProblem& in) {
  OptimizationProblem pr = in;
  const int m = pr.target.coefficients.n_modes();
  if (pr.heralded.empty()) {
    pr.heralded.resize(m);
    std::iota(pr.heralded.begin(), pr.heralded.end(), 0);
  }
  if (static_cast<int>(pr.heralded.size()) != m)
    fail(ErrorKind::kStructural, "target mode count differs from the heralded mode count");
  if (pr.target.gate.m() != m) fail(ErrorKind::kStructural, "target gate acts on the wrong number of modes");
  if (std::abs(pr.target.coefficients.norm() - 1.0) > 1e-9) fail(ErrorKind::kUsage, "target is not normalized");
  if (pr.n_modes <= m) fail(ErrorKind::kUsage, "need at least one measured mode");
  if (pr.config.restarts < 1) fail(ErrorKind::kUsage, "restart count must be positive");
  const Layout l = make_layout(pr.n_modes, pr.heralded);
  const int nmax = target_photon_number(pr.target.coefficients);
  if (nmax < 1) fail(ErrorKind::kUsage, "target has no photons; it is Gaussian");
  // Sizing bound on the independent ratios among the nonzero amplitudes.
  int nonzero = 0;
  for (std::size_t i = 0; i < pr.target.coefficients.size(); ++i)
    nonzero += std::abs(pr.target.coefficients.data(i)) > 1e-12;
  if (nonzero - 1 > (pr.n_modes + 2) * (pr.n_modes - 1) / 2)
    fail(ErrorKind::kUsage, "too few modes for the number of target coefficients");
  if (pr.patterns.empty()) pr.patterns = candidate_patterns(nmax, l.detected, pr.config.pattern_cap);
  for (const auto& p : pr.patterns)
    if (p.total() != nmax) fail(ErrorKind::kUsage, "every pattern must detect n_max photons in total");

  const bool exact = pr.mode == ConstraintMode::kExact;
  Strategy strategy = pr.config.strategy;
  const auto family = detect_family(pr);
  if (strategy == Strategy::kAuto)
    strategy = family && exact ? Strategy::kClosedForm
               : (m == 1 && exact) ? Strategy::kElimination
                                   : Strategy::kPenalty;
  if (strategy == Strategy::kClosedForm && !family)
    fail(ErrorKind::kUnsupported, "target matches no closed-form family on this mode layout");
  if (strategy == Strategy::kElimination && (m != 1 || !exact))
    fail(ErrorKind::kUnsupported, "elimination needs one heralded mode and exact constraints");

  OptimizationResult out;
  out.heralded = pr.heralded;

  if (strategy == Strategy::kClosedForm) {
    out.strategy = "closed-form:" + to_string(family->family);
    const auto opt = closed_form_optimum(family->family, RVec(), family->w_modes ? family->w_modes : 5);
    const FamilySetup s = family_setup(family->family, opt.params, family->w_modes ? family->w_modes : 5);
    out.pattern = s.pattern;
    out.probability = opt.probability;
    out.infidelity = 0.0;
    out.feasible = true;
    out.trace.push_back(RestartRecord{0, 0, opt.probability, 0.0, true});
    finish_result(pr, s.b, s.w, out);
    return out;
  }
  out.strategy = strategy == Strategy::kElimination ? "elimination" : "penalty";

  const int np = static_cast<int>(pr.patterns.size());
  const int nr = pr.config.restarts;
  std::vector<Candidate> cand(static_cast<std::size_t>(np) * nr);
  const CVec t = target_amplitudes(pr.target.coefficients, m, nmax);
  std::vector<std::vector<int>> counts(np);
  std::vector<std::optional<RelationSet>> rels(np);
  for (int p = 0; p < np; ++p) {
    counts[p] = counts_for(l, pr.patterns[p]);
    if (strategy == Strategy::kElimination) rels[p] = coefficient_constraints(counts[p]);
  }
  CVec ratio_target(nmax + 1);
  if (strategy == Strategy::kElimination)
    for (int n = 0; n <= nmax; ++n) ratio_target(n) = t(n);

  tbb::parallel_for(0, np * nr, [&](int job) {
    const int p = job / nr, r = job % nr;
    std::mt19937_64 rng(pr.config.seed + 1000003ULL * p + static_cast<std::uint64_t>(r));
    cand[job] = strategy == Strategy::kElimination
                    ? elimination_restart(pr, l, *rels[p], counts[p], t, ratio_target, rng)
                    : penalty_restart(pr, l, counts[p], t, rng);
  });

  // Deterministic reduction: highest probability, then least total squeezing.
  int best = -1;
  double best_sq = 0.0;
  for (int job = 0; job < np * nr; ++job) {
    const Candidate& c = cand[job];
    out.trace.push_back(RestartRecord{job / nr, job % nr, c.probability, c.infidelity, c.valid});
    out.infidelity = std::min(out.infidelity, c.infidelity);
    if (!c.valid) continue;
    const double sq = total_squeezing(c.bp);
    if (best < 0 || c.probability > cand[best].probability + 1e-10 ||
        (std::abs(c.probability - cand[best].probability) <= 1e-10 && sq < best_sq)) {
      best = job;
      best_sq = sq;
    }
  }
  if (best < 0) return out;
  out.feasible = true;
  out.pattern = pr.patterns[best / nr];
  out.probability = cand[best].probability;
  out.infidelity = cand[best].infidelity;
  const auto [b0, w0] = to_original(l, cand[best].bp, cand[best].wp);
  finish_result(pr, b0, w0, out);
  return out;
}

}  // namespace hgs
