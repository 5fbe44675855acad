#pragma once

#include <cstdint>
#include <string>

#include "hgs/fock.hpp"
#include "hgs/herald.hpp"
#include "hgs/mesh.hpp"

namespace hgs {

// Goal state: gate applied to a normalized Fock superposition.
struct TargetState {
  Gate gate;
  FockVector coefficients;
};

enum class ConstraintMode { kExact, kFidelityFloor };

// kAuto: closed-form family when the target is a NOON or W state on the
// family's mode layout, elimination for one heralded mode with exact
// constraints, penalty otherwise.
enum class Strategy { kAuto, kClosedForm, kElimination, kPenalty };

struct OptimizerConfig {
  int restarts = 64;
  int max_iterations = 3000;
  std::uint64_t seed = 1;
  double penalty_weight = 1e4;
  int pattern_cap = 200;
  Strategy strategy = Strategy::kAuto;
  double feasibility_tolerance = 1e-9;  // largest accepted infidelity in exact mode
  int fidelity_cutoff = 40;             // Fock cutoff when gates must be applied
};

struct OptimizationProblem {
  TargetState target;
  int n_modes = 0;
  std::vector<int> heralded;                 // default: the first M modes
  std::vector<DetectionPattern> patterns;    // default: every composition of n_max
  ConstraintMode mode = ConstraintMode::kExact;
  double fidelity_floor = 0.99;
  OptimizerConfig config;
};

struct RestartRecord {
  int pattern = 0;
  int restart = 0;
  double probability = 0.0;
  double infidelity = 1.0;
  bool feasible = false;
};

struct OptimizationResult {
  bool feasible = false;
  std::string strategy;
  DetectionPattern pattern;
  std::vector<int> heralded;
  CMat b;  // final pure state, target gate absorbed, original mode order
  CVec w;
  CircuitSpec circuit;
  Mesh mesh;
  double probability = 0.0;        // optimizer's value
  double probability_check = 0.0;  // recomputed by heralding the circuit
  double fidelity = 0.0;           // recomputed by heralding the circuit
  double infidelity = 1.0;         // best constraint violation seen
  std::vector<RestartRecord> trace;
};

// Largest total photon number with a nonzero amplitude.
int target_photon_number(const FockVector& v, double tol = 1e-12);

// Compositions of `total` photons into the given modes, at most `cap` of them.
std::vector<DetectionPattern> candidate_patterns(int total, const std::vector<int>& modes, int cap);

OptimizationResult optimize(const OptimizationProblem& problem);

// Circuit, mesh and independent re-verification for a gate-free pure state
// (B0, w0) whose herald is meant to equal the target coefficients.
void finish_result(const OptimizationProblem& problem, const CMat& b0, const CVec& w0, OptimizationResult& out);

}  // namespace hgs
