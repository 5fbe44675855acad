#pragma once

#include <optional>
#include <random>

#include "hgs/bdata.hpp"
#include "hgs/symbolic.hpp"

namespace hgs {

// Ratio relations c_n / c_{n_T} of a single heralded mode as polynomials in
// (mu_2..mu_N, f_ij for i <= j), where for heralded mode 1 and detected j:
//   kappa_j = b_1j / sqrt(1 - |b_11|^2),  mu_j = Y_j / kappa_j,
//   f_ij = conj(b_11) + b_ij / (kappa_i kappa_j).
// The relations are holomorphic in these variables.
struct RelationSet {
  std::vector<int> counts;
  int n_vars = 0;
  std::vector<std::string> names;
  std::vector<Polynomial> ratios;  // index n = 0 .. n_T - 1
  std::vector<std::vector<Polynomial>> partials;  // filled by finalize()

  void finalize();

  int n_t() const { return static_cast<int>(ratios.size()); }
  CVec evaluate(const CVec& vars) const;
  CMat jacobian(const CVec& vars) const;
  // ratios(vars) - target_n / target_{n_T}.
  CVec residual(const CVec& vars, const CVec& target) const;
};

int relation_variable_count(int n_detected);
int f_variable(int n_detected, int i, int j);  // 0-based detected indices

RelationSet coefficient_constraints(const std::vector<int>& counts, int cap = 12);
// Hard-coded tables for one and two detected modes (n_T <= 4, plus (3, 2)).
std::optional<RelationSet> tabulated_constraints(const std::vector<int>& counts);

// (mu, f) of a pure single-mode herald; requires every kappa_j != 0.
CVec relation_variables(const BData& bd);

// Gate-free (b_11 = 0, w_1 = 0) pure state with the given kappa and (mu, f).
// Returns B and w in the original ordering, heralded mode first.
std::pair<CMat, CVec> gate_free_state(const CVec& kappa, const CVec& vars);

// Newton iteration with minimum-norm steps towards ratios(vars) = target
// ratios; returns the final residual norm.
double project_onto_relations(const RelationSet& rel, const CVec& target, CVec& vars, int max_iter = 50);

// Largest numerical rank of the ratio Jacobian over random points.
int relation_rank_probe(const RelationSet& rel, std::mt19937_64& rng, int trials = 8);

}  // namespace hgs
