#pragma once

#include "hgs/gaussian_state.hpp"

namespace hgs {

// Conditioning record for the linear solves behind a computation.
struct Health {
  double worst_rcond = 1.0;
  double max_term = 0.0;  // largest intermediate coefficient magnitude seen
  std::vector<std::string> warnings;
  void note_rcond(double rcond, const char* where);
  void merge(const Health& other);
};

struct BData {
  int n_modes = 0;
  std::vector<int> heralded;  // M modes, in the given order
  std::vector<int> detected;  // the remaining modes, ascending
  bool pure = false;

  CMat r_tilde;  // 2N x 2N, original ordering
  CVec y_tilde;  // 2N
  cplx p0;

  // Permuted (heralded first in both halves) and partitioned.
  CMat r;
  CVec y;
  CMat r_hh, r_hd, r_dh, r_dd;
  CVec y_h, y_d;

  // Pure states only: R = B (+) B^*, y = (w, w^*), in the permuted order.
  CMat b;
  CVec w;

  Health health;

  int m() const { return static_cast<int>(heralded.size()); }
  int d() const { return static_cast<int>(detected.size()); }
};

std::vector<int> complement_modes(int n_modes, const std::vector<int>& modes);

// General path from (V(c), Q(c)); also fills B and w when the state is pure.
BData b_data(const GaussianState& state, const std::vector<int>& heralded);

// Pure path from (B, w) in the original mode ordering.
BData b_data_from_pure(const CMat& b, const CVec& w, const std::vector<int>& heralded);

// B = U diag(tanh r_j e^{i phi_j}) U^T of a circuit; w from the displacements.
CMat b_from_circuit(const CircuitSpec& circuit);

// Inverse map: the pure state with R~ = B (+) B^*, y~ = (w, w^*).
GaussianState state_from_b(const CMat& b, const CVec& w);

// y~ = (w, w^*) of a circuit, through the general formula.
CVec w_from_state(const GaussianState& state);

// B of a pure state in the original ordering.
CMat b_from_state(const GaussianState& state);

// Squeezers, displacements and interferometer preparing the pure state
// (B, w), from the Takagi factors of B.
CircuitSpec circuit_from_b(const CMat& b, const CVec& w);

double max_singular_value(const CMat& b);

}  // namespace hgs
