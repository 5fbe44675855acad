#pragma once

#include "hgs/types.hpp"

namespace hgs {

enum class Basis { kComplex, kReal };

// Mean and covariance of an N-mode Gaussian state.
// Complex basis orders entries as (a_1^dag .. a_N^dag, a_1 .. a_N); real basis
// as (p_1 .. p_N, q_1 .. q_N). Real-basis data is stored with zero imaginary part.
struct GaussianState {
  int n_modes = 0;
  Basis basis = Basis::kComplex;
  CVec mean;
  CMat cov;
};

struct StateDiagnostic {
  bool valid = false;
  double min_eigenvalue = 0.0;
  double purity = 0.0;  // det(2 V(c)), equal to 1 for pure states
  std::string message;
};

// Builds a state, hermitizing the covariance. Throws kStructural on bad shapes.
GaussianState make_state(const CVec& mean, const CMat& cov, Basis basis = Basis::kComplex);
GaussianState vacuum_state(int n_modes);

StateDiagnostic validate_state(const GaussianState& state);
bool is_pure(const GaussianState& state, double tol = 1e-8);

GaussianState to_real(const GaussianState& state);
GaussianState to_complex(const GaussianState& state);

CMat omega_matrix(int n_modes);
CMat x_matrix(int n_modes);
CMat sigma3_matrix(int n_modes);

// zeta_j = r_j e^{i phi_j}, S(zeta) = exp[(zeta a^dag^2 - zeta^* a^2)/2].
// Mode j is prepared as D(alpha_j) S(zeta_j)|0>, then the interferometer maps
// a_j -> sum_k U_jk a_k.
struct CircuitSpec {
  int n_modes = 0;
  CVec squeezings;
  CVec displacements;
  CMat unitary;
};

void check_circuit(const CircuitSpec& circuit);
GaussianState state_from_circuit(const CircuitSpec& circuit);

// Complex-basis symplectic of a single-mode squeezer S(zeta).
Eigen::Matrix2cd squeeze_symplectic(cplx zeta);

// Two-mode passive/active Gaussian unitary acting on a subset of modes.
// s is the 2M x 2M complex-basis symplectic, d = (d^*, d) the displacement.
struct GaussianUnitary {
  CMat s;
  CVec d;
};

GaussianUnitary passive_unitary(const CMat& u);
GaussianUnitary squeezer_unitary(const CVec& zetas);
GaussianUnitary displacement_unitary(const CVec& alphas);
// Composition: apply first, then second.
GaussianUnitary compose(const GaussianUnitary& first, const GaussianUnitary& second);

// Applies u to the given modes of the state: rho -> U rho U^dag.
GaussianState apply_gaussian_unitary(const GaussianState& state, const std::vector<int>& modes,
                                     const GaussianUnitary& u);

double unitarity_error(const CMat& u);

}  // namespace hgs
