#pragma once

#include "hgs/herald.hpp"

namespace hgs {

// Dense amplitudes on the box {0..cutoff-1}^M, last mode fastest.
struct FockVector {
  std::vector<int> cutoffs;
  CVec data;

  static FockVector zeros(int n_modes, int cutoff);
  static FockVector from_map(const CoefficientMap& c, int cutoff);

  int n_modes() const { return static_cast<int>(cutoffs.size()); }
  std::size_t size() const { return static_cast<std::size_t>(data.size()); }
  std::size_t index(const MultiIndex& n) const;  // throws if outside the box
  bool contains(const MultiIndex& n) const;
  MultiIndex multi_index(std::size_t flat) const;
  cplx at(const MultiIndex& n) const;
  cplx& at(const MultiIndex& n);
  double norm() const { return data.norm(); }
  int max_total() const;  // largest |n| with a nonzero amplitude
  CoefficientMap to_map(double tol = 0.0) const;
  // Copy into a box of another cutoff, dropping amplitudes outside it.
  FockVector resized(int cutoff) const;
};

// Normalized harmonic oscillator eigenfunction, by three-term recursion.
double fock_wavefunction(int n, double q);
// psi_0 .. psi_{n_max} at q.
std::vector<double> fock_wavefunctions(int n_max, double q);

// Matrix elements <m|S(zeta)|n> and <m|D(alpha)|n> for m, n < cutoff.
CMat squeeze_matrix(cplx zeta, int cutoff);
CMat displacement_matrix(cplx alpha, int cutoff);

// Single-mode operator on one mode of a box vector (square, matching cutoff).
void apply_single_mode(FockVector& v, int mode, const CMat& op);
// Passive U_K with U_K^dag a U_K = K a; exact on the box.
FockVector apply_passive(const FockVector& v, const CMat& k);

// gate * v on a box of the given cutoff. The work box is padded from the
// gate squeezing and displacement before truncation; multimode boxes grow
// as box^M, so keep M small.
FockVector apply_gate(const Gate& gate, const FockVector& v, int cutoff);

// State given by a gate acting on a normalized Fock superposition.
struct GatedFock {
  Gate gate;
  FockVector v;
};

double fidelity(const FockVector& a, const FockVector& b);
double fidelity(const GatedFock& a, const GatedFock& b, int cutoff);
double fidelity(const GatedFock& a, const FockVector& b, int cutoff);

// Wbar(q, p) convention: W(alpha) = 2^M Wbar; the grid holds W(alpha).
WignerGrid wigner_of_fock_superposition(const FockVector& v, const Gate& gate, const std::vector<AxisSpec>& axes);
double wigner_of_fock_point(const FockVector& v, const Gate& gate, const CVec& alpha);

// Wigner function W(alpha) of a Gaussian state restricted to the given modes.
double gaussian_wigner(const GaussianState& state, const CVec& alpha);

}  // namespace hgs
