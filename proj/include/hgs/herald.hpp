#pragma once

#include <map>

#include "hgs/bdata.hpp"
#include "hgs/deriv.hpp"

namespace hgs {

struct DetectionPattern {
  std::vector<int> modes;
  std::vector<int> counts;
  int total() const;
};

// Gate D(d) U_K S(zeta) U_K^dag on the heralded modes, where U_K^dag a U_K = K a.
struct Gate {
  CMat k;
  CVec zeta;
  CVec d;
  int m() const { return static_cast<int>(zeta.size()); }
  static Gate identity(int m);
};

GaussianUnitary gate_unitary(const Gate& gate);
GaussianUnitary gate_inverse_unitary(const Gate& gate);

using CoefficientMap = std::map<MultiIndex, cplx>;

struct HeraldOptions {
  int order_cap = 12;
  double gram_tolerance = 1e-8;
};

struct HeraldedState {
  std::vector<int> heralded;
  Gate gate;
  CoefficientMap coefficients;
  double probability = 0.0;
  bool normalized = true;
  Health health;
};

// Counts rearranged to the detected-mode order of bd. The pattern must cover
// exactly the non-heralded modes.
std::vector<int> counts_in_detected_order(const BData& bd, const DetectionPattern& pattern);

double probability_from_bdata(const BData& bd, const std::vector<int>& counts, Health* health = nullptr,
                              int order_cap = kDefaultOrderCap);
double herald_probability(const GaussianState& state, const DetectionPattern& pattern,
                          const std::vector<int>& heralded = {});

struct ZeroPhoton {
  CMat cov;   // 2M x 2M complex basis
  CVec mean;  // (d^*, d)
};
ZeroPhoton zero_photon_gaussian(const BData& bd);

Gate extract_gate(const BData& bd);

// Multi-indices of length m with |l| <= n_max, lexicographic.
std::vector<MultiIndex> multi_indices(int m, int n_max);

// Coefficients from the Gram matrix [c_l c_m^*] (dominant eigenvector).
CoefficientMap fock_coefficients(const BData& bd, const std::vector<int>& counts,
                                 const HeraldOptions& opts = {}, Health* health = nullptr);

// Linear coefficient Y of the detected variables in the single-sided
// coefficient generating function (pure states).
CVec heralded_linear_term(const BData& bd);
// Coefficients from the single-sided generating function, unnormalized and in
// the order of multi_indices(m, n_T). Faster; used by the optimizer.
CVec heralded_amplitudes(const BData& bd, const std::vector<int>& counts, int order_cap = kDefaultOrderCap);

// Applies the global phase rule and normalization in place.
void fix_phase_and_normalize(CVec& c, const std::vector<MultiIndex>& index);

HeraldedState herald_from_bdata(const BData& bd, const std::vector<int>& counts,
                                const HeraldOptions& opts = {});
HeraldedState herald(const GaussianState& state, const DetectionPattern& pattern,
                     const std::vector<int>& heralded = {}, const HeraldOptions& opts = {});

// [U (x) 1] rho [U (x) 1]^dag with U acting on the listed heralded modes.
GaussianState absorb_unitary(const GaussianState& state, const std::vector<int>& heralded,
                             const std::vector<int>& measured, const GaussianUnitary& u);

struct AxisSpec {
  double center = 0.0;
  double half_width = 5.0;
  int resolution = 201;
  double point(int i) const;
  double step() const;
};

// Values are stored with the last axis fastest; axes are (q_1..q_M, p_1..p_M).
struct WignerGrid {
  int n_modes = 0;
  std::vector<AxisSpec> axes;
  std::vector<double> values;  // W(alpha) = 2^M Wbar(q, p), normalized
  double normalization = 1.0;
  std::size_t size() const { return values.size(); }
  std::vector<double> coordinates(std::size_t flat) const;
  // Integral of Wbar over dq dp (1 for a normalized state on a wide grid).
  double integral() const;
};

std::vector<AxisSpec> uniform_axes(int m, double half_width, int resolution);

// Normalized Wigner function of the heralded state, W(alpha) = 2^M Wbar.
class WignerEvaluator {
 public:
  WignerEvaluator(const BData& bd, const std::vector<int>& counts, int order_cap = kDefaultOrderCap);
  double operator()(const CVec& alpha) const;  // alpha per heralded mode
  double probability() const { return probability_; }

 private:
  std::vector<int> order_;
  CMat a_, l5_, zv_;
  CVec y_big_, d_;
  cplx prefactor_;
  double probability_;
  int m_;
};

WignerGrid wigner(const GaussianState& state, const DetectionPattern& pattern,
                  const std::vector<int>& heralded, const std::vector<AxisSpec>& axes);
WignerGrid wigner_from_bdata(const BData& bd, const std::vector<int>& counts,
                             const std::vector<AxisSpec>& axes);

}  // namespace hgs
