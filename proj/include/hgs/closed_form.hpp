#pragma once

#include <string>

#include "hgs/herald.hpp"

namespace hgs {

// Heralding setups whose success probability has a closed form. All are
// gate-free: B restricted to the heralded modes is zero and w = 0.
//   even-cat-02  {kappa, c02}          2 modes, detect 2:  c0 / c2 = c02
//   odd-cat-1    {kappa, f22}          2 modes, detect 1:  squeezed |1>
//   odd-cat-13   {kappa, c13}          2 modes, detect 3:  c1 / c3 = c13
//   w-state      {N_w, b_NN}           N modes, detect 1 in the last mode
//   noon-2       {x, y, b33, b44}      4 modes, detect (1, 1)
//   noon-3       {b13, b14, b15}       5 modes, detect (1, 1, 1)
//   noon-4       {b13, b14, b15, b16}  6 modes, detect (1, 1, 1, 1)
// Real parameters enter through their magnitudes where the formulas use |.|.
enum class Family { kEvenCat02, kOddCat1, kOddCat13, kWState, kNoon2, kNoon3, kNoon4 };

Family family_from_string(const std::string& name);
std::string to_string(Family f);
int family_parameter_count(Family f);

struct FamilySetup {
  int n_modes = 0;
  std::vector<int> heralded;
  DetectionPattern pattern;
  CMat b;
  CVec w;
};

// w_modes is the mode count of the w-state family and is ignored otherwise.
FamilySetup family_setup(Family f, const RVec& params, int w_modes = 5);

// Closed-form probability; throws kUnphysical when B has a singular value of
// one or more.
double closed_form_probability(Family f, const RVec& params, int w_modes = 5);

struct ClosedFormOptimum {
  RVec params;
  double probability = 0.0;
};

// Cat families keep their ratio parameter (params(1)) fixed and maximize over
// kappa; the other families maximize over every parameter.
ClosedFormOptimum closed_form_optimum(Family f, const RVec& fixed = RVec(), int w_modes = 5);

}  // namespace hgs
