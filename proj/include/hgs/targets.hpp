#pragma once

#include "hgs/fock.hpp"

namespace hgs {

enum class Parity { kEven, kOdd };

// Normalized (|alpha> +- |-alpha>).
FockVector cat_state(cplx alpha, Parity parity, int cutoff);
// Finite-energy grid code word mu in {0, 1}, projected by quadrature.
FockVector gkp_state(double delta, int mu, int cutoff);
// (|0> + i a sqrt(3/2)|1> + i a|3>) / sqrt(1 + 5a^2/2).
FockVector cubic_state(double a, int cutoff = 4);
// (|N0> + |0N>)/sqrt(2).
FockVector noon_state(int n, int cutoff = 0);
// Equal superposition of single excitations over m modes.
FockVector w_state(int m, int cutoff = 2);

}  // namespace hgs
