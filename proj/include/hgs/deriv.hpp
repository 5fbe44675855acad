#pragma once

#include <cstddef>

#include "hgs/types.hpp"

namespace hgs {

// exp(1/2 g^T A g + z^T g) in D variables.
struct GaussianExponential {
  CMat a;
  CVec z;
};

inline constexpr int kDefaultOrderCap = 64;

struct DerivStats {
  double max_term = 0.0;
  std::size_t max_monomials = 0;
};

// d^{m_1}/dg_1^{m_1} ... d^{m_D}/dg_D^{m_D} of the exponential at g = 0.
// Throws kResource when |m| exceeds the cap.
cplx gaussian_derivative(const GaussianExponential& g, const std::vector<int>& order,
                         int cap = kDefaultOrderCap, DerivStats* stats = nullptr);

// Same value, applying single derivatives in the given sequence of variable indices.
cplx gaussian_derivative_sequence(const GaussianExponential& g, const std::vector<int>& sequence,
                                  int cap = kDefaultOrderCap, DerivStats* stats = nullptr);

// Two-variable Hermite polynomial with generating function exp(-t1 t2 + u t1 + v t2).
cplx hermite_2d(int m, int n, cplx u, cplx v);
// Table H(i, j) for i <= m_max, j <= n_max.
CMat hermite_2d_table(int m_max, int n_max, cplx u, cplx v);

}  // namespace hgs
