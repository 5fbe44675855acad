#pragma once

#include <functional>

#include "hgs/types.hpp"

namespace hgs {

struct MinimizeResult {
  RVec x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// GSL nmsimplex2 on f, starting from x0 with the given initial steps.
MinimizeResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0, const RVec& step,
                           int max_iter, double size_tol);

// Largest value of f on [lo, hi]: a uniform scan of `samples` points, then a
// GSL Brent refinement around the best sample.
std::pair<double, double> maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                                      int samples = 400, double tol = 1e-12);

}  // namespace hgs
