#include "hgs/minimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>

namespace hgs {

namespace {

struct Callback {
  const std::function<double(const RVec&)>* f;
  int n;
};

double trampoline(const gsl_vector* v, void* params) {
  const auto* cb = static_cast<const Callback*>(params);
  RVec x(cb->n);
  for (int i = 0; i < cb->n; ++i) x(i) = gsl_vector_get(v, i);
  const double y = (*cb->f)(x);
  return std::isfinite(y) ? y : std::numeric_limits<double>::max();
}

struct Callback1 {
  const std::function<double(double)>* f;
};

double negate_1d(double x, void* params) { return -(*static_cast<const Callback1*>(params)->f)(x); }

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0, const RVec& step,
                           int max_iter, double size_tol) {
  const int n = static_cast<int>(x0.size());
  MinimizeResult out;
  if (n == 0) {
    out.x = x0;
    out.f = f(x0);
    out.converged = true;
    return out;
  }
  Callback cb{&f, n};
  gsl_multimin_function fn{&trampoline, static_cast<std::size_t>(n), &cb};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* s = gsl_vector_alloc(n);
  for (int i = 0; i < n; ++i) {
    gsl_vector_set(x, i, x0(i));
    gsl_vector_set(s, i, step(i));
  }
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(m, &fn, x, s);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.iterations = it;
  out.x.resize(n);
  for (int i = 0; i < n; ++i) out.x(i) = gsl_vector_get(m->x, i);
  out.f = m->fval;
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(x);
  gsl_vector_free(s);
  return out;
}

std::pair<double, double> maximize_1d(const std::function<double(double)>& f, double lo, double hi, int samples,
                                      double tol) {
  const double h = (hi - lo) / (samples - 1);
  int best = 0;
  double fbest = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double v = f(lo + i * h);
    if (v > fbest) {
      fbest = v;
      best = i;
    }
  }
  if (best == 0 || best == samples - 1) return {lo + best * h, fbest};
  Callback1 cb{&f};
  gsl_function fn{&negate_1d, &cb};
  gsl_min_fminimizer* m = gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent);
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  double a = lo + (best - 1) * h, b = lo + (best + 1) * h, x = lo + best * h;
  if (gsl_min_fminimizer_set(m, &fn, x, a, b) == GSL_SUCCESS) {
    for (int it = 0; it < 200; ++it) {
      if (gsl_min_fminimizer_iterate(m) != GSL_SUCCESS) break;
      x = gsl_min_fminimizer_x_minimum(m);
      a = gsl_min_fminimizer_x_lower(m);
      b = gsl_min_fminimizer_x_upper(m);
      if (gsl_min_test_interval(a, b, tol, 0.0) == GSL_SUCCESS) break;
    }
  }
  gsl_set_error_handler(old);
  gsl_min_fminimizer_free(m);
  const double fx = f(x);
  return fx >= fbest ? std::make_pair(x, fx) : std::make_pair(lo + best * h, fbest);
}

}  // namespace hgs
