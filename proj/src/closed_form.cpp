#include "hgs/closed_form.hpp"

#include <cmath>
#include <numbers>

#include "hgs/bdata.hpp"
#include "hgs/minimize.hpp"

namespace hgs {

namespace {

constexpr double kEdge = 1.0 - 1e-12;

void require_params(Family f, const RVec& p) {
  if (p.size() != family_parameter_count(f)) fail(ErrorKind::kStructural, "wrong parameter count for " + to_string(f));
}

// Two heralded modes coupled to each detector with relative phases tau.
FamilySetup noon_setup(const RVec& moduli, const CVec& tau) {
  const int d = static_cast<int>(moduli.size());
  FamilySetup s;
  s.n_modes = d + 2;
  s.heralded = {0, 1};
  for (int k = 0; k < d; ++k) {
    s.pattern.modes.push_back(k + 2);
    s.pattern.counts.push_back(1);
  }
  s.b = CMat::Zero(d + 2, d + 2);
  for (int k = 0; k < d; ++k) {
    s.b(0, k + 2) = s.b(k + 2, 0) = std::abs(moduli(k));
    s.b(1, k + 2) = s.b(k + 2, 1) = tau(k) * std::abs(moduli(k));
  }
  s.w = CVec::Zero(d + 2);
  return s;
}

double sqrt_or_fail(double x) {
  if (x < 0.0) fail(ErrorKind::kUnphysical, "closed-form square root argument is negative");
  return std::sqrt(x);
}

}  // namespace

Family family_from_string(const std::string& n) {
  if (n == "even-cat-02") return Family::kEvenCat02;
  if (n == "odd-cat-1") return Family::kOddCat1;
  if (n == "odd-cat-13") return Family::kOddCat13;
  if (n == "w-state") return Family::kWState;
  if (n == "noon-2") return Family::kNoon2;
  if (n == "noon-3") return Family::kNoon3;
  if (n == "noon-4") return Family::kNoon4;
  fail(ErrorKind::kUsage, "unknown closed-form family '" + n + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kEvenCat02: return "even-cat-02";
    case Family::kOddCat1: return "odd-cat-1";
    case Family::kOddCat13: return "odd-cat-13";
    case Family::kWState: return "w-state";
    case Family::kNoon2: return "noon-2";
    case Family::kNoon3: return "noon-3";
    case Family::kNoon4: return "noon-4";
  }
  return "?";
}

int family_parameter_count(Family f) {
  switch (f) {
    case Family::kNoon2:
    case Family::kNoon4: return 4;
    case Family::kNoon3: return 3;
    default: return 2;
  }
}

FamilySetup family_setup(Family f, const RVec& p, int w_modes) {
  require_params(f, p);
  FamilySetup s;
  const double sq23 = std::sqrt(2.0 / 3.0);
  switch (f) {
    case Family::kEvenCat02:
    case Family::kOddCat1:
    case Family::kOddCat13: {
      const double k = p(0);
      double b22 = 0.0;
      int n = 0;
      if (f == Family::kEvenCat02) {
        b22 = std::sqrt(2.0) * p(1) * k * k;
        n = 2;
      } else if (f == Family::kOddCat1) {
        b22 = p(1) * k * k;
        n = 1;
      } else {
        b22 = sq23 * p(1) * k * k;
        n = 3;
      }
      s.n_modes = 2;
      s.heralded = {0};
      s.pattern = DetectionPattern{{1}, {n}};
      s.b = CMat::Zero(2, 2);
      s.b(0, 1) = s.b(1, 0) = k;
      s.b(1, 1) = b22;
      s.w = CVec::Zero(2);
      return s;
    }
    case Family::kWState: {
      if (w_modes < 2) fail(ErrorKind::kUsage, "the w-state family needs at least two modes");
      if (p(0) < 0.0) fail(ErrorKind::kUnphysical, "N_w must be nonnegative");
      const int n = w_modes;
      const double beta = std::sqrt(p(0) / (n - 1));
      s.n_modes = n;
      for (int k = 0; k + 1 < n; ++k) s.heralded.push_back(k);
      s.pattern = DetectionPattern{{n - 1}, {1}};
      s.b = CMat::Zero(n, n);
      for (int k = 0; k + 1 < n; ++k) s.b(k, n - 1) = s.b(n - 1, k) = beta;
      s.b(n - 1, n - 1) = std::abs(p(1));
      s.w = CVec::Zero(n);
      return s;
    }
    case Family::kNoon2: {
      s = noon_setup(p.head(2), (CVec(2) << -kI, kI).finished());
      s.b(2, 2) = std::abs(p(2));
      s.b(3, 3) = std::abs(p(3));
      return s;
    }
    case Family::kNoon3: {
      const cplx om = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
      return noon_setup(p, (CVec(3) << 1.0, om, om * om).finished());
    }
    case Family::kNoon4: {
      const cplx e = std::polar(1.0, std::numbers::pi / 4.0);
      return noon_setup(p, (CVec(4) << e, e * kI, -e, -e * kI).finished());
    }
  }
  fail(ErrorKind::kUsage, "unknown family");
}

double closed_form_probability(Family f, const RVec& p, int w_modes) {
  const FamilySetup s = family_setup(f, p, w_modes);
  if (max_singular_value(s.b) >= 1.0) fail(ErrorKind::kUnphysical, "B has a singular value of one or more");
  auto sq = [](double x) { return x * x; };
  switch (f) {
    case Family::kEvenCat02: {
      const double k2 = sq(p(0)), c = sq(p(1));
      return (1 + c) * k2 * k2 * sqrt_or_fail(1 - 2 * k2 + (1 - 2 * c) * k2 * k2);
    }
    case Family::kOddCat1: {
      const double k2 = sq(p(0));
      return k2 * sqrt_or_fail(1 - 2 * k2 + (1 - sq(p(1))) * k2 * k2);
    }
    case Family::kOddCat13: {
      const double k2 = sq(p(0)), c = sq(p(1));
      return (1 + c) * k2 * k2 * k2 * sqrt_or_fail(1 - 2 * k2 + (1 - 2.0 * c / 3.0) * k2 * k2);
    }
    case Family::kWState:
      return p(0) * sqrt_or_fail(sq(1 - p(0)) - sq(p(1)));
    case Family::kNoon2: {
      const double x2 = sq(p(0)), y2 = sq(p(1));
      return 4 * x2 * y2 * sqrt_or_fail(sq(1 - 2 * x2) - sq(p(2))) * sqrt_or_fail(sq(1 - 2 * y2) - sq(p(3)));
    }
    case Family::kNoon3: {
      const double a = sq(p(0)), b = sq(p(1)), c = sq(p(2));
      return 12 * a * b * c * (1 - 2 * (a + b + c) + 3 * (a * b + b * c + a * c));
    }
    case Family::kNoon4: {
      const double a = sq(p(0)), b = sq(p(1)), c = sq(p(2)), d = sq(p(3));
      // |c_40|^2 + |c_04|^2 = 2 * 4! * abcd; det(I - B B^dag)^(1/2) from the
      // two singular values of the coupling block.
      const double s = a + b + c + d;
      return 48 * a * b * c * d * (sq(1 - s) - sq(a - c) - sq(b - d));
    }
  }
  return 0.0;
}

ClosedFormOptimum closed_form_optimum(Family f, const RVec& fixed, int w_modes) {
  const int np = family_parameter_count(f);
  auto value = [&](const RVec& p) {
    try {
      return closed_form_probability(f, p, w_modes);
    } catch (const Error&) {
      return -1.0;
    }
  };
  ClosedFormOptimum out;
  if (f == Family::kEvenCat02 || f == Family::kOddCat1 || f == Family::kOddCat13) {
    if (fixed.size() != 1) fail(ErrorKind::kUsage, "cat families need their ratio parameter");
    RVec p(2);
    p << 0.0, fixed(0);
    // Largest physical kappa, by bisection on the singular-value bound.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      p(0) = 0.5 * (lo + hi);
      (value(p) >= 0.0 ? lo : hi) = p(0);
    }
    const auto [k, prob] = maximize_1d(
        [&](double kk) {
          RVec q = p;
          q(0) = kk;
          return value(q);
        },
        0.0, lo * kEdge);
    out.params = p;
    out.params(0) = k;
    out.probability = prob;
    return out;
  }
  if (fixed.size() != 0) fail(ErrorKind::kUsage, "this family has no fixed parameter");
  // Nelder-Mead from a few deterministic starts, keeping the best.
  out.probability = -1.0;
  for (double start : {0.2, 0.35, 0.5}) {
    RVec x0 = RVec::Constant(np, start);
    if (f == Family::kWState) x0 << start, 0.05;
    if (f == Family::kNoon2) x0 << start, start, 0.05, 0.05;
    const auto r = nelder_mead([&](const RVec& x) { return -value(x); }, x0, RVec::Constant(np, 0.05), 20000, 1e-13);
    if (-r.f > out.probability) {
      out.probability = -r.f;
      out.params = r.x.cwiseAbs();
    }
  }
  return out;
}

}  // namespace hgs
