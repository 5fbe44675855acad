#include "hgs/targets.hpp"

#include <cmath>
#include <sstream>

namespace hgs {

namespace {

void require_capture(double captured, double total, const char* what, int cutoff) {
  if (!(captured >= (1.0 - 1e-6) * total)) {
    std::ostringstream os;
    os << what << ": cutoff " << cutoff << " captures only " << captured / total << " of the norm";
    fail(ErrorKind::kConvergence, os.str());
  }
}

}  // namespace

FockVector cat_state(cplx alpha, Parity parity, int cutoff) {
  FockVector v = FockVector::zeros(1, cutoff);
  const double a2 = std::norm(alpha);
  const double sign = parity == Parity::kEven ? 1.0 : -1.0;
  // Unnormalized amplitudes e^{-|a|^2/2} a^n (1 +- (-1)^n) / sqrt(n!).
  const double total = 2.0 * (1.0 + sign * std::exp(-2.0 * a2));
  if (!(total > 1e-300)) fail(ErrorKind::kUsage, "odd cat state with alpha = 0 does not exist");
  cplx term = std::exp(-0.5 * a2);
  for (int n = 0; n < cutoff; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    const double f = 1.0 + sign * ((n % 2 == 0) ? 1.0 : -1.0);
    v.data(n) = term * f;
  }
  const double captured = v.data.squaredNorm();
  require_capture(captured, total, "cat state", cutoff);
  v.data /= v.data.norm();
  return v;
}

FockVector gkp_state(double delta, int mu, int cutoff) {
  if (!(delta > 0.0)) fail(ErrorKind::kUsage, "GKP width must be positive");
  if (mu != 0 && mu != 1) fail(ErrorKind::kUsage, "GKP code word must be 0 or 1");
  const double sp = std::sqrt(M_PI);
  // Peaks at (2s + mu) sqrt(pi) with envelope exp(-pi delta^2 (2s + mu)^2 / 2).
  std::vector<double> centers, weights;
  for (int s = 0;; ++s) {
    bool any = false;
    for (int sg : {1, -1}) {
      if (s == 0 && sg == -1) continue;
      const int j = 2 * (sg * s) + mu;
      const double w = std::exp(-0.5 * M_PI * delta * delta * j * j);
      if (w < 1e-14) continue;
      any = true;
      centers.push_back(j * sp);
      weights.push_back(w);
    }
    if (!any && s > 0) break;
  }
  double extent = 0.0;
  for (double c : centers) extent = std::max(extent, std::abs(c));
  const double half = std::max(std::sqrt(2.0 * cutoff + 1.0) + 10.0, extent + 12.0 * delta);
  const double h = std::min(delta / 12.0, 0.02);
  const int npts = static_cast<int>(std::ceil(2.0 * half / h)) + 1;
  const double pref = std::pow(M_PI * delta * delta, -0.25);
  FockVector v = FockVector::zeros(1, cutoff);
  double total = 0.0;
  for (int i = 0; i < npts; ++i) {
    const double q = -half + i * h;
    double psi = 0.0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double x = (q - centers[k]) / delta;
      psi += weights[k] * std::exp(-0.5 * x * x);
    }
    psi *= pref;
    total += psi * psi * h;
    const auto phi = fock_wavefunctions(cutoff - 1, q);
    for (int n = 0; n < cutoff; n += 2) v.data(n) += phi[n] * psi * h;
  }
  require_capture(v.data.squaredNorm(), total, "GKP state", cutoff);
  v.data /= v.data.norm();
  return v;
}

FockVector cubic_state(double a, int cutoff) {
  if (cutoff < 4) fail(ErrorKind::kUsage, "cubic phase approximation needs cutoff >= 4");
  FockVector v = FockVector::zeros(1, cutoff);
  const double nrm = 1.0 / std::sqrt(1.0 + 2.5 * a * a);
  v.data(0) = nrm;
  v.data(1) = kI * a * std::sqrt(1.5) * nrm;
  v.data(3) = kI * a * nrm;
  return v;
}

FockVector noon_state(int n, int cutoff) {
  if (n < 1) fail(ErrorKind::kUsage, "NOON photon number must be positive");
  FockVector v = FockVector::zeros(2, std::max(cutoff, n + 1));
  v.at({n, 0}) = 1.0 / std::sqrt(2.0);
  v.at({0, n}) = 1.0 / std::sqrt(2.0);
  return v;
}

FockVector w_state(int m, int cutoff) {
  if (m < 1) fail(ErrorKind::kUsage, "W state needs at least one mode");
  FockVector v = FockVector::zeros(m, std::max(cutoff, 2));
  for (int k = 0; k < m; ++k) {
    MultiIndex e(m, 0);
    e[k] = 1;
    v.at(e) = 1.0 / std::sqrt(static_cast<double>(m));
  }
  return v;
}

}  // namespace hgs
