#include "hgs/fock.hpp"

#include <cmath>
#include <sstream>

namespace hgs {

FockVector FockVector::zeros(int m, int cutoff) {
  if (m <= 0 || cutoff <= 0) fail(ErrorKind::kUsage, "Fock box needs positive modes and cutoff");
  FockVector v;
  v.cutoffs.assign(m, cutoff);
  std::size_t n = 1;
  for (int k = 0; k < m; ++k) {
    n *= static_cast<std::size_t>(cutoff);
    if (n > 200'000'000) fail(ErrorKind::kResource, "Fock box too large");
  }
  v.data = CVec::Zero(static_cast<Eigen::Index>(n));
  return v;
}

FockVector FockVector::from_map(const CoefficientMap& c, int cutoff) {
  if (c.empty()) fail(ErrorKind::kUsage, "empty coefficient map");
  FockVector v = zeros(static_cast<int>(c.begin()->first.size()), cutoff);
  for (const auto& [idx, val] : c) {
    if (!v.contains(idx)) {
      if (std::abs(val) == 0.0) continue;
      fail(ErrorKind::kUsage, "coefficient index exceeds the cutoff");
    }
    v.at(idx) = val;
  }
  return v;
}

bool FockVector::contains(const MultiIndex& n) const {
  if (n.size() != cutoffs.size()) return false;
  for (std::size_t k = 0; k < n.size(); ++k)
    if (n[k] < 0 || n[k] >= cutoffs[k]) return false;
  return true;
}

std::size_t FockVector::index(const MultiIndex& n) const {
  if (!contains(n)) fail(ErrorKind::kUsage, "multi-index outside the Fock box");
  std::size_t f = 0;
  for (std::size_t k = 0; k < n.size(); ++k) f = f * static_cast<std::size_t>(cutoffs[k]) + n[k];
  return f;
}

MultiIndex FockVector::multi_index(std::size_t flat) const {
  MultiIndex n(cutoffs.size());
  for (std::size_t k = cutoffs.size(); k-- > 0;) {
    n[k] = static_cast<int>(flat % static_cast<std::size_t>(cutoffs[k]));
    flat /= static_cast<std::size_t>(cutoffs[k]);
  }
  return n;
}

cplx FockVector::at(const MultiIndex& n) const { return data(static_cast<Eigen::Index>(index(n))); }
cplx& FockVector::at(const MultiIndex& n) { return data(static_cast<Eigen::Index>(index(n))); }

int FockVector::max_total() const {
  int best = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (data(static_cast<Eigen::Index>(i)) == cplx(0.0)) continue;
    int t = 0;
    for (int x : multi_index(i)) t += x;
    best = std::max(best, t);
  }
  return best;
}

CoefficientMap FockVector::to_map(double tol) const {
  CoefficientMap m;
  for (std::size_t i = 0; i < size(); ++i) {
    const cplx c = data(static_cast<Eigen::Index>(i));
    if (std::abs(c) > tol) m[multi_index(i)] = c;
  }
  return m;
}

FockVector FockVector::resized(int cutoff) const {
  FockVector out = zeros(n_modes(), cutoff);
  for (std::size_t i = 0; i < size(); ++i) {
    const cplx c = data(static_cast<Eigen::Index>(i));
    if (c == cplx(0.0)) continue;
    const MultiIndex n = multi_index(i);
    if (out.contains(n)) out.at(n) = c;
  }
  return out;
}

std::vector<double> fock_wavefunctions(int n_max, double q) {
  std::vector<double> psi(n_max + 1);
  psi[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * q * q);
  if (n_max >= 1) psi[1] = std::sqrt(2.0) * q * psi[0];
  for (int n = 1; n < n_max; ++n)
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * q * psi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
  return psi;
}

double fock_wavefunction(int n, double q) {
  if (n < 0) fail(ErrorKind::kUsage, "negative Fock index");
  return fock_wavefunctions(n, q)[n];
}

CMat squeeze_matrix(cplx zeta, int cutoff) {
  const double r = std::abs(zeta);
  const cplx t = std::polar(std::tanh(r), std::arg(zeta));
  const double sech = 1.0 / std::cosh(r);
  CMat s = CMat::Zero(cutoff, cutoff);
  s(0, 0) = std::sqrt(sech);
  for (int m = 2; m < cutoff; m += 2) s(m, 0) = std::sqrt((m - 1.0) / m) * t * s(m - 2, 0);
  for (int n = 1; n < cutoff; ++n) {
    for (int m = 0; m < cutoff; ++m) {
      cplx v = 0.0;
      if (m > 0) v += std::sqrt(static_cast<double>(m)) * sech * s(m - 1, n - 1);
      if (n > 1) v -= std::sqrt(n - 1.0) * std::conj(t) * s(m, n - 2);
      s(m, n) = v / std::sqrt(static_cast<double>(n));
    }
  }
  return s;
}

CMat displacement_matrix(cplx alpha, int cutoff) {
  // <n+k|D|n> = sqrt(n!/(n+k)!) alpha^k e^{-|alpha|^2/2} L_n^(k)(|alpha|^2), with
  // the Laguerre polynomials by forward recurrence; the simpler two-term
  // recurrence on D itself cancels badly once |alpha| > 1.
  CMat d = CMat::Zero(cutoff, cutoff);
  const double x = std::norm(alpha);
  const double la = x > 0.0 ? std::log(std::abs(alpha)) : 0.0;
  const double th = std::arg(alpha);
  for (int k = 0; k < cutoff; ++k) {
    if (k > 0 && x == 0.0) break;
    double lm1 = 0.0, l = 1.0;
    for (int n = 0; n + k < cutoff; ++n) {
      if (n == 1) {
        lm1 = 1.0;
        l = 1.0 + k - x;
      } else if (n > 1) {
        const double next = ((2.0 * n - 1.0 + k - x) * l - (n - 1.0 + k) * lm1) / n;
        lm1 = l;
        l = next;
      }
      const double mag = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + k + 1.0)) + k * la - 0.5 * x);
      const cplx v = std::polar(mag * l, k * th);
      d(n + k, n) = v;
      if (k > 0) d(n, n + k) = (k % 2 ? -1.0 : 1.0) * std::conj(v);
    }
  }
  return d;
}

void apply_single_mode(FockVector& v, int mode, const CMat& op) {
  const int c = v.cutoffs.at(mode);
  if (op.rows() != c || op.cols() != c) fail(ErrorKind::kStructural, "operator size does not match the cutoff");
  std::size_t inner = 1, outer = 1;
  for (int k = mode + 1; k < v.n_modes(); ++k) inner *= static_cast<std::size_t>(v.cutoffs[k]);
  for (int k = 0; k < mode; ++k) outer *= static_cast<std::size_t>(v.cutoffs[k]);
  CVec x(c);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * c * inner + i;
      for (int k = 0; k < c; ++k) x(k) = v.data(static_cast<Eigen::Index>(base + k * inner));
      const CVec y = op * x;
      for (int k = 0; k < c; ++k) v.data(static_cast<Eigen::Index>(base + k * inner)) = y(k);
    }
  }
}

FockVector apply_passive(const FockVector& v, const CMat& kmat) {
  const int m = v.n_modes();
  if (kmat.rows() != m || kmat.cols() != m) fail(ErrorKind::kStructural, "passive unitary size mismatch");
  for (int c : v.cutoffs)
    if (c != v.cutoffs[0]) fail(ErrorKind::kUsage, "passive transform needs a uniform cutoff");
  const int c = v.cutoffs[0];
  if (m == 1) {
    FockVector out = v;
    cplx ph = 1.0;
    for (int n = 0; n < c; ++n, ph *= kmat(0, 0)) out.data(n) *= ph;
    return out;
  }
  // Group box states by total photon number; U_K|n> is built from U_K|n - e_k>
  // through a_k^dag -> sum_j K_jk a_j^dag.
  const std::size_t box = v.size();
  const int max_total = m * (c - 1);
  std::vector<std::vector<std::size_t>> sectors(max_total + 1);
  std::vector<int> pos(box);
  std::vector<MultiIndex> idx(box);
  for (std::size_t f = 0; f < box; ++f) {
    idx[f] = v.multi_index(f);
    int t = 0;
    for (int x : idx[f]) t += x;
    pos[f] = static_cast<int>(sectors[t].size());
    sectors[t].push_back(f);
  }
  std::vector<std::size_t> stride(m, 1);
  for (int k = m - 2; k >= 0; --k) stride[k] = stride[k + 1] * static_cast<std::size_t>(c);

  FockVector out = FockVector::zeros(m, c);
  out.data(0) = v.data(0);
  CMat prev = CMat::Ones(1, 1);
  for (int t = 1; t <= max_total; ++t) {
    const auto& sec = sectors[t];
    const auto& psec = sectors[t - 1];
    CMat cur = CMat::Zero(static_cast<Eigen::Index>(sec.size()), static_cast<Eigen::Index>(sec.size()));
    for (std::size_t col = 0; col < sec.size(); ++col) {
      const MultiIndex& n = idx[sec[col]];
      int k = 0;
      while (n[k] == 0) ++k;
      const std::size_t pf = sec[col] - stride[k];
      const int pcol = pos[pf];
      const double norm = 1.0 / std::sqrt(static_cast<double>(n[k]));
      for (std::size_t row = 0; row < psec.size(); ++row) {
        const cplx a = prev(static_cast<Eigen::Index>(row), pcol);
        if (a == cplx(0.0)) continue;
        const MultiIndex& mp = idx[psec[row]];
        for (int j = 0; j < m; ++j) {
          if (mp[j] + 1 >= c) continue;
          const std::size_t f = psec[row] + stride[j];
          cur(pos[f], static_cast<Eigen::Index>(col)) += a * kmat(j, k) * std::sqrt(mp[j] + 1.0) * norm;
        }
      }
    }
    CVec in(static_cast<Eigen::Index>(sec.size()));
    for (std::size_t i = 0; i < sec.size(); ++i) in(static_cast<Eigen::Index>(i)) = v.data(static_cast<Eigen::Index>(sec[i]));
    const CVec res = cur * in;
    for (std::size_t i = 0; i < sec.size(); ++i) out.data(static_cast<Eigen::Index>(sec[i])) = res(static_cast<Eigen::Index>(i));
    prev = std::move(cur);
  }
  return out;
}

FockVector apply_gate(const Gate& gate, const FockVector& v, int cutoff) {
  const int m = gate.m();
  if (v.n_modes() != m) fail(ErrorKind::kStructural, "gate and Fock vector disagree on the number of modes");
  int box = cutoff;
  for (int c : v.cutoffs) box = std::max(box, c);
  const bool squeezed = gate.zeta.cwiseAbs().maxCoeff() > 0.0;
  const double dmax = gate.d.size() ? gate.d.cwiseAbs().maxCoeff() : 0.0;
  // Pad the work box until the squeezed/displaced tails drop below ~1e-16.
  int pad = 0;
  if (squeezed) {
    const double t = std::tanh(gate.zeta.cwiseAbs().maxCoeff());
    pad += t < 1e-3 ? 20 : static_cast<int>(std::ceil(2.0 * std::log(1e-16) / std::log(t)));
  }
  if (dmax > 0.0) pad += static_cast<int>(std::ceil(dmax * dmax + 12.0 * dmax + 20.0));
  if (pad > 0) box += 2 * v.max_total() + std::min(pad, 400);
  FockVector w = v.resized(box);
  if (squeezed) {
    const bool trivial_k = (gate.k - CMat::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-15;
    if (!trivial_k) w = apply_passive(w, gate.k.adjoint());
    for (int j = 0; j < m; ++j)
      if (gate.zeta(j) != cplx(0.0)) apply_single_mode(w, j, squeeze_matrix(gate.zeta(j), box));
    if (!trivial_k) w = apply_passive(w, gate.k);
  }
  for (int j = 0; j < m; ++j)
    if (gate.d(j) != cplx(0.0)) apply_single_mode(w, j, displacement_matrix(gate.d(j), box));
  return w.resized(cutoff);
}

namespace {

void require_normalized(const FockVector& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-6) {
    std::ostringstream os;
    os << what << " is not normalized (norm " << v.norm() << ")";
    fail(ErrorKind::kUsage, os.str());
  }
}

cplx overlap(const FockVector& a, const FockVector& b) {
  if (a.n_modes() != b.n_modes()) fail(ErrorKind::kUsage, "fidelity between states of different mode count");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx x = a.data(static_cast<Eigen::Index>(i));
    if (x == cplx(0.0)) continue;
    const MultiIndex n = a.multi_index(i);
    if (b.contains(n)) s += std::conj(x) * b.at(n);
  }
  return s;
}

}  // namespace

double fidelity(const FockVector& a, const FockVector& b) {
  require_normalized(a, "first state");
  require_normalized(b, "second state");
  return std::min(1.0, std::norm(overlap(a, b)));
}

double fidelity(const GatedFock& a, const GatedFock& b, int cutoff) {
  require_normalized(a.v, "first state");
  require_normalized(b.v, "second state");
  return std::min(1.0, std::norm(overlap(apply_gate(a.gate, a.v, cutoff), apply_gate(b.gate, b.v, cutoff))));
}

double fidelity(const GatedFock& a, const FockVector& b, int cutoff) {
  return fidelity(a, GatedFock{Gate::identity(b.n_modes()), b}, cutoff);
}

double wigner_of_fock_point(const FockVector& v, const Gate& gate, const CVec& alpha) {
  const int m = v.n_modes();
  const GaussianUnitary gi = gate_inverse_unitary(gate);
  CVec xi(2 * m);
  xi << alpha.conjugate(), alpha;
  const CVec beta = (gi.s * xi + gi.d).tail(m);

  std::vector<std::pair<MultiIndex, cplx>> terms;
  int nmax = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx c = v.data(static_cast<Eigen::Index>(i));
    if (c == cplx(0.0)) continue;
    terms.emplace_back(v.multi_index(i), c);
    for (int x : terms.back().first) nmax = std::max(nmax, x);
  }
  std::vector<CMat> w(m);
  for (int k = 0; k < m; ++k) {
    const cplx b = beta(k);
    w[k] = hermite_2d_table(nmax, nmax, 2.0 * std::conj(b), 2.0 * b) * std::exp(-2.0 * std::norm(b));
    for (int i = 0; i <= nmax; ++i)
      for (int j = 0; j <= nmax; ++j) w[k](i, j) /= std::sqrt(std::tgamma(i + 1.0) * std::tgamma(j + 1.0));
  }
  cplx s = 0.0;
  for (const auto& [li, ci] : terms) {
    for (const auto& [lj, cj] : terms) {
      cplx p = ci * std::conj(cj);
      for (int k = 0; k < m; ++k) p *= w[k](li[k], lj[k]);
      s += p;
    }
  }
  s *= std::pow(2.0 / M_PI, m);
  if (!(std::abs(s.imag()) <= 1e-10 * std::max(1.0, std::abs(s.real()))))
    fail(ErrorKind::kNumericalHealth, "Wigner value of Fock superposition is not real");
  return s.real();
}

WignerGrid wigner_of_fock_superposition(const FockVector& v, const Gate& gate, const std::vector<AxisSpec>& axes) {
  require_normalized(v, "Fock superposition");
  const int m = v.n_modes();
  if (static_cast<int>(axes.size()) != 2 * m) fail(ErrorKind::kUsage, "grid needs a q and a p axis per mode");
  WignerGrid g;
  g.n_modes = m;
  g.axes = axes;
  std::size_t total = 1;
  for (const auto& ax : axes) total *= static_cast<std::size_t>(ax.resolution);
  g.values.resize(total);
  CVec alpha(m);
  for (std::size_t i = 0; i < total; ++i) {
    const auto c = g.coordinates(i);
    for (int k = 0; k < m; ++k) alpha(k) = cplx(c[k], c[m + k]) / std::sqrt(2.0);
    g.values[i] = wigner_of_fock_point(v, gate, alpha);
  }
  return g;
}

double gaussian_wigner(const GaussianState& input, const CVec& alpha) {
  const GaussianState st = to_complex(input);
  const int m = st.n_modes;
  if (alpha.size() != m) fail(ErrorKind::kStructural, "alpha length must equal the number of modes");
  CVec xi(2 * m);
  xi << alpha.conjugate(), alpha;
  xi -= st.mean;
  Eigen::PartialPivLU<CMat> lu(st.cov);
  const cplx e = -0.5 * (xi.adjoint() * lu.solve(xi))(0);
  return (std::exp(e) / (std::pow(M_PI, m) * std::sqrt(lu.determinant()))).real();
}

}  // namespace hgs
