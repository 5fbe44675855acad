#include "hgs/herald.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <algorithm>
#include <functional>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include "hgs/takagi.hpp"

namespace hgs {

int DetectionPattern::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Gate Gate::identity(int m) {
  return Gate{CMat::Identity(m, m), CVec::Zero(m), CVec::Zero(m)};
}

GaussianUnitary gate_unitary(const Gate& g) {
  GaussianUnitary u = compose(passive_unitary(g.k.adjoint()), squeezer_unitary(g.zeta));
  u = compose(u, passive_unitary(g.k));
  return compose(u, displacement_unitary(g.d));
}

GaussianUnitary gate_inverse_unitary(const Gate& g) {
  GaussianUnitary u = compose(displacement_unitary(-g.d), passive_unitary(g.k.adjoint()));
  u = compose(u, squeezer_unitary(-g.zeta));
  return compose(u, passive_unitary(g.k));
}

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double multi_factorial(const std::vector<int>& v) {
  double f = 1.0;
  for (int k : v) f *= factorial(k);
  return f;
}

void require_pure(const BData& bd, const char* what) {
  if (!bd.pure)
    fail(ErrorKind::kUnsupported, std::string(what) + " is defined for pure Gaussian inputs only");
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> o(a);
  o.insert(o.end(), b.begin(), b.end());
  return o;
}

// Shared blocks of the pure-state coefficient generating function.
struct PureBlocks {
  CMat c1, c2;
  CVec y;  // Y = y_d + R_dh L X y_h (length 2D)
};

CVec big_y(const BData& bd) {
  const int m = bd.m();
  const CMat x = x_matrix(m);
  const CMat a = CMat::Identity(2 * m, 2 * m) - x * bd.r_hh;
  return bd.y_d + bd.r_dh * a.partialPivLu().solve(x * bd.y_h);
}

PureBlocks pure_blocks(const BData& bd) {
  require_pure(bd, "coefficient extraction");
  const int m = bd.m(), d = bd.d();
  const CMat bhh = bd.b.topLeftCorner(m, m);
  const CMat bhd = bd.b.topRightCorner(m, d);
  const CMat bdd = bd.b.bottomRightCorner(d, d);
  CMat s = CMat::Identity(m, m) - bhh.conjugate() * bhh;
  s = 0.5 * (s + s.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(s);
  if (es.eigenvalues().minCoeff() <= 0.0)
    fail(ErrorKind::kUnphysical, "heralded block of B has a singular value of one or more");
  const CMat s_inv_half =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  PureBlocks pb;
  pb.c1 = s_inv_half * bhd.conjugate();
  pb.c2 = bdd + bhd.transpose() * s.ldlt().solve(bhh.conjugate() * bhd);
  pb.y = big_y(bd);
  return pb;
}

}  // namespace

std::vector<int> counts_in_detected_order(const BData& bd, const DetectionPattern& p) {
  if (p.modes.size() != p.counts.size())
    fail(ErrorKind::kStructural, "pattern modes and counts differ in length");
  std::vector<int> out(bd.d(), -1);
  for (std::size_t i = 0; i < p.modes.size(); ++i) {
    int pos = -1;
    for (int j = 0; j < bd.d(); ++j)
      if (bd.detected[j] == p.modes[i]) pos = j;
    if (pos < 0) fail(ErrorKind::kUsage, "pattern names a mode that is not measured");
    if (out[pos] >= 0) fail(ErrorKind::kUsage, "pattern names a mode twice");
    if (p.counts[i] < 0) fail(ErrorKind::kUsage, "photon counts must be nonnegative");
    out[pos] = p.counts[i];
  }
  for (int c : out)
    if (c < 0) fail(ErrorKind::kUsage, "pattern does not cover every measured mode");
  return out;
}

double probability_from_bdata(const BData& bd, const std::vector<int>& counts, Health* health,
                              int order_cap) {
  const int m = bd.m();
  if (static_cast<int>(counts.size()) != bd.d())
    fail(ErrorKind::kStructural, "counts length must equal the number of measured modes");
  const CMat x = x_matrix(m);
  const CMat a = CMat::Identity(2 * m, 2 * m) - x * bd.r_hh;
  Eigen::PartialPivLU<CMat> lu(a);
  if (health) health->note_rcond(lu.rcond(), "probability (I-XR_hh)");
  const CVec lxy = lu.solve(x * bd.y_h);
  const cplx expo = (bd.y_h.transpose() * lxy)(0);
  const cplx pref = bd.p0 / multi_factorial(counts) / std::sqrt(lu.determinant()) * std::exp(0.5 * expo);
  GaussianExponential g{bd.r_dd + bd.r_dh * lu.solve(x * bd.r_hd), bd.y_d + bd.r_dh * lxy};
  DerivStats st;
  const cplx p = pref * gaussian_derivative(g, concat(counts, counts), order_cap, &st);
  if (health) health->max_term = std::max(health->max_term, st.max_term * std::abs(pref));
  const double tol = 1e-9 * std::max(1.0, std::abs(p.real()));
  if (!(std::abs(p.imag()) <= tol)) {
    std::ostringstream os;
    os << "probability has imaginary residue " << p.imag();
    fail(ErrorKind::kNumericalHealth, os.str());
  }
  return std::clamp(p.real(), 0.0, 1.0 + 1e-9);
}

double herald_probability(const GaussianState& state, const DetectionPattern& pattern,
                          const std::vector<int>& heralded_in) {
  const std::vector<int> heralded =
      heralded_in.empty() ? complement_modes(state.n_modes, pattern.modes) : heralded_in;
  const BData bd = b_data(state, heralded);
  return probability_from_bdata(bd, counts_in_detected_order(bd, pattern));
}

ZeroPhoton zero_photon_gaussian(const BData& bd) {
  const int m = bd.m();
  const CMat x = x_matrix(m);
  const CMat id = CMat::Identity(2 * m, 2 * m);
  Eigen::PartialPivLU<CMat> lu(id - x * bd.r_hh);
  if (!(lu.rcond() > 1e-14)) fail(ErrorKind::kUnphysical, "I - X R_hh is singular");
  ZeroPhoton z;
  z.cov = 0.5 * lu.solve(id + x * bd.r_hh);
  z.cov = 0.5 * (z.cov + z.cov.adjoint());
  z.mean = lu.solve(x * bd.y_h);
  return z;
}

Gate extract_gate(const BData& bd) {
  require_pure(bd, "gate extraction");
  const int m = bd.m();
  const CMat bhh = bd.b.topLeftCorner(m, m);
  if (max_singular_value(bhh) >= 1.0)
    fail(ErrorKind::kUnphysical, "heralded block of B has a singular value of one or more");
  Gate g;
  g.d = zero_photon_gaussian(bd).mean.tail(m);
  if (m == 1) {
    g.k = CMat::Identity(1, 1);
    g.zeta = CVec::Constant(1, std::polar(std::atanh(std::abs(bhh(0, 0))), std::arg(bhh(0, 0))));
    return g;
  }
  const TakagiResult t = takagi(bhh);
  g.k = t.k;
  g.zeta.resize(m);
  for (int j = 0; j < m; ++j) g.zeta(j) = std::atanh(t.lambda(j));
  return g;
}

std::vector<MultiIndex> multi_indices(int m, int n_max) {
  std::vector<MultiIndex> out;
  MultiIndex cur(m, 0);
  // Lexicographic enumeration of all tuples with sum <= n_max.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, n_max);
  return out;
}

void fix_phase_and_normalize(CVec& c, const std::vector<MultiIndex>& index) {
  (void)index;  // multi_indices order is already lexicographic
  const double mx = c.cwiseAbs().maxCoeff();
  if (!(mx > 0.0)) fail(ErrorKind::kNumericalHealth, "heralded coefficients vanish");
  for (Eigen::Index i = c.size() - 1; i >= 0; --i) {
    if (std::abs(c(i)) > 1e-12 * mx) {
      c *= std::polar(1.0, -std::arg(c(i)));
      c(i) = std::abs(c(i));
      break;
    }
  }
  c /= c.norm();
}

CVec heralded_linear_term(const BData& bd) {
  require_pure(bd, "linear term");
  return big_y(bd).head(bd.d());
}

CVec heralded_amplitudes(const BData& bd, const std::vector<int>& counts, int order_cap) {
  const int m = bd.m(), d = bd.d();
  const int nt = std::accumulate(counts.begin(), counts.end(), 0);
  const PureBlocks pb = pure_blocks(bd);
  GaussianExponential g;
  g.a = CMat::Zero(m + d, m + d);
  g.a.topRightCorner(m, d) = pb.c1.conjugate();
  g.a.bottomLeftCorner(d, m) = pb.c1.adjoint();
  g.a.bottomRightCorner(d, d) = pb.c2;
  g.z = CVec::Zero(m + d);
  g.z.tail(d) = pb.y.head(d);
  const auto idx = multi_indices(m, nt);
  CVec c(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    c(i) = gaussian_derivative(g, concat(idx[i], counts), order_cap) / std::sqrt(multi_factorial(idx[i]));
  return c;
}

CoefficientMap fock_coefficients(const BData& bd, const std::vector<int>& counts, const HeraldOptions& opts,
                                 Health* health) {
  const int m = bd.m(), d = bd.d();
  const int nt = std::accumulate(counts.begin(), counts.end(), 0);
  if (static_cast<int>(counts.size()) != d)
    fail(ErrorKind::kStructural, "counts length must equal the number of measured modes");
  if (nt > opts.order_cap) {
    std::ostringstream os;
    os << "total photon number " << nt << " exceeds cap " << opts.order_cap;
    fail(ErrorKind::kResource, os.str());
  }
  CoefficientMap out;
  if (nt == 0) {
    require_pure(bd, "coefficient extraction");
    out[MultiIndex(m, 0)] = 1.0;
    return out;
  }
  const PureBlocks pb = pure_blocks(bd);
  // Variables (t, s, beta^*_d, alpha_d).
  const int dim = 2 * m + 2 * d;
  GaussianExponential g;
  g.a = CMat::Zero(dim, dim);
  g.a.block(0, 2 * m + d, m, d) = pb.c1;
  g.a.block(2 * m + d, 0, d, m) = pb.c1.transpose();
  g.a.block(m, 2 * m, m, d) = pb.c1.conjugate();
  g.a.block(2 * m, m, d, m) = pb.c1.adjoint();
  g.a.block(2 * m, 2 * m, d, d) = pb.c2;
  g.a.block(2 * m + d, 2 * m + d, d, d) = pb.c2.conjugate();
  g.z = CVec::Zero(dim);
  g.z.tail(2 * d) = pb.y;

  const auto idx = multi_indices(m, nt);
  const int n = static_cast<int>(idx.size());
  CMat gram(n, n);
  DerivStats st;
  const int cap = 2 * nt + 2 * nt;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::vector<int> order = concat(concat(idx[j], idx[i]), concat(counts, counts));
      const cplx v = gaussian_derivative(g, order, std::max(cap, kDefaultOrderCap), &st) /
                     std::sqrt(multi_factorial(idx[i]) * multi_factorial(idx[j]));
      gram(i, j) = v;
      gram(j, i) = std::conj(v);
    }
  }
  if (health) health->max_term = std::max(health->max_term, st.max_term);
  Eigen::SelfAdjointEigenSolver<CMat> es(gram);
  const RVec& ev = es.eigenvalues();
  const double top = ev(n - 1);
  if (!(top > 0.0)) fail(ErrorKind::kNumericalHealth, "Gram matrix has no positive eigenvalue");
  const double second = n > 1 ? std::max(std::abs(ev(0)), std::abs(ev(n - 2))) : 0.0;
  if (second > opts.gram_tolerance * top) {
    std::ostringstream os;
    os << "Gram matrix is not rank one: ratio " << second / top;
    fail(ErrorKind::kNumericalHealth, os.str());
  }
  CVec c = es.eigenvectors().col(n - 1) * std::sqrt(top);
  fix_phase_and_normalize(c, idx);
  for (int i = 0; i < n; ++i) out[idx[i]] = c(i);
  return out;
}

HeraldedState herald_from_bdata(const BData& bd, const std::vector<int>& counts, const HeraldOptions& opts) {
  HeraldedState hs;
  hs.heralded = bd.heralded;
  hs.health = bd.health;
  hs.gate = extract_gate(bd);
  hs.coefficients = fock_coefficients(bd, counts, opts, &hs.health);
  hs.probability = probability_from_bdata(bd, counts, &hs.health);
  hs.normalized = true;
  return hs;
}

HeraldedState herald(const GaussianState& state, const DetectionPattern& pattern,
                     const std::vector<int>& heralded_in, const HeraldOptions& opts) {
  const std::vector<int> heralded =
      heralded_in.empty() ? complement_modes(state.n_modes, pattern.modes) : heralded_in;
  const BData bd = b_data(state, heralded);
  return herald_from_bdata(bd, counts_in_detected_order(bd, pattern), opts);
}

GaussianState absorb_unitary(const GaussianState& state, const std::vector<int>& modes,
                             const std::vector<int>& measured, const GaussianUnitary& u) {
  for (int a : modes)
    for (int b : measured)
      if (a == b) fail(ErrorKind::kUsage, "gate acts on a measured mode");
  return apply_gaussian_unitary(state, modes, u);
}

double AxisSpec::step() const { return resolution > 1 ? 2.0 * half_width / (resolution - 1) : 0.0; }
double AxisSpec::point(int i) const {
  return resolution > 1 ? center - half_width + i * step() : center;
}

std::vector<double> WignerGrid::coordinates(std::size_t flat) const {
  std::vector<double> c(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const std::size_t r = static_cast<std::size_t>(axes[a].resolution);
    c[a] = axes[a].point(static_cast<int>(flat % r));
    flat /= r;
  }
  return c;
}

double WignerGrid::integral() const {
  double vol = 1.0;
  for (const auto& ax : axes) vol *= ax.step();
  double s = 0.0;
  for (double v : values) s += v;
  return s * vol / std::pow(2.0, n_modes);
}

std::vector<AxisSpec> uniform_axes(int m, double half_width, int resolution) {
  return std::vector<AxisSpec>(2 * m, AxisSpec{0.0, half_width, resolution});
}

WignerEvaluator::WignerEvaluator(const BData& bd, const std::vector<int>& counts, int order_cap)
    : order_(concat(counts, counts)), m_(bd.m()) {
  (void)order_cap;
  const int m = m_;
  const CMat x = x_matrix(m);
  const CMat id = CMat::Identity(2 * m, 2 * m);
  Eigen::PartialPivLU<CMat> lm(id - x * bd.r_hh);
  Eigen::PartialPivLU<CMat> lp(id + x * bd.r_hh);
  const CVec l4xy = lm.solve(x * bd.y_h);
  d_ = l4xy;
  l5_ = lp.solve(id - x * bd.r_hh);
  a_ = bd.r_dd - bd.r_dh * lp.solve(x * bd.r_hd);
  Eigen::PartialPivLU<CMat> lpt((id + x * bd.r_hh).transpose());
  zv_ = 2.0 * lpt.solve(bd.r_dh.transpose()).transpose();
  y_big_ = bd.y_d + bd.r_dh * l4xy;
  const cplx expo = (bd.y_h.transpose() * l4xy)(0);
  prefactor_ = std::pow(2.0 / M_PI, m) * bd.p0 / multi_factorial(counts) * std::exp(0.5 * expo) /
               std::sqrt(lp.determinant());
  probability_ = probability_from_bdata(bd, counts);
  if (!(probability_ > 0.0)) fail(ErrorKind::kNumericalHealth, "pattern has zero probability");
}

double WignerEvaluator::operator()(const CVec& alpha) const {
  CVec v(2 * m_);
  v << alpha.conjugate(), alpha;
  v -= d_;
  const cplx gauss = std::exp(-(v.adjoint() * l5_ * v)(0));
  const GaussianExponential g{a_, y_big_ + zv_ * v};
  const cplx w = prefactor_ * gauss * gaussian_derivative(g, order_) / probability_;
  if (!(std::abs(w.imag()) <= 1e-10 * std::max(1.0, std::abs(w.real())))) {
    std::ostringstream os;
    os << "Wigner value has imaginary residue " << w.imag();
    fail(ErrorKind::kNumericalHealth, os.str());
  }
  return w.real();
}

WignerGrid wigner_from_bdata(const BData& bd, const std::vector<int>& counts, const std::vector<AxisSpec>& axes) {
  const int m = bd.m();
  if (static_cast<int>(axes.size()) != 2 * m) fail(ErrorKind::kUsage, "grid needs a q and a p axis per heralded mode");
  std::size_t total = 1;
  for (const auto& ax : axes) {
    if (ax.resolution < 1 || ax.half_width < 0) fail(ErrorKind::kUsage, "invalid grid axis");
    total *= static_cast<std::size_t>(ax.resolution);
    if (total > 50'000'000) fail(ErrorKind::kResource, "Wigner grid exceeds the point budget");
  }
  const WignerEvaluator ev(bd, counts);
  WignerGrid grid;
  grid.n_modes = m;
  grid.axes = axes;
  grid.values.resize(total);
  grid.normalization = ev.probability();
  tbb::parallel_for(tbb::blocked_range<std::size_t>(0, total, 256), [&](const tbb::blocked_range<std::size_t>& r) {
    CVec alpha(m);
    for (std::size_t i = r.begin(); i != r.end(); ++i) {
      const std::vector<double> c = grid.coordinates(i);
      for (int k = 0; k < m; ++k) alpha(k) = cplx(c[k], c[m + k]) / std::sqrt(2.0);
      grid.values[i] = ev(alpha);
    }
  });
  return grid;
}

WignerGrid wigner(const GaussianState& state, const DetectionPattern& pattern, const std::vector<int>& heralded_in,
                  const std::vector<AxisSpec>& axes) {
  const std::vector<int> heralded =
      heralded_in.empty() ? complement_modes(state.n_modes, pattern.modes) : heralded_in;
  const BData bd = b_data(state, heralded);
  return wigner_from_bdata(bd, counts_in_detected_order(bd, pattern), axes);
}

}  // namespace hgs
