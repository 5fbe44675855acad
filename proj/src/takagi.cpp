#include "hgs/takagi.hpp"

#include <algorithm>
#include <numeric>

namespace hgs {

namespace {

void fix_column_sign(Eigen::Ref<CVec> col) {
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    const cplx v = col(i);
    if (std::abs(v) < 1e-12) continue;
    const bool flip = std::abs(v.real()) > 1e-12 ? v.real() < 0 : v.imag() < 0;
    if (flip) col = -col;
    return;
  }
}

}  // namespace

TakagiResult takagi(const CMat& b_in) {
  const Eigen::Index n = b_in.rows();
  if (b_in.cols() != n) fail(ErrorKind::kStructural, "takagi: matrix is not square");
  if (n == 0) return {CMat(0, 0), RVec(0)};
  if ((b_in - b_in.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorKind::kStructural, "takagi: matrix is not symmetric");
  const CMat b = 0.5 * (b_in + b_in.transpose());

  // B conj(k) = lambda k  <=>  H [Re k; Im k] = lambda [Re k; Im k].
  RMat h(2 * n, 2 * n);
  h << b.real(), b.imag(), b.imag(), -b.real();
  Eigen::SelfAdjointEigenSolver<RMat> es(h);
  const RVec& ev = es.eigenvalues();
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  const double tol = 1e-13 * scale * static_cast<double>(n);

  std::vector<Eigen::Index> pos;
  for (Eigen::Index i = 2 * n - 1; i >= 0 && static_cast<Eigen::Index>(pos.size()) < n; --i)
    if (ev(i) > tol) pos.push_back(i);

  CMat k(n, n);
  RVec lambda = RVec::Zero(n);
  Eigen::Index col = 0;
  for (Eigen::Index i : pos) {
    const RVec v = es.eigenvectors().col(i);
    CVec kc(n);
    for (Eigen::Index r = 0; r < n; ++r) kc(r) = cplx(v(r), v(n + r));
    k.col(col) = kc / kc.norm();
    lambda(col) = ev(i);
    ++col;
  }
  // Complete the null space with a complex Gram-Schmidt pass over unit vectors.
  for (Eigen::Index e = 0; e < n && col < n; ++e) {
    CVec cand = CVec::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < col; ++j) cand -= k.col(j) * k.col(j).dot(cand);
    const double nrm = cand.norm();
    if (nrm < 1e-8) continue;
    k.col(col++) = cand / nrm;
  }
  if (col != n) fail(ErrorKind::kNumericalHealth, "takagi: failed to complete unitary factor");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index c) { return lambda(a) > lambda(c) + 1e-12; });
  TakagiResult res{CMat(n, n), RVec(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    res.k.col(j) = k.col(order[j]);
    res.lambda(j) = lambda(order[j]);
    fix_column_sign(res.k.col(j));
  }
  return res;
}

}  // namespace hgs
