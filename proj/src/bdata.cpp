#include "hgs/bdata.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hgs/takagi.hpp"

namespace hgs {

void Health::note_rcond(double rcond, const char* where) {
  worst_rcond = std::min(worst_rcond, rcond);
  if (rcond < 1e-12) {
    std::ostringstream os;
    os << where << ": reciprocal condition number " << rcond;
    warnings.push_back(os.str());
  }
}

void Health::merge(const Health& o) {
  worst_rcond = std::min(worst_rcond, o.worst_rcond);
  max_term = std::max(max_term, o.max_term);
  warnings.insert(warnings.end(), o.warnings.begin(), o.warnings.end());
}

std::vector<int> complement_modes(int n, const std::vector<int>& modes) {
  std::vector<int> flag(n, 0);
  for (int k : modes) {
    if (k < 0 || k >= n) fail(ErrorKind::kUsage, "mode index out of range");
    if (flag[k]++) fail(ErrorKind::kUsage, "mode index repeated");
  }
  std::vector<int> out;
  for (int k = 0; k < n; ++k)
    if (!flag[k]) out.push_back(k);
  return out;
}

double max_singular_value(const CMat& b) {
  if (b.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(b);
  return svd.singularValues()(0);
}

namespace {

void check_heralded(int n, const std::vector<int>& heralded) {
  if (heralded.empty()) fail(ErrorKind::kUsage, "heralded mode set is empty");
  if (static_cast<int>(heralded.size()) >= n)
    fail(ErrorKind::kUsage, "heralded modes cover every mode; nothing is measured");
}

void partition(BData& bd) {
  const int n = bd.n_modes;
  const int m = bd.m();
  std::vector<int> p;
  for (int k : bd.heralded) p.push_back(k);
  for (int k : bd.heralded) p.push_back(n + k);
  for (int k : bd.detected) p.push_back(k);
  for (int k : bd.detected) p.push_back(n + k);
  bd.r = bd.r_tilde(p, p);
  bd.y = bd.y_tilde(p);
  const int dd = 2 * (n - m);
  bd.r_hh = bd.r.topLeftCorner(2 * m, 2 * m);
  bd.r_hd = bd.r.topRightCorner(2 * m, dd);
  bd.r_dh = bd.r.bottomLeftCorner(dd, 2 * m);
  bd.r_dd = bd.r.bottomRightCorner(dd, dd);
  bd.y_h = bd.y.head(2 * m);
  bd.y_d = bd.y.tail(dd);
}

void fill_pure_blocks(BData& bd, const CMat& b_orig, const CVec& w_orig) {
  std::vector<int> order(bd.heralded);
  order.insert(order.end(), bd.detected.begin(), bd.detected.end());
  bd.b = b_orig(order, order);
  bd.w = w_orig(order);
}

}  // namespace

BData b_data(const GaussianState& input, const std::vector<int>& heralded) {
  const GaussianState st = to_complex(input);
  const int n = st.n_modes;
  check_heralded(n, heralded);
  const StateDiagnostic diag = validate_state(st);
  if (!diag.valid) fail(ErrorKind::kUnphysical, "state is unphysical: " + diag.message);

  BData bd;
  bd.n_modes = n;
  bd.heralded = heralded;
  bd.detected = complement_modes(n, heralded);
  const CMat id = CMat::Identity(2 * n, 2 * n);
  const CMat x = x_matrix(n);
  const CMat vp = 2.0 * st.cov + id;
  Eigen::PartialPivLU<CMat> lu(vp);
  bd.health.note_rcond(lu.rcond(), "b_data (2V+I)");
  bd.r_tilde = x * lu.solve(2.0 * st.cov - id);
  bd.y_tilde = 2.0 * x * lu.solve(st.mean);
  const cplx qy = (st.mean.transpose() * bd.y_tilde)(0);
  const double det = lu.determinant().real();
  bd.p0 = std::pow(2.0, n) * std::exp(-0.5 * qy) / std::sqrt(det);
  bd.pure = std::abs(diag.purity - 1.0) < 1e-8;
  partition(bd);
  if (bd.pure) {
    const CMat b = 0.5 * (bd.r_tilde.topLeftCorner(n, n) + bd.r_tilde.topLeftCorner(n, n).transpose());
    fill_pure_blocks(bd, b, bd.y_tilde.head(n));
  }
  return bd;
}

BData b_data_from_pure(const CMat& b_in, const CVec& w, const std::vector<int>& heralded) {
  const int n = static_cast<int>(b_in.rows());
  if (b_in.cols() != n || w.size() != n) fail(ErrorKind::kStructural, "B must be N x N and w length N");
  if ((b_in - b_in.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorKind::kStructural, "B is not symmetric");
  check_heralded(n, heralded);
  const CMat b = 0.5 * (b_in + b_in.transpose());
  if (max_singular_value(b) >= 1.0) fail(ErrorKind::kUnphysical, "singular values of B must be below one");

  BData bd;
  bd.n_modes = n;
  bd.heralded = heralded;
  bd.detected = complement_modes(n, heralded);
  bd.pure = true;
  bd.r_tilde = CMat::Zero(2 * n, 2 * n);
  bd.r_tilde.topLeftCorner(n, n) = b;
  bd.r_tilde.bottomRightCorner(n, n) = b.conjugate();
  bd.y_tilde.resize(2 * n);
  bd.y_tilde << w, w.conjugate();
  const CMat x = x_matrix(n);
  const CMat a = CMat::Identity(2 * n, 2 * n) - x * bd.r_tilde;
  Eigen::PartialPivLU<CMat> lu(a);
  bd.health.note_rcond(lu.rcond(), "b_data_from_pure (I-XR)");
  const cplx ex = (bd.y_tilde.transpose() * lu.solve(x * bd.y_tilde))(0);
  bd.p0 = std::sqrt(lu.determinant()) * std::exp(-0.5 * ex);
  partition(bd);
  fill_pure_blocks(bd, b, w);
  return bd;
}

CMat b_from_circuit(const CircuitSpec& c) {
  check_circuit(c);
  CVec t(c.n_modes);
  for (int j = 0; j < c.n_modes; ++j)
    t(j) = std::polar(std::tanh(std::abs(c.squeezings(j))), std::arg(c.squeezings(j)));
  return c.unitary * t.asDiagonal() * c.unitary.transpose();
}

GaussianState state_from_b(const CMat& b, const CVec& w) {
  const int n = static_cast<int>(b.rows());
  CMat r = CMat::Zero(2 * n, 2 * n);
  r.topLeftCorner(n, n) = b;
  r.bottomRightCorner(n, n) = b.conjugate();
  CVec y(2 * n);
  y << w, w.conjugate();
  const CMat x = x_matrix(n);
  const CMat id = CMat::Identity(2 * n, 2 * n);
  const CMat z = x * r;
  Eigen::PartialPivLU<CMat> lu(id - z);
  // (I+Z)(I-Z)^{-1} = (I-Z)^{-1}(I+Z) since the factors commute.
  const CMat v = 0.5 * lu.solve(id + z);
  return make_state(lu.solve(x * y), v);
}

CMat b_from_state(const GaussianState& st) {
  if (!is_pure(st)) fail(ErrorKind::kUnsupported, "B is defined for pure states only");
  const GaussianState c = to_complex(st);
  const int n = c.n_modes;
  const CMat id = CMat::Identity(2 * n, 2 * n);
  const CMat r = x_matrix(n) * (2.0 * c.cov + id).partialPivLu().solve(2.0 * c.cov - id);
  const CMat b = r.topLeftCorner(n, n);
  return 0.5 * (b + b.transpose());
}

CircuitSpec circuit_from_b(const CMat& b, const CVec& w) {
  const int n = static_cast<int>(b.rows());
  if (max_singular_value(b) >= 1.0) fail(ErrorKind::kUnphysical, "singular values of B must be below one");
  const TakagiResult t = takagi(b);
  CircuitSpec c;
  c.n_modes = n;
  c.unitary = t.k;
  c.squeezings.resize(n);
  for (int j = 0; j < n; ++j) c.squeezings(j) = std::atanh(t.lambda(j));
  const GaussianState st = state_from_b(b, w);
  c.displacements = t.k.adjoint() * st.mean.tail(n);
  return c;
}

CVec w_from_state(const GaussianState& st) {
  const GaussianState c = to_complex(st);
  const int n = c.n_modes;
  const CMat id = CMat::Identity(2 * n, 2 * n);
  const CVec y = 2.0 * x_matrix(n) * (2.0 * c.cov + id).partialPivLu().solve(c.mean);
  return y.head(n);
}

}  // namespace hgs
