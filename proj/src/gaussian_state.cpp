#include "hgs/gaussian_state.hpp"

#include <cmath>
#include <sstream>

namespace hgs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return "structural";
    case ErrorKind::kUsage: return "usage";
    case ErrorKind::kUnphysical: return "unphysical";
    case ErrorKind::kNumericalHealth: return "numerical-health";
    case ErrorKind::kResource: return "resource";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kConvergence: return "convergence";
    case ErrorKind::kInfeasible: return "infeasible";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

CMat omega_matrix(int n) {
  const double s = 1.0 / std::sqrt(2.0);
  CMat om = CMat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    om(j, j) = kI * s;
    om(j, n + j) = -kI * s;
    om(n + j, j) = s;
    om(n + j, n + j) = s;
  }
  return om;
}

CMat x_matrix(int n) {
  CMat x = CMat::Zero(2 * n, 2 * n);
  x.topRightCorner(n, n).setIdentity();
  x.bottomLeftCorner(n, n).setIdentity();
  return x;
}

CMat sigma3_matrix(int n) {
  CMat s = CMat::Identity(2 * n, 2 * n);
  s.bottomRightCorner(n, n) *= -1.0;
  return s;
}

GaussianState make_state(const CVec& mean, const CMat& cov, Basis basis) {
  if (cov.rows() != cov.cols() || cov.rows() == 0 || cov.rows() % 2 != 0) {
    std::ostringstream os;
    os << "covariance must be square with even positive dimension, got " << cov.rows() << "x"
       << cov.cols();
    fail(ErrorKind::kStructural, os.str());
  }
  if (mean.size() != cov.rows()) {
    std::ostringstream os;
    os << "mean length " << mean.size() << " does not match covariance dimension " << cov.rows();
    fail(ErrorKind::kStructural, os.str());
  }
  GaussianState st;
  st.n_modes = static_cast<int>(cov.rows() / 2);
  st.basis = basis;
  st.mean = mean;
  st.cov = 0.5 * (cov + cov.adjoint());
  return st;
}

GaussianState vacuum_state(int n) {
  return make_state(CVec::Zero(2 * n), 0.5 * CMat::Identity(2 * n, 2 * n));
}

GaussianState to_real(const GaussianState& st) {
  if (st.basis == Basis::kReal) return st;
  const CMat om = omega_matrix(st.n_modes);
  GaussianState out = st;
  out.basis = Basis::kReal;
  out.mean = om * st.mean;
  out.cov = om * st.cov * om.adjoint();
  out.cov = 0.5 * (out.cov + out.cov.adjoint());
  return out;
}

GaussianState to_complex(const GaussianState& st) {
  if (st.basis == Basis::kComplex) return st;
  const CMat om = omega_matrix(st.n_modes);
  GaussianState out = st;
  out.basis = Basis::kComplex;
  out.mean = om.adjoint() * st.mean;
  out.cov = om.adjoint() * st.cov * om;
  out.cov = 0.5 * (out.cov + out.cov.adjoint());
  return out;
}

StateDiagnostic validate_state(const GaussianState& input) {
  if (input.mean.size() != input.cov.rows() || input.cov.rows() != input.cov.cols() ||
      input.cov.rows() != 2 * input.n_modes) {
    fail(ErrorKind::kStructural, "mean/covariance dimensions are inconsistent");
  }
  const GaussianState st = to_complex(input);
  const int n = st.n_modes;
  StateDiagnostic d;
  CMat m = st.cov + 0.5 * sigma3_matrix(n);
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  d.purity = (2.0 * st.cov).determinant().real();
  d.valid = d.min_eigenvalue >= -1e-9;
  d.message = d.valid ? "ok" : "uncertainty violated";
  return d;
}

bool is_pure(const GaussianState& st, double tol) {
  const GaussianState c = to_complex(st);
  return std::abs((2.0 * c.cov).determinant() - 1.0) < tol;
}

double unitarity_error(const CMat& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

void check_circuit(const CircuitSpec& c) {
  const int n = c.n_modes;
  if (n <= 0) fail(ErrorKind::kStructural, "n_modes must be positive");
  if (c.squeezings.size() != n) fail(ErrorKind::kStructural, "squeezings length must equal n_modes");
  if (c.displacements.size() != n)
    fail(ErrorKind::kStructural, "displacements length must equal n_modes");
  if (c.unitary.rows() != n || c.unitary.cols() != n)
    fail(ErrorKind::kStructural, "unitary must be n_modes x n_modes");
  const double err = unitarity_error(c.unitary);
  if (!(err <= 1e-10)) {
    std::ostringstream os;
    os << "unitary deviates from unitarity by " << err;
    fail(ErrorKind::kStructural, os.str());
  }
}

Eigen::Matrix2cd squeeze_symplectic(cplx zeta) {
  const double r = std::abs(zeta);
  const double phi = std::arg(zeta);
  Eigen::Matrix2cd s;
  s << std::cosh(r), std::polar(std::sinh(r), -phi), std::polar(std::sinh(r), phi), std::cosh(r);
  return s;
}

GaussianUnitary passive_unitary(const CMat& u) {
  const int m = static_cast<int>(u.rows());
  GaussianUnitary g;
  g.s = CMat::Zero(2 * m, 2 * m);
  g.s.topLeftCorner(m, m) = u.conjugate();
  g.s.bottomRightCorner(m, m) = u;
  g.d = CVec::Zero(2 * m);
  return g;
}

GaussianUnitary squeezer_unitary(const CVec& zetas) {
  const int m = static_cast<int>(zetas.size());
  GaussianUnitary g;
  g.s = CMat::Zero(2 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    const Eigen::Matrix2cd s = squeeze_symplectic(zetas(j));
    g.s(j, j) = s(0, 0);
    g.s(j, m + j) = s(0, 1);
    g.s(m + j, j) = s(1, 0);
    g.s(m + j, m + j) = s(1, 1);
  }
  g.d = CVec::Zero(2 * m);
  return g;
}

GaussianUnitary displacement_unitary(const CVec& alphas) {
  const int m = static_cast<int>(alphas.size());
  GaussianUnitary g;
  g.s = CMat::Identity(2 * m, 2 * m);
  g.d.resize(2 * m);
  g.d << alphas.conjugate(), alphas;
  return g;
}

GaussianUnitary compose(const GaussianUnitary& first, const GaussianUnitary& second) {
  GaussianUnitary g;
  g.s = second.s * first.s;
  g.d = second.s * first.d + second.d;
  return g;
}

GaussianState state_from_circuit(const CircuitSpec& c) {
  check_circuit(c);
  GaussianUnitary g = compose(squeezer_unitary(c.squeezings), displacement_unitary(c.displacements));
  g = compose(g, passive_unitary(c.unitary));
  const int n = c.n_modes;
  return make_state(g.d, g.s * (0.5 * CMat::Identity(2 * n, 2 * n)) * g.s.adjoint());
}

GaussianState apply_gaussian_unitary(const GaussianState& input, const std::vector<int>& modes,
                                     const GaussianUnitary& u) {
  const GaussianState st = to_complex(input);
  const int n = st.n_modes;
  const int m = static_cast<int>(modes.size());
  if (u.s.rows() != 2 * m || u.s.cols() != 2 * m || u.d.size() != 2 * m)
    fail(ErrorKind::kStructural, "gate dimension does not match the number of target modes");
  std::vector<int> seen(n, 0);
  for (int k : modes) {
    if (k < 0 || k >= n) fail(ErrorKind::kUsage, "gate mode index out of range");
    if (seen[k]++) fail(ErrorKind::kUsage, "gate mode index repeated");
  }
  CMat s = CMat::Identity(2 * n, 2 * n);
  CVec d = CVec::Zero(2 * n);
  for (int a = 0; a < 2 * m; ++a) {
    const int ia = (a < m) ? modes[a] : n + modes[a - m];
    d(ia) = u.d(a);
    for (int b = 0; b < 2 * m; ++b) {
      const int ib = (b < m) ? modes[b] : n + modes[b - m];
      s(ia, ib) = u.s(a, b);
    }
  }
  GaussianState out = make_state(s * st.mean + d, s * st.cov * s.adjoint());
  return input.basis == Basis::kReal ? to_real(out) : out;
}

}  // namespace hgs
