#include "hgs/mesh.hpp"

#include <cmath>

#include "hgs/gaussian_state.hpp"

namespace hgs {

double MeshElement::transmissivity() const {
  const double c = std::cos(theta);
  return c * c;
}

CMat mesh_element_matrix(const MeshElement& e, int n) {
  CMat t = CMat::Identity(n, n);
  const double c = std::cos(e.theta), s = std::sin(e.theta);
  const cplx ph = std::polar(1.0, e.phi);
  t(e.mode, e.mode) = ph * c;
  t(e.mode, e.mode + 1) = -s;
  t(e.mode + 1, e.mode) = ph * s;
  t(e.mode + 1, e.mode + 1) = c;
  return t;
}

namespace {

// Right action U <- U T^dag on columns (m, m+1) that zeroes U(row, m).
MeshElement null_from_right(CMat& u, int row, int m) {
  const cplx a = u(row, m), b = u(row, m + 1);
  MeshElement e{m, std::atan2(std::abs(a), std::abs(b)), std::arg(a) - std::arg(b)};
  if (std::abs(a) == 0.0) e = MeshElement{m, 0.0, 0.0};  // already null
  u = u * mesh_element_matrix(e, static_cast<int>(u.rows())).adjoint();
  return e;
}

// Left action U <- T U on rows (m, m+1) that zeroes U(m+1, col).
MeshElement null_from_left(CMat& u, int m, int col) {
  const cplx a = u(m, col), b = u(m + 1, col);
  MeshElement e{m, std::atan2(std::abs(b), std::abs(a)), M_PI + std::arg(b) - std::arg(a)};
  if (std::abs(b) == 0.0) e = MeshElement{m, 0.0, 0.0};
  u = mesh_element_matrix(e, static_cast<int>(u.rows())) * u;
  return e;
}

}  // namespace

Mesh decompose_interferometer(const CMat& u_in) {
  const int n = static_cast<int>(u_in.rows());
  if (u_in.cols() != n) fail(ErrorKind::kStructural, "interferometer must be square");
  if (unitarity_error(u_in) > 1e-10) fail(ErrorKind::kStructural, "interferometer is not unitary");
  CMat u = u_in;
  std::vector<MeshElement> right, left;
  for (int i = 0; i + 1 < n; ++i) {
    if (i % 2 == 0) {
      for (int j = 0; j <= i; ++j) right.push_back(null_from_right(u, n - 1 - j, i - j));
    } else {
      for (int j = 1; j <= i + 1; ++j) left.push_back(null_from_left(u, n + j - i - 3, j - 1));
    }
  }
  // Now L U R = D with L = T_Lk..T_L1 and R = T_R1^dag T_R2^dag ..., so
  // U = T_L1^dag .. T_Lk^dag D T_Rm .. T_R1. Push each T^dag through D.
  CVec d = u.diagonal();
  std::vector<MeshElement> moved;
  for (auto it = left.rbegin(); it != left.rend(); ++it) {
    const int m = it->mode;
    const cplx d1 = d(m), d2 = d(m + 1);
    MeshElement e{m, it->theta, std::arg(-d1 / d2)};
    if (it->theta == 0.0) {
      // A pure phase commutes with D; no swap of d1 and d2 needed.
      e.phi = 0.0;
      d(m) = std::polar(1.0, -it->phi) * d1;
    } else {
      d(m) = -std::polar(1.0, -it->phi) * d2;
    }
    moved.push_back(e);
  }
  // U = D' T'_1 .. T'_k T_Rm .. T_R1, where moved holds T'_k first.
  Mesh mesh;
  mesh.n_modes = n;
  mesh.elements = right;
  for (const auto& e : moved) mesh.elements.push_back(e);
  mesh.output_phases.resize(n);
  for (int j = 0; j < n; ++j) mesh.output_phases(j) = std::arg(d(j));
  return mesh;
}

CMat recompose(const Mesh& mesh) {
  const int n = mesh.n_modes;
  CMat u = CMat::Identity(n, n);
  for (const auto& e : mesh.elements) u = mesh_element_matrix(e, n) * u;
  CVec ph(n);
  for (int j = 0; j < n; ++j) ph(j) = std::polar(1.0, mesh.output_phases(j));
  return ph.asDiagonal() * u;
}

}  // namespace hgs
