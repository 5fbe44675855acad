#pragma once

#include "hgs/types.hpp"

namespace hgs {

// Two-mode element on (mode, mode + 1):
//   [[e^{i phi} cos theta, -sin theta], [e^{i phi} sin theta, cos theta]].
struct MeshElement {
  int mode = 0;
  double theta = 0.0;
  double phi = 0.0;
  double transmissivity() const;
};

// Rectangular mesh. Elements are listed in the order light meets them; the
// output phases act last. U = diag(e^{i out}) * T_last * ... * T_first.
struct Mesh {
  int n_modes = 0;
  std::vector<MeshElement> elements;
  RVec output_phases;
};

Mesh decompose_interferometer(const CMat& u);
CMat recompose(const Mesh& mesh);
CMat mesh_element_matrix(const MeshElement& e, int n_modes);

}  // namespace hgs
