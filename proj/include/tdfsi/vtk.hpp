// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_VTK_HPP
#define TDFSI_VTK_HPP

#include <string>
#include <utility>
#include <vector>

#include "tdfsi/mesh.hpp"

namespace tdfsi
{

// Nodal data attached to a VTK export. Vector fields have 3 values per node
// in interleaved order.
struct VtkField
{
  std::string name;
  int components = 1;
  std::vector<double> values;
};

// Legacy ASCII unstructured grid: tets (cell type 10) followed by the
// boundary triangles (cell type 5).
void write_vtk(const std::string &path, const VolumeMesh &mesh, const SurfaceMesh *surf,
               const std::vector<VtkField> &point_data = {});

}  // namespace tdfsi

#endif  // TDFSI_VTK_HPP
