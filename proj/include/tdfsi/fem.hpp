// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_FEM_HPP
#define TDFSI_FEM_HPP

#include <string>

#include <Eigen/Sparse>

#include "tdfsi/mesh.hpp"

namespace tdfsi
{

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct MaterialParams
{
  double lam = 2.0;
  double mu = 1.0;
};

void validate_material(const MaterialParams &mat);

// Vector unknowns use dof(i, nu) = 3 i + nu.
inline int vector_dof(int node, int component)
{
  return 3 * node + component;
}

struct CouplingBlocks
{
  SparseMatrix A;      // 3N_o x 3N_o Lame stiffness
  SparseMatrix M;      // 3N_o x 3N_o vector mass
  SparseMatrix I_bnd;  // N_s x N_s boundary mass
  SparseMatrix nxRI;   // N_s x 3N_o, entries int xi_i (n . e_nu) eta_j
};

SparseMatrix assemble_lame_stiffness(const VolumeMesh &mesh, const MaterialParams &mat);
SparseMatrix assemble_mass(const VolumeMesh &mesh);
SparseMatrix assemble_boundary_mass(const VolumeMesh &mesh, const SurfaceMesh &surf);
SparseMatrix assemble_trace_coupling(const VolumeMesh &mesh, const SurfaceMesh &surf);
CouplingBlocks assemble_coupling_blocks(const VolumeMesh &mesh, const SurfaceMesh &surf,
                                        const MaterialParams &mat);

// Coordinate-format text dump: "row col value", 0-based, 17 significant digits.
void write_coo(const std::string &path, const SparseMatrix &m);

}  // namespace tdfsi

#endif  // TDFSI_FEM_HPP
