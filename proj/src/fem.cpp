// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/fem.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <vector>

#include "tdfsi/error.hpp"

namespace tdfsi
{

namespace
{

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets &t)
{
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double checked_volume(const VolumeMesh &mesh, const std::array<int, 4> &t)
{
  const double vol =
      tet_volume(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]], mesh.nodes[t[3]]);
  if (vol < 1e-14)
  {
    raise(ErrorCode::Assembly, "degenerate or inverted tet (volume " + std::to_string(vol) + ")");
  }
  return vol;
}

}  // namespace

void validate_material(const MaterialParams &mat)
{
  if (!std::isfinite(mat.lam) || !std::isfinite(mat.mu) || mat.mu < 0.0 ||
      3.0 * mat.lam + 2.0 * mat.mu < 0.0)
  {
    raise(ErrorCode::InvalidArgument, "material parameters need mu >= 0 and 3 lambda + 2 mu >= 0");
  }
}

SparseMatrix assemble_lame_stiffness(const VolumeMesh &mesh, const MaterialParams &mat)
{
  validate_material(mat);
  const int ndof = 3 * static_cast<int>(mesh.nodes.size());
  Triplets trip;
  trip.reserve(mesh.tets.size() * 144);
  for (const auto &t : mesh.tets)
  {
    const double vol = checked_volume(mesh, t);
    const auto G =
        tet_hat_gradients(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]], mesh.nodes[t[3]]);
    for (int a = 0; a < 4; ++a)
    {
      for (int nu = 0; nu < 3; ++nu)
      {
        for (int b = 0; b < 4; ++b)
        {
          const double gg = G.row(a).dot(G.row(b));
          for (int m = 0; m < 3; ++m)
          {
            // sigma(eta_a e_nu) : eps(eta_b e_m)
            double v = mat.lam * G(a, nu) * G(b, m) + mat.mu * G(a, m) * G(b, nu);
            if (nu == m)
            {
              v += mat.mu * gg;
            }
            trip.emplace_back(vector_dof(t[a], nu), vector_dof(t[b], m), vol * v);
          }
        }
      }
    }
  }
  return from_triplets(ndof, ndof, trip);
}

SparseMatrix assemble_mass(const VolumeMesh &mesh)
{
  const int ndof = 3 * static_cast<int>(mesh.nodes.size());
  Triplets trip;
  trip.reserve(mesh.tets.size() * 48);
  for (const auto &t : mesh.tets)
  {
    const double vol = checked_volume(mesh, t);
    for (int a = 0; a < 4; ++a)
    {
      for (int b = 0; b < 4; ++b)
      {
        const double v = vol / 20.0 * (a == b ? 2.0 : 1.0);
        for (int c = 0; c < 3; ++c)
        {
          trip.emplace_back(vector_dof(t[a], c), vector_dof(t[b], c), v);
        }
      }
    }
  }
  return from_triplets(ndof, ndof, trip);
}

SparseMatrix assemble_boundary_mass(const VolumeMesh &, const SurfaceMesh &surf)
{
  const int ns = surf.num_nodes();
  Triplets trip;
  trip.reserve(surf.triangles.size() * 9);
  for (int t = 0; t < surf.num_triangles(); ++t)
  {
    const auto tri = surf.surface_triangle(t);
    const double area = surf.areas[t];
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        trip.emplace_back(tri[a], tri[b], area / 12.0 * (a == b ? 2.0 : 1.0));
      }
    }
  }
  return from_triplets(ns, ns, trip);
}

SparseMatrix assemble_trace_coupling(const VolumeMesh &mesh, const SurfaceMesh &surf)
{
  const int ns = surf.num_nodes();
  const int ndof = 3 * static_cast<int>(mesh.nodes.size());
  Triplets trip;
  trip.reserve(surf.triangles.size() * 27);
  for (int t = 0; t < surf.num_triangles(); ++t)
  {
    const auto &vol_tri = surf.triangles[t];
    const auto tri = surf.surface_triangle(t);
    const Vec3 &n = surf.normals[t];
    const double area = surf.areas[t];
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        const double m = area / 12.0 * (a == b ? 2.0 : 1.0);
        for (int c = 0; c < 3; ++c)
        {
          if (n[c] != 0.0)
          {
            trip.emplace_back(tri[a], vector_dof(vol_tri[b], c), m * n[c]);
          }
        }
      }
    }
  }
  return from_triplets(ns, ndof, trip);
}

CouplingBlocks assemble_coupling_blocks(const VolumeMesh &mesh, const SurfaceMesh &surf,
                                        const MaterialParams &mat)
{
  CouplingBlocks blocks;
  blocks.A = assemble_lame_stiffness(mesh, mat);
  blocks.M = assemble_mass(mesh);
  blocks.I_bnd = assemble_boundary_mass(mesh, surf);
  blocks.nxRI = assemble_trace_coupling(mesh, surf);
  return blocks;
}

void write_coo(const std::string &path, const SparseMatrix &m)
{
  std::ofstream out(path);
  if (!out)
  {
    raise(ErrorCode::Io, "write_coo: cannot open " + path);
  }
  out << "% rows cols nnz\n" << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < m.outerSize(); ++r)
  {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
    {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  if (!out)
  {
    raise(ErrorCode::Io, "write_coo: write failed for " + path);
  }
}

}  // namespace tdfsi
