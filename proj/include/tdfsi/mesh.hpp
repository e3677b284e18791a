// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_MESH_HPP
#define TDFSI_MESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace tdfsi
{

using Vec3 = Eigen::Vector3d;

// Tetrahedral mesh of the cube [-1,1]^3. Nodes are ordered lexicographically
// in (x,y,z) with x varying slowest.
struct VolumeMesh
{
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 4>> tets;
  int n = 0;
  double h = 0.0;
};

// Boundary triangulation. Triangles reference volume-node indices; the
// surface numbering is given by boundary_node_map (surface -> volume) and
// its inverse volume_to_surface (-1 for interior nodes).
struct SurfaceMesh
{
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec3> normals;
  std::vector<double> areas;
  std::vector<int> boundary_node_map;
  std::vector<int> volume_to_surface;

  int num_nodes() const { return static_cast<int>(boundary_node_map.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  // Triangle vertices in surface-node numbering.
  std::array<int, 3> surface_triangle(int t) const;
};

VolumeMesh build_cube_mesh(int n);
SurfaceMesh extract_boundary(const VolumeMesh &mesh);

double tet_volume(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &d);
double mesh_size(const VolumeMesh &mesh);
// Largest distance between two boundary nodes.
double surface_diameter(const VolumeMesh &mesh, const SurfaceMesh &surf);

// Barycentric gradients of a tet (row i = grad of the hat at vertex i).
Eigen::Matrix<double, 4, 3> tet_hat_gradients(const Vec3 &a, const Vec3 &b, const Vec3 &c,
                                              const Vec3 &d);

}  // namespace tdfsi

#endif  // TDFSI_MESH_HPP
