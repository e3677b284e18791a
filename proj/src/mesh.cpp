// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "tdfsi/error.hpp"

namespace tdfsi
{

namespace
{

// Corner c of a unit sub-cube encoded as bits (x<<2)|(y<<1)|z.
constexpr int corner(int a, int b, int c)
{
  return (a << 2) | (b << 1) | c;
}

// Five-tet split of a sub-cube. The central tet uses the four corners of
// one parity; the other four corners each cut off a tet. Which parity forms
// the central tet alternates with the sub-cube parity so face diagonals match.
const std::array<std::array<int, 4>, 5> &split_even()
{
  static const std::array<std::array<int, 4>, 5> s = {{
      {corner(0, 0, 0), corner(1, 1, 0), corner(1, 0, 1), corner(0, 1, 1)},
      {corner(1, 0, 0), corner(0, 0, 0), corner(1, 1, 0), corner(1, 0, 1)},
      {corner(0, 1, 0), corner(0, 0, 0), corner(1, 1, 0), corner(0, 1, 1)},
      {corner(0, 0, 1), corner(0, 0, 0), corner(1, 0, 1), corner(0, 1, 1)},
      {corner(1, 1, 1), corner(1, 1, 0), corner(1, 0, 1), corner(0, 1, 1)},
  }};
  return s;
}

const std::array<std::array<int, 4>, 5> &split_odd()
{
  static const std::array<std::array<int, 4>, 5> s = {{
      {corner(1, 0, 0), corner(0, 1, 0), corner(0, 0, 1), corner(1, 1, 1)},
      {corner(0, 0, 0), corner(1, 0, 0), corner(0, 1, 0), corner(0, 0, 1)},
      {corner(1, 1, 0), corner(1, 0, 0), corner(0, 1, 0), corner(1, 1, 1)},
      {corner(1, 0, 1), corner(1, 0, 0), corner(0, 0, 1), corner(1, 1, 1)},
      {corner(0, 1, 1), corner(0, 1, 0), corner(0, 0, 1), corner(1, 1, 1)},
  }};
  return s;
}

bool on_cube_face(const Vec3 &p, int axis, double side)
{
  return std::abs(p[axis] - side) < 1e-12;
}

}  // namespace

double tet_volume(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &d)
{
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

Eigen::Matrix<double, 4, 3> tet_hat_gradients(const Vec3 &a, const Vec3 &b, const Vec3 &c,
                                              const Vec3 &d)
{
  Eigen::Matrix3d J;
  J.col(0) = b - a;
  J.col(1) = c - a;
  J.col(2) = d - a;
  const Eigen::Matrix3d Jinv_t = J.inverse().transpose();
  Eigen::Matrix<double, 4, 3> G;
  G.row(1) = Jinv_t.col(0).transpose();
  G.row(2) = Jinv_t.col(1).transpose();
  G.row(3) = Jinv_t.col(2).transpose();
  G.row(0) = -(G.row(1) + G.row(2) + G.row(3));
  return G;
}

std::array<int, 3> SurfaceMesh::surface_triangle(int t) const
{
  const auto &tri = triangles[t];
  return {volume_to_surface[tri[0]], volume_to_surface[tri[1]], volume_to_surface[tri[2]]};
}

VolumeMesh build_cube_mesh(int n)
{
  if (n < 1)
  {
    raise(ErrorCode::InvalidArgument, "build_cube_mesh: n must be >= 1, got " + std::to_string(n));
  }
  const std::int64_t np = static_cast<std::int64_t>(n) + 1;
  if (np * np * np > std::numeric_limits<int>::max() / 4 ||
      5 * static_cast<std::int64_t>(n) * n * n > std::numeric_limits<int>::max() / 4)
  {
    raise(ErrorCode::InvalidArgument, "build_cube_mesh: node count overflows for n = " +
                                          std::to_string(n));
  }

  VolumeMesh mesh;
  mesh.n = n;
  const double step = 2.0 / n;
  auto coord = [&](int i) { return (i == n) ? 1.0 : -1.0 + i * step; };
  auto index = [&](int i, int j, int k) { return (i * (n + 1) + j) * (n + 1) + k; };

  mesh.nodes.reserve(static_cast<std::size_t>(np * np * np));
  for (int i = 0; i <= n; ++i)
  {
    for (int j = 0; j <= n; ++j)
    {
      for (int k = 0; k <= n; ++k)
      {
        mesh.nodes.emplace_back(coord(i), coord(j), coord(k));
      }
    }
  }

  mesh.tets.reserve(static_cast<std::size_t>(5) * n * n * n);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      for (int k = 0; k < n; ++k)
      {
        const auto &split = ((i + j + k) % 2 == 0) ? split_even() : split_odd();
        for (const auto &local : split)
        {
          std::array<int, 4> tet;
          for (int v = 0; v < 4; ++v)
          {
            const int c = local[v];
            tet[v] = index(i + ((c >> 2) & 1), j + ((c >> 1) & 1), k + (c & 1));
          }
          const auto &nd = mesh.nodes;
          if (tet_volume(nd[tet[0]], nd[tet[1]], nd[tet[2]], nd[tet[3]]) < 0.0)
          {
            std::swap(tet[2], tet[3]);
          }
          mesh.tets.push_back(tet);
        }
      }
    }
  }
  mesh.h = mesh_size(mesh);
  return mesh;
}

double mesh_size(const VolumeMesh &mesh)
{
  if (mesh.tets.empty())
  {
    raise(ErrorCode::InvalidArgument, "mesh_size: empty mesh");
  }
  double h = 0.0;
  for (const auto &t : mesh.tets)
  {
    for (int a = 0; a < 4; ++a)
    {
      for (int b = a + 1; b < 4; ++b)
      {
        h = std::max(h, (mesh.nodes[t[a]] - mesh.nodes[t[b]]).norm());
      }
    }
  }
  return h;
}

SurfaceMesh extract_boundary(const VolumeMesh &mesh)
{
  // Face -> (count, owning tet, opposite vertex).
  struct FaceInfo
  {
    int count = 0;
    int opposite = -1;
    std::array<int, 3> verts{};
  };
  std::map<std::array<int, 3>, FaceInfo> faces;
  for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t)
  {
    const auto &tet = mesh.tets[t];
    for (int skip = 0; skip < 4; ++skip)
    {
      std::array<int, 3> f;
      int m = 0;
      for (int v = 0; v < 4; ++v)
      {
        if (v != skip)
        {
          f[m++] = tet[v];
        }
      }
      std::array<int, 3> key = f;
      std::sort(key.begin(), key.end());
      auto &info = faces[key];
      info.count++;
      info.opposite = tet[skip];
      info.verts = key;
    }
  }

  SurfaceMesh surf;
  for (const auto &[key, info] : faces)
  {
    if (info.count > 2)
    {
      raise(ErrorCode::Topology, "extract_boundary: face shared by more than two tets");
    }
    if (info.count != 1)
    {
      continue;
    }
    const Vec3 &a = mesh.nodes[key[0]];
    const Vec3 &b = mesh.nodes[key[1]];
    const Vec3 &c = mesh.nodes[key[2]];
    bool on_boundary = false;
    for (int axis = 0; axis < 3 && !on_boundary; ++axis)
    {
      for (double side : {-1.0, 1.0})
      {
        if (on_cube_face(a, axis, side) && on_cube_face(b, axis, side) &&
            on_cube_face(c, axis, side))
        {
          on_boundary = true;
          break;
        }
      }
    }
    if (!on_boundary)
    {
      raise(ErrorCode::Topology, "extract_boundary: unmatched interior face (mesh not watertight)");
    }
    Vec3 normal = (b - a).cross(c - a);
    const double twice_area = normal.norm();
    if (twice_area < 1e-14)
    {
      raise(ErrorCode::Geometry, "extract_boundary: degenerate boundary triangle");
    }
    normal /= twice_area;
    std::array<int, 3> tri = key;
    if (normal.dot(mesh.nodes[info.opposite] - a) > 0.0)
    {
      normal = -normal;
      std::swap(tri[1], tri[2]);
    }
    surf.triangles.push_back(tri);
    surf.normals.push_back(normal);
    surf.areas.push_back(0.5 * twice_area);
  }

  // Every boundary edge must be shared by exactly two boundary triangles.
  std::map<std::pair<int, int>, int> edges;
  for (const auto &tri : surf.triangles)
  {
    for (int e = 0; e < 3; ++e)
    {
      int p = tri[e], q = tri[(e + 1) % 3];
      edges[{std::min(p, q), std::max(p, q)}]++;
    }
  }
  for (const auto &[edge, count] : edges)
  {
    if (count != 2)
    {
      raise(ErrorCode::Topology, "extract_boundary: boundary is not closed");
    }
  }

  surf.volume_to_surface.assign(mesh.nodes.size(), -1);
  for (const auto &tri : surf.triangles)
  {
    for (int v : tri)
    {
      surf.volume_to_surface[v] = 0;
    }
  }
  for (int v = 0; v < static_cast<int>(mesh.nodes.size()); ++v)
  {
    if (surf.volume_to_surface[v] == 0)
    {
      surf.volume_to_surface[v] = static_cast<int>(surf.boundary_node_map.size());
      surf.boundary_node_map.push_back(v);
    }
  }
  return surf;
}

double surface_diameter(const VolumeMesh &mesh, const SurfaceMesh &surf)
{
  double d = 0.0;
  const auto &map = surf.boundary_node_map;
  for (std::size_t a = 0; a < map.size(); ++a)
  {
    for (std::size_t b = a + 1; b < map.size(); ++b)
    {
      d = std::max(d, (mesh.nodes[map[a]] - mesh.nodes[map[b]]).norm());
    }
  }
  return d;
}

}  // namespace tdfsi
