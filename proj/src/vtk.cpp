// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/vtk.hpp"

#include <fstream>
#include <iomanip>

#include "tdfsi/error.hpp"

namespace tdfsi
{

void write_vtk(const std::string &path, const VolumeMesh &mesh, const SurfaceMesh *surf,
               const std::vector<VtkField> &point_data)
{
  std::ofstream out(path);
  if (!out)
  {
    raise(ErrorCode::Io, "write_vtk: cannot open " + path);
  }
  const std::size_t ntet = mesh.tets.size();
  const std::size_t ntri = surf ? surf->triangles.size() : 0;
  out << "# vtk DataFile Version 3.0\n";
  out << "tdfsi mesh n=" << mesh.n << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << std::setprecision(17);
  out << "POINTS " << mesh.nodes.size() << " double\n";
  for (const auto &p : mesh.nodes)
  {
    out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  }
  out << "CELLS " << (ntet + ntri) << ' ' << (5 * ntet + 4 * ntri) << '\n';
  for (const auto &t : mesh.tets)
  {
    out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
  }
  for (std::size_t i = 0; i < ntri; ++i)
  {
    const auto &t = surf->triangles[i];
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out << "CELL_TYPES " << (ntet + ntri) << '\n';
  for (std::size_t i = 0; i < ntet; ++i)
  {
    out << "10\n";
  }
  for (std::size_t i = 0; i < ntri; ++i)
  {
    out << "5\n";
  }
  if (!point_data.empty())
  {
    out << "POINT_DATA " << mesh.nodes.size() << '\n';
    for (const auto &f : point_data)
    {
      if (f.values.size() != mesh.nodes.size() * static_cast<std::size_t>(f.components))
      {
        raise(ErrorCode::InvalidArgument, "write_vtk: field '" + f.name + "' has wrong size");
      }
      if (f.components == 3)
      {
        out << "VECTORS " << f.name << " double\n";
      }
      else
      {
        out << "SCALARS " << f.name << " double " << f.components << "\nLOOKUP_TABLE default\n";
      }
      for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
      {
        for (int c = 0; c < f.components; ++c)
        {
          out << f.values[i * f.components + c] << (c + 1 < f.components ? ' ' : '\n');
        }
      }
    }
  }
  if (!out)
  {
    raise(ErrorCode::Io, "write_vtk: write failed for " + path);
  }
}

}  // namespace tdfsi
