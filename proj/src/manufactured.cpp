// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "tdfsi/error.hpp"

namespace tdfsi
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kWidth = 0.9;

bool in_window(double s)
{
  return s > 1.0 && s < 3.0;
}

double f_solid(double s)
{
  if (!in_window(s))
  {
    return 0.0;
  }
  const double sn = std::sin(kPi * s);
  return sn * sn * sn * sn * sn;
}

double df_solid(double s)
{
  if (!in_window(s))
  {
    return 0.0;
  }
  const double sn = std::sin(kPi * s);
  return 5.0 * kPi * sn * sn * sn * sn * std::cos(kPi * s);
}

double F_fluid(double s)
{
  if (std::abs(s) >= kWidth)
  {
    return 0.0;
  }
  return 0.5 * s * (1.0 + std::cos(kPi * s / kWidth));
}

double dF_fluid(double s)
{
  if (std::abs(s) >= kWidth)
  {
    return 0.0;
  }
  const double a = kPi / kWidth;
  return 0.5 * (1.0 + std::cos(a * s)) - 0.5 * s * a * std::sin(a * s);
}

double radius(const Vec3 &x)
{
  const double r = x.norm();
  if (r == 0.0)
  {
    raise(ErrorCode::Domain, "exterior field evaluated at the origin");
  }
  return r;
}

}  // namespace

Vec3 exact_u(const Vec3 &x, double t)
{
  return Vec3(f_solid(t - 0.5 * x[0]), 0.0, 0.0);
}

Vec3 exact_u_dot(const Vec3 &x, double t)
{
  return Vec3(df_solid(t - 0.5 * x[0]), 0.0, 0.0);
}

Eigen::Matrix3d exact_stress(const Vec3 &x, double t, const MaterialParams &mat)
{
  // Only du1/dx1 = -f'/2 is nonzero.
  const double e11 = -0.5 * df_solid(t - 0.5 * x[0]);
  Eigen::Matrix3d s = mat.lam * e11 * Eigen::Matrix3d::Identity();
  s(0, 0) += 2.0 * mat.mu * e11;
  return s;
}

double exact_v(const Vec3 &x, double t)
{
  const double r = radius(x);
  return F_fluid(r - t) / r;
}

double exact_v_dot(const Vec3 &x, double t)
{
  const double r = radius(x);
  return -dF_fluid(r - t) / r;
}

Vec3 exact_grad_v(const Vec3 &x, double t)
{
  const double r = radius(x);
  const double s = r - t;
  return (dF_fluid(s) / r - F_fluid(s) / (r * r)) * (x / r);
}

IncidentTraces incident_traces(const Vec3 &x, const Vec3 &normal, double t,
                               const MaterialParams &mat)
{
  IncidentTraces tr;
  tr.h = -(exact_stress(x, t, mat) * normal + exact_v_dot(x, t) * normal);
  tr.g = -(exact_u_dot(x, t).dot(normal) + exact_grad_v(x, t).dot(normal));
  return tr;
}

StepData rhs_vectors(int n, double dt, const VolumeMesh &mesh, const SurfaceMesh &surf,
                     const ManufacturedData &data, const TriangleRule &rule)
{
  if (data.zero)
  {
    if (n < 1)
    {
      raise(ErrorCode::InvalidArgument, "rhs_vectors: step index must be >= 1");
    }
    return StepData{Eigen::VectorXd::Zero(3 * static_cast<Eigen::Index>(mesh.nodes.size())),
                    Eigen::VectorXd::Zero(surf.num_nodes())};
  }
  const MaterialParams mat = data.mat;
  return rhs_vectors_from(
    n, dt, mesh, surf,
    [mat](const Vec3 &x, const Vec3 &nrm, double t) { return incident_traces(x, nrm, t, mat); },
    rule);
}

StepData rhs_vectors_from(int n, double dt, const VolumeMesh &mesh, const SurfaceMesh &surf,
                          const TraceFn &traces, const TriangleRule &rule)
{
  if (n < 1)
  {
    raise(ErrorCode::InvalidArgument, "rhs_vectors: step index must be >= 1");
  }
  StepData out;
  out.H = Eigen::VectorXd::Zero(3 * static_cast<Eigen::Index>(mesh.nodes.size()));
  out.G = Eigen::VectorXd::Zero(surf.num_nodes());
  const double t_now = n * dt, t_prev = (n - 1) * dt;
  for (int t = 0; t < surf.num_triangles(); ++t)
  {
    const auto &vt = surf.triangles[t];
    const auto st = surf.surface_triangle(t);
    const Vec3 &a = mesh.nodes[vt[0]];
    const Vec3 &b = mesh.nodes[vt[1]];
    const Vec3 &c = mesh.nodes[vt[2]];
    const Vec3 &nrm = surf.normals[t];
    const double jac = 2.0 * surf.areas[t];
    for (std::size_t q = 0; q < rule.w.size(); ++q)
    {
      const double s = rule.x[q][0], r = rule.x[q][1];
      const double hat[3] = {1.0 - s - r, s, r};
      const Vec3 x = hat[0] * a + hat[1] * b + hat[2] * c;
      const IncidentTraces t1 = traces(x, nrm, t_now);
      const IncidentTraces t0 = traces(x, nrm, t_prev);
      const double w = rule.w[q] * jac * 0.5 * dt;
      const Vec3 hsum = t1.h + t0.h;
      const double gsum = t1.g + t0.g;
      for (int v = 0; v < 3; ++v)
      {
        for (int comp = 0; comp < 3; ++comp)
        {
          out.H[vector_dof(vt[v], comp)] -= w * hat[v] * hsum[comp];
        }
        out.G[st[v]] += w * hat[v] * gsum;
      }
    }
  }
  return out;
}

}  // namespace tdfsi
