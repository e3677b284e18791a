// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "tdfsi/error.hpp"
#include "tdfsi/quadrature.hpp"
#include "tdfsi/rules.hpp"

namespace tdfsi
{

double l2_space_norm(const Eigen::VectorXd &c, const SparseMatrix &M)
{
  if (M.rows() != c.size() || M.cols() != c.size())
  {
    raise(ErrorCode::InvalidArgument, "l2_space_norm: dimension mismatch");
  }
  const double q = c.dot(M * c);
  // Round-off can leave a tiny negative value for c close to zero.
  if (q < -1e-12 * (c.squaredNorm() + 1e-300))
  {
    raise(ErrorCode::Internal, "l2_space_norm: negative quadratic form");
  }
  return std::sqrt(std::max(q, 0.0));
}

double l2_volume_error(const VolumeMesh &mesh, const Eigen::VectorXd &coeffs,
                       const VectorField &exact, int order)
{
  if (coeffs.size() != 3 * static_cast<Eigen::Index>(mesh.nodes.size()))
  {
    raise(ErrorCode::InvalidArgument, "l2_volume_error: coefficient size mismatch");
  }
  const TetRule rule = tet_gauss(order);
  double sum = 0.0;
  for (const auto &tet : mesh.tets)
  {
    const Vec3 &a = mesh.nodes[tet[0]];
    const Vec3 e1 = mesh.nodes[tet[1]] - a;
    const Vec3 e2 = mesh.nodes[tet[2]] - a;
    const Vec3 e3 = mesh.nodes[tet[3]] - a;
    const double jac = std::abs(e1.dot(e2.cross(e3)));
    for (std::size_t q = 0; q < rule.w.size(); ++q)
    {
      const auto &p = rule.x[q];
      const double hat[4] = {1.0 - p[0] - p[1] - p[2], p[0], p[1], p[2]};
      const Vec3 x = a + p[0] * e1 + p[1] * e2 + p[2] * e3;
      Vec3 uh = Vec3::Zero();
      for (int v = 0; v < 4; ++v)
      {
        for (int c = 0; c < 3; ++c)
        {
          uh[c] += hat[v] * coeffs[vector_dof(tet[v], c)];
        }
      }
      sum += rule.w[q] * jac * (uh - exact(x)).squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double l2_surface_error(const VolumeMesh &mesh, const SurfaceMesh &surf,
                        const Eigen::VectorXd &coeffs, const ScalarField &exact, int order)
{
  if (coeffs.size() != surf.num_nodes())
  {
    raise(ErrorCode::InvalidArgument, "l2_surface_error: coefficient size mismatch");
  }
  const TriangleRule rule = triangle_gauss(order);
  double sum = 0.0;
  for (int t = 0; t < surf.num_triangles(); ++t)
  {
    const auto &vt = surf.triangles[t];
    const auto st = surf.surface_triangle(t);
    const Vec3 &a = mesh.nodes[vt[0]];
    const Vec3 e1 = mesh.nodes[vt[1]] - a;
    const Vec3 e2 = mesh.nodes[vt[2]] - a;
    const double jac = 2.0 * surf.areas[t];
    for (std::size_t q = 0; q < rule.w.size(); ++q)
    {
      const double s = rule.x[q][0], r = rule.x[q][1];
      const double ph = (1.0 - s - r) * coeffs[st[0]] + s * coeffs[st[1]] + r * coeffs[st[2]];
      const double d = ph - exact(a + s * e1 + r * e2);
      sum += rule.w[q] * jac * d * d;
    }
  }
  return std::sqrt(sum);
}

double spacetime_norm(const std::vector<double> &step_values, double dt)
{
  if (step_values.empty())
  {
    return 0.0;
  }
  double sum = 0.0;
  const std::size_t last = step_values.size() - 1;
  for (std::size_t i = 0; i <= last; ++i)
  {
    const double w = (i == 0 || i == last) ? 0.5 : 1.0;
    sum += w * step_values[i] * step_values[i];
  }
  if (last == 0)
  {
    sum = 0.0;  // a single instant has no time extent
  }
  return std::sqrt(dt * sum);
}

double convergence_rate(const std::vector<double> &errors, const std::vector<double> &hs)
{
  if (errors.size() != hs.size() || errors.size() < 2)
  {
    raise(ErrorCode::Domain, "convergence_rate: need at least two (h, error) pairs");
  }
  double mx = 0.0, my = 0.0;
  const double m = static_cast<double>(errors.size());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < errors.size(); ++i)
  {
    if (!(errors[i] > 0.0) || !(hs[i] > 0.0))
    {
      raise(ErrorCode::Domain, "convergence_rate: errors and mesh sizes must be positive");
    }
    lx.push_back(std::log(hs[i]));
    ly.push_back(std::log(errors[i]));
    mx += lx.back() / m;
    my += ly.back() / m;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i)
  {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0)
  {
    raise(ErrorCode::Domain, "convergence_rate: mesh sizes must differ");
  }
  return sxy / sxx;
}

double evaluate_exterior_field(const Vec3 &x, double t, const SolutionHistory &hist,
                               const VolumeMesh &mesh, const SurfaceMesh &surf,
                               bool *near_surface)
{
  const double dt = hist.dt;
  const int nsteps = hist.steps();
  if (nsteps < 0 || !(dt > 0.0))
  {
    raise(ErrorCode::State, "evaluate_exterior_field: empty history");
  }
  double dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < surf.num_triangles(); ++k)
  {
    dist = std::min(dist, point_triangle_distance(x, surface_triangle(mesh, surf, k)));
  }
  if (near_surface)
  {
    *near_surface = dist <= mesh.h;
  }
  if (dist == 0.0)
  {
    raise(ErrorCode::Domain, "evaluate_exterior_field: point lies on the surface");
  }

  // Sub-triangles no larger than dt/4 keep the time kinks of the hat basis
  // well resolved by the 7-point rule.
  const TriangleRule &rule = triangle_7pt();
  double tri_diam = 0.0;
  for (int k = 0; k < surf.num_triangles(); ++k)
  {
    tri_diam = std::max(tri_diam, triangle_diameter(surface_triangle(mesh, surf, k)));
  }
  const int m = std::max(1, static_cast<int>(std::ceil(tri_diam / (0.25 * dt))));
  const double inv4pi = 0.25 / std::numbers::pi;

  // Returns (value, derivative) of the piecewise linear-in-time density at tau.
  auto sample = [&](const std::vector<Eigen::VectorXd> &c, int node, double tau) {
    if (tau <= 0.0)
    {
      return std::pair<double, double>(0.0, 0.0);
    }
    const double s = tau / dt;
    int j = static_cast<int>(std::ceil(s));
    if (j > nsteps)
    {
      raise(ErrorCode::Domain, "evaluate_exterior_field: retarded time beyond the history");
    }
    j = std::max(j, 1);
    const double th = s - (j - 1);
    const double c0 = c[j - 1][node], c1 = c[j][node];
    return std::pair<double, double>((1.0 - th) * c0 + th * c1, (c1 - c0) / dt);
  };

  double v = 0.0;
  for (int k = 0; k < surf.num_triangles(); ++k)
  {
    const auto &vt = surf.triangles[k];
    const auto st = surf.surface_triangle(k);
    const Vec3 &a = mesh.nodes[vt[0]];
    const Vec3 e1 = mesh.nodes[vt[1]] - a;
    const Vec3 e2 = mesh.nodes[vt[2]] - a;
    const Vec3 &nrm = surf.normals[k];
    const double jac = 2.0 * surf.areas[k] / (m * m);
    for (int i = 0; i < m; ++i)
    {
      for (int j = 0; i + j < m; ++j)
      {
        // Upright and (if present) inverted sub-triangle of the m x m grid.
        for (int flip = 0; flip < 2; ++flip)
        {
          if (flip == 1 && i + j + 1 >= m)
          {
            continue;
          }
          for (std::size_t q = 0; q < rule.w.size(); ++q)
          {
            double s, r;
            if (flip == 0)
            {
              s = (i + rule.x[q][0]) / m;
              r = (j + rule.x[q][1]) / m;
            }
            else
            {
              s = (i + 1 - rule.x[q][0]) / m;
              r = (j + 1 - rule.x[q][1]) / m;
            }
            const double hat[3] = {1.0 - s - r, s, r};
            const Vec3 y = a + s * e1 + r * e2;
            const Vec3 d = x - y;
            const double rr = d.norm();
            const double tau = t - rr;
            if (tau <= 0.0)
            {
              continue;
            }
            double ph = 0.0, phd = 0.0, la = 0.0;
            for (int v3 = 0; v3 < 3; ++v3)
            {
              const auto p = sample(hist.phi, st[v3], tau);
              ph += hat[v3] * p.first;
              phd += hat[v3] * p.second;
              la += hat[v3] * sample(hist.lam, st[v3], tau).first;
            }
            const double w = rule.w[q] * jac * inv4pi;
            v += w * (nrm.dot(d) / (rr * rr * rr) * (ph + rr * phd) - la / rr);
          }
        }
      }
    }
  }
  return v;
}

void finalize_report(RunReport &r)
{
  std::vector<double> eu, ep;
  for (const auto &row : r.rows)
  {
    eu.push_back(row.err_u);
    ep.push_back(row.err_phi);
  }
  r.st_err_u = spacetime_norm(eu, r.dt);
  r.st_err_phi = spacetime_norm(ep, r.dt);
}

std::vector<SummaryRow> summarize(const std::vector<RunReport> &reports)
{
  std::vector<SummaryRow> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < reports.size(); ++i)
  {
    const auto &r = reports[i];
    SummaryRow s{r.n, r.h, r.dt, r.st_err_u, r.st_err_phi, nan, nan};
    if (i > 0)
    {
      const auto &p = reports[i - 1];
      if (p.st_err_u > 0.0 && r.st_err_u > 0.0)
      {
        s.rate_u = convergence_rate({p.st_err_u, r.st_err_u}, {p.h, r.h});
      }
      if (p.st_err_phi > 0.0 && r.st_err_phi > 0.0)
      {
        s.rate_phi = convergence_rate({p.st_err_phi, r.st_err_phi}, {p.h, r.h});
      }
    }
    out.push_back(s);
  }
  return out;
}

namespace
{

std::ofstream open_csv(const std::string &path)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out)
  {
    raise(ErrorCode::Io, "cannot open " + path + " for writing");
  }
  return out;
}

std::string num(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_steps_csv(const std::string &path, const RunReport &r)
{
  auto out = open_csv(path);
  out << "n,t,norm_u_h,norm_u_exact,norm_phi_h,norm_phi_exact,err_u,err_phi\n";
  for (const auto &row : r.rows)
  {
    out << row.n << ',' << num(row.t) << ',' << num(row.norm_u_h) << ','
        << num(row.norm_u_exact) << ',' << num(row.norm_phi_h) << ',' << num(row.norm_phi_exact)
        << ',' << num(row.err_u) << ',' << num(row.err_phi) << '\n';
  }
  if (!out)
  {
    raise(ErrorCode::Io, "failed writing " + path);
  }
}

void write_summary_csv(const std::string &path, const std::vector<SummaryRow> &rows)
{
  auto out = open_csv(path);
  out << "n,h,dt,st_err_u,st_err_phi,rate_u,rate_phi\n";
  for (const auto &s : rows)
  {
    out << s.n << ',' << num(s.h) << ',' << num(s.dt) << ',' << num(s.st_err_u) << ','
        << num(s.st_err_phi) << ',' << num(s.rate_u) << ',' << num(s.rate_phi) << '\n';
  }
  if (!out)
  {
    raise(ErrorCode::Io, "failed writing " + path);
  }
}

}  // namespace tdfsi
