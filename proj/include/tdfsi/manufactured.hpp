// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_MANUFACTURED_HPP
#define TDFSI_MANUFACTURED_HPP

#include <functional>

#include <Eigen/Core>

#include "tdfsi/fem.hpp"
#include "tdfsi/mesh.hpp"
#include "tdfsi/rules.hpp"

namespace tdfsi
{

// Plane shear-free P-wave in the solid, u = (f(t - x1/2), 0, 0) with
// f(s) = sin^5(pi s) on 1 < s < 3, and an outgoing spherical pulse in the
// fluid, v = F(|x| - t) / |x| with F(s) = s (1 + cos(pi s / 0.9)) / 2 on |s| < 0.9.
// u solves the Lame system only when lam + 2 mu = 4 (unit density).
Vec3 exact_u(const Vec3 &x, double t);
Vec3 exact_u_dot(const Vec3 &x, double t);
double exact_v(const Vec3 &x, double t);
double exact_v_dot(const Vec3 &x, double t);
Vec3 exact_grad_v(const Vec3 &x, double t);
Eigen::Matrix3d exact_stress(const Vec3 &x, double t, const MaterialParams &mat);

struct IncidentTraces
{
  Vec3 h = Vec3::Zero();
  double g = 0.0;
};

// h = -(sigma(u) n + v_t n), g = -(u_t . n + dv/dn) at a boundary point with
// outward normal n.
IncidentTraces incident_traces(const Vec3 &x, const Vec3 &normal, double t,
                               const MaterialParams &mat);

struct ManufacturedData
{
  MaterialParams mat;
  bool zero = false;  // debug: all incident data switched off
};

struct StepData
{
  Eigen::VectorXd H;  // H^n + H^{n-1}, length 3 N_o
  Eigen::VectorXd G;  // G^n + G^{n-1}, length N_s
};

using TraceFn = std::function<IncidentTraces(const Vec3 &x, const Vec3 &normal, double t)>;

// Same as rhs_vectors for arbitrary boundary data.
StepData rhs_vectors_from(int n, double dt, const VolumeMesh &mesh, const SurfaceMesh &surf,
                          const TraceFn &traces, const TriangleRule &rule = triangle_7pt());

// Trapezoidal time integration of the incident data against the step-n test
// functions; triangle integrals use the given rule.
StepData rhs_vectors(int n, double dt, const VolumeMesh &mesh, const SurfaceMesh &surf,
                     const ManufacturedData &data, const TriangleRule &rule = triangle_7pt());

}  // namespace tdfsi

#endif  // TDFSI_MANUFACTURED_HPP
