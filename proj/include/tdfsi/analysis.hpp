// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_ANALYSIS_HPP
#define TDFSI_ANALYSIS_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdfsi/fem.hpp"
#include "tdfsi/mesh.hpp"
#include "tdfsi/mot.hpp"

namespace tdfsi
{

using VectorField = std::function<Vec3(const Vec3 &)>;
using ScalarField = std::function<double(const Vec3 &)>;

// sqrt(c^T M c).
double l2_space_norm(const Eigen::VectorXd &c, const SparseMatrix &M);

// ||P1 field - exact||_{L2(Omega)} by tet Gauss quadrature (order^3 points).
double l2_volume_error(const VolumeMesh &mesh, const Eigen::VectorXd &coeffs,
                       const VectorField &exact, int order = 4);
// ||P1 boundary field - exact||_{L2(Gamma)} by triangle Gauss quadrature.
double l2_surface_error(const VolumeMesh &mesh, const SurfaceMesh &surf,
                        const Eigen::VectorXd &coeffs, const ScalarField &exact, int order = 4);

// sqrt(dt * sum_n w_n e_n^2) with trapezoid weights (1/2 at both ends).
double spacetime_norm(const std::vector<double> &step_values, double dt);

// Least-squares slope of log(error) against log(h).
double convergence_rate(const std::vector<double> &errors, const std::vector<double> &hs);

// v = D phi - S lam at x outside the surface, with phi, lam piecewise linear in
// time. near_surface is set when x is within one mesh size of the surface.
double evaluate_exterior_field(const Vec3 &x, double t, const SolutionHistory &hist,
                               const VolumeMesh &mesh, const SurfaceMesh &surf,
                               bool *near_surface = nullptr);

struct StepRow
{
  int n = 0;
  double t = 0.0;
  double norm_u_h = 0.0, norm_u_exact = 0.0;
  double norm_phi_h = 0.0, norm_phi_exact = 0.0;
  double err_u = 0.0, err_phi = 0.0;
};

struct RunReport
{
  int n = 0;  // mesh subdivisions
  double h = 0.0, dt = 0.0;
  int num_steps = 0;
  std::vector<StepRow> rows;  // steps 0..num_steps
  double st_err_u = 0.0, st_err_phi = 0.0;
  double seconds = 0.0;
  double assembly_seconds = 0.0;
  // Computed u_1 at the corner node (-1,-1,-1), one entry per step.
  std::vector<double> corner_u1;
};

// Fills st_err_u and st_err_phi from the per-step rows.
void finalize_report(RunReport &r);

struct SummaryRow
{
  int n = 0;
  double h = 0.0, dt = 0.0;
  double st_err_u = 0.0, st_err_phi = 0.0;
  double rate_u = 0.0, rate_phi = 0.0;  // NaN on the coarsest level
};

// Rates between consecutive levels, ordered as given.
std::vector<SummaryRow> summarize(const std::vector<RunReport> &reports);

void write_steps_csv(const std::string &path, const RunReport &r);
void write_summary_csv(const std::string &path, const std::vector<SummaryRow> &rows);

}  // namespace tdfsi

#endif  // TDFSI_ANALYSIS_HPP
