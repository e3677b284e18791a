// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_TDBEM_HPP
#define TDFSI_TDBEM_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdfsi/mesh.hpp"
#include "tdfsi/quadrature.hpp"

namespace tdfsi
{

using DenseMatrix = Eigen::MatrixXd;

enum class Family
{
  V = 0,
  K = 1,
  KT = 2,
  W = 3
};

const char *family_name(Family f);

struct BemOptions
{
  QuadConfig quad;
  // Overall sign of the adjoint double layer family and of the curl part of
  // the hypersingular family (see README, "Sign conventions").
  double kt_sign = -1.0;
  double w_curl_sign = -1.0;
  bool use_symmetry = true;

  std::uint64_t hash() const;
};

// Piecewise quadratic radial weight for lag k, supported on [t_{k-2}, t_{k+1}].
double eval_Y(double r, int k, double dt);

// Number of lags k >= 0 whose shells k, k-1, k-2 are not all empty.
int causal_lag_count(double diameter, double dt);

struct RetardedMatrixSequence
{
  double dt = 0.0;
  int count = 0;  // number of time steps the sequence serves (lags 0..count-1)
  int num_nodes = 0;
  std::vector<DenseMatrix> V, K, KT, W;  // stored lags 0..stored()-1

  int stored() const { return static_cast<int>(V.size()); }
  // Zero matrix for k < 0 and beyond the stored range.
  const DenseMatrix &get(Family f, int k) const;
  std::vector<DenseMatrix> &family(Family f);
  const std::vector<DenseMatrix> &family(Family f) const;

private:
  mutable DenseMatrix zero_;
};

struct AssemblyStats
{
  long long pairs = 0;
  long long classes = 0;
  double seconds = 0.0;
};

using ProgressFn = std::function<void(const std::string &)>;

// Lags k_begin..k_end-1 of all four families.
std::vector<std::array<DenseMatrix, 4>> assemble_lags(const VolumeMesh &mesh,
                                                      const SurfaceMesh &surf, double dt,
                                                      int k_begin, int k_end,
                                                      const BemOptions &opt,
                                                      AssemblyStats *stats = nullptr,
                                                      const ProgressFn &progress = {});

DenseMatrix assemble_V(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                       const BemOptions &opt = {});
DenseMatrix assemble_K(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                       const BemOptions &opt = {});
DenseMatrix assemble_KT(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                        const BemOptions &opt = {});
DenseMatrix assemble_W(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                       const BemOptions &opt = {});

RetardedMatrixSequence assemble_sequence(const VolumeMesh &mesh, const SurfaceMesh &surf,
                                         double dt, int num_steps, const BemOptions &opt = {},
                                         AssemblyStats *stats = nullptr,
                                         const ProgressFn &progress = {});

}  // namespace tdfsi

#endif  // TDFSI_TDBEM_HPP
