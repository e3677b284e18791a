// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_MOT_HPP
#define TDFSI_MOT_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "tdfsi/fem.hpp"
#include "tdfsi/manufactured.hpp"
#include "tdfsi/tdbem.hpp"

namespace tdfsi
{

// Per-step left-hand side
//   [ dt/2 A + M/dt     C^T               0             ] [u  ]
//   [ -C               -W0     KT0 - dt/4 I            ] [phi]
//   [ 0           -K0 - I/2              V0            ] [lam]
// with C the normal-trace coupling and I the boundary mass. The elastic block
// is SPD and sparse, so the solve eliminates u and factors the dense Schur
// complement on (phi, lam).
class BlockSystem
{
public:
  BlockSystem(const CouplingBlocks &blocks, const RetardedMatrixSequence &seq, double dt);

  int num_u() const { return nu_; }
  int num_s() const { return ns_; }
  int size() const { return nu_ + 2 * ns_; }
  double dt() const { return dt_; }

  Eigen::VectorXd solve(const Eigen::VectorXd &b) const;
  Eigen::VectorXd apply(const Eigen::VectorXd &x) const;
  // Full matrix, for tests on small meshes.
  DenseMatrix dense() const;

private:
  int nu_ = 0, ns_ = 0;
  double dt_ = 0.0;
  Eigen::SparseMatrix<double> S_;  // dt/2 A + M/dt
  Eigen::SparseMatrix<double> Ct_;  // 3N_o x N_s
  Eigen::SparseMatrix<double> C_;   // N_s x 3N_o
  DenseMatrix D_;                   // (phi, lam) block
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> S_fact_;
  DenseMatrix Y_;  // S^{-1} C^T
  Eigen::PartialPivLU<DenseMatrix> schur_;
};

struct SolutionHistory
{
  double dt = 0.0;
  // Index m holds the coefficients at t_m; entry 0 is the zero initial state.
  std::vector<Eigen::VectorXd> u, phi, lam;

  int steps() const { return static_cast<int>(u.size()) - 1; }
};

struct MotOptions
{
  // Sign of the C u^{n-1} term on the phi-row right-hand side.
  double phi_row_u_sign = -1.0;
  double residual_tol = 1e-9;
  bool check_residual = true;
};

using DataFn = std::function<StepData(int n)>;
using StepObserver = std::function<void(int n, const SolutionHistory &)>;

// Right-hand side of step n >= 1 given steps 0..n-1 in hist.
Eigen::VectorXd rhs_step(int n, const SolutionHistory &hist, const StepData &data,
                         const CouplingBlocks &blocks, const RetardedMatrixSequence &seq,
                         const MotOptions &opt = {});

SolutionHistory mot_solve(const BlockSystem &sys, const CouplingBlocks &blocks,
                          const RetardedMatrixSequence &seq, const DataFn &data, int num_steps,
                          const MotOptions &opt = {}, const StepObserver &observer = {});

}  // namespace tdfsi

#endif  // TDFSI_MOT_HPP
