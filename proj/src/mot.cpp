// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/mot.hpp"

#include <cmath>
#include <sstream>

#include "tdfsi/error.hpp"

namespace tdfsi
{

BlockSystem::BlockSystem(const CouplingBlocks &blocks, const RetardedMatrixSequence &seq,
                         double dt)
  : nu_(static_cast<int>(blocks.A.rows())), ns_(static_cast<int>(blocks.I_bnd.rows())), dt_(dt)
{
  if (!(dt > 0.0))
  {
    raise(ErrorCode::InvalidArgument, "BlockSystem: dt must be positive");
  }
  if (seq.stored() < 1 || seq.num_nodes != ns_)
  {
    raise(ErrorCode::InvalidArgument, "BlockSystem: lag-0 matrices missing or wrong size");
  }
  S_ = Eigen::SparseMatrix<double>(0.5 * dt * blocks.A + blocks.M / dt);
  C_ = Eigen::SparseMatrix<double>(blocks.nxRI);
  Ct_ = C_.transpose();

  const DenseMatrix I = DenseMatrix(blocks.I_bnd);
  D_.resize(2 * ns_, 2 * ns_);
  D_.topLeftCorner(ns_, ns_) = -seq.get(Family::W, 0);
  D_.topRightCorner(ns_, ns_) = seq.get(Family::KT, 0) - 0.25 * dt * I;
  D_.bottomLeftCorner(ns_, ns_) = -seq.get(Family::K, 0) - 0.5 * I;
  D_.bottomRightCorner(ns_, ns_) = seq.get(Family::V, 0);

  S_fact_.compute(S_);
  if (S_fact_.info() != Eigen::Success)
  {
    raise(ErrorCode::Solver, "BlockSystem: elastic block factorization failed");
  }
  Y_ = S_fact_.solve(DenseMatrix(Ct_));
  DenseMatrix schur = D_;
  schur.topLeftCorner(ns_, ns_) += C_ * Y_;
  schur_.compute(schur);
  const double rc = schur_.rcond();
  if (!(rc > 1e-14))
  {
    std::ostringstream os;
    os << "BlockSystem: boundary Schur complement is singular (rcond " << rc << ")";
    raise(ErrorCode::Solver, os.str());
  }
}

Eigen::VectorXd BlockSystem::solve(const Eigen::VectorXd &b) const
{
  if (b.size() != size())
  {
    raise(ErrorCode::InvalidArgument, "BlockSystem::solve: size mismatch");
  }
  const Eigen::VectorXd w = S_fact_.solve(b.head(nu_));
  Eigen::VectorXd rz = b.tail(2 * ns_);
  rz.head(ns_) += C_ * w;
  const Eigen::VectorXd z = schur_.solve(rz);
  Eigen::VectorXd x(size());
  x.head(nu_) = w - Y_ * z.head(ns_);
  x.tail(2 * ns_) = z;
  return x;
}

Eigen::VectorXd BlockSystem::apply(const Eigen::VectorXd &x) const
{
  if (x.size() != size())
  {
    raise(ErrorCode::InvalidArgument, "BlockSystem::apply: size mismatch");
  }
  Eigen::VectorXd y(size());
  y.head(nu_) = S_ * x.head(nu_) + Ct_ * x.segment(nu_, ns_);
  y.tail(2 * ns_) = D_ * x.tail(2 * ns_);
  y.segment(nu_, ns_) -= C_ * x.head(nu_);
  return y;
}

DenseMatrix BlockSystem::dense() const
{
  DenseMatrix L = DenseMatrix::Zero(size(), size());
  L.topLeftCorner(nu_, nu_) = DenseMatrix(S_);
  L.block(0, nu_, nu_, ns_) = DenseMatrix(Ct_);
  L.block(nu_, 0, ns_, nu_) = -DenseMatrix(C_);
  L.bottomRightCorner(2 * ns_, 2 * ns_) = D_;
  return L;
}

Eigen::VectorXd rhs_step(int n, const SolutionHistory &hist, const StepData &data,
                         const CouplingBlocks &blocks, const RetardedMatrixSequence &seq,
                         const MotOptions &opt)
{
  if (n < 1 || hist.steps() < n - 1)
  {
    raise(ErrorCode::State, "rhs_step: history does not reach step n-1");
  }
  const int nu = static_cast<int>(blocks.A.rows());
  const int ns = static_cast<int>(blocks.I_bnd.rows());
  const double dt = hist.dt;
  const Eigen::VectorXd &u1 = hist.u[n - 1];
  const Eigen::VectorXd u2 = n >= 2 ? hist.u[n - 2] : Eigen::VectorXd::Zero(nu);

  Eigen::VectorXd b(nu + 2 * ns);
  auto ru = b.head(nu);
  auto rp = b.segment(nu, ns);
  auto rl = b.tail(ns);

  ru = data.H - 0.5 * dt * (blocks.A * u1) + (2.0 / dt) * (blocks.M * u1) -
       (1.0 / dt) * (blocks.M * u2) + blocks.nxRI.transpose() * hist.phi[n - 1];
  rp = data.G + opt.phi_row_u_sign * (blocks.nxRI * u1) +
       0.25 * dt * (blocks.I_bnd * hist.lam[n - 1]);
  rl = -0.5 * (blocks.I_bnd * hist.phi[n - 1]);

  // History sums over m = n-k for lags k >= 1 still inside the stored range.
  const int kmax = std::min(n - 1, seq.stored() - 1);
  for (int k = 1; k <= kmax; ++k)
  {
    const Eigen::VectorXd &ph = hist.phi[n - k];
    const Eigen::VectorXd &la = hist.lam[n - k];
    rp.noalias() += seq.W[k] * ph;
    rp.noalias() -= seq.KT[k] * la;
    rl.noalias() += seq.K[k] * ph;
    rl.noalias() -= seq.V[k] * la;
  }
  return b;
}

SolutionHistory mot_solve(const BlockSystem &sys, const CouplingBlocks &blocks,
                          const RetardedMatrixSequence &seq, const DataFn &data, int num_steps,
                          const MotOptions &opt, const StepObserver &observer)
{
  if (num_steps < 1)
  {
    raise(ErrorCode::InvalidArgument, "mot_solve: need at least one step");
  }
  if (seq.count < num_steps)
  {
    raise(ErrorCode::State, "mot_solve: matrix sequence built for fewer steps");
  }
  const int nu = sys.num_u(), ns = sys.num_s();
  SolutionHistory hist;
  hist.dt = sys.dt();
  hist.u.reserve(num_steps + 1);
  hist.phi.reserve(num_steps + 1);
  hist.lam.reserve(num_steps + 1);
  hist.u.push_back(Eigen::VectorXd::Zero(nu));
  hist.phi.push_back(Eigen::VectorXd::Zero(ns));
  hist.lam.push_back(Eigen::VectorXd::Zero(ns));

  for (int n = 1; n <= num_steps; ++n)
  {
    const StepData d = data(n);
    const Eigen::VectorXd b = rhs_step(n, hist, d, blocks, seq, opt);
    const Eigen::VectorXd x = sys.solve(b);
    if (!x.allFinite())
    {
      raise(ErrorCode::Solver, "mot_solve: non-finite solution at step " + std::to_string(n));
    }
    if (opt.check_residual)
    {
      const double bn = b.norm();
      const double res = (sys.apply(x) - b).norm();
      if (res > opt.residual_tol * std::max(bn, 1e-300))
      {
        std::ostringstream os;
        os << "mot_solve: step " << n << " residual " << res << " exceeds tolerance (|b| = "
           << bn << ")";
        raise(ErrorCode::Solver, os.str());
      }
    }
    hist.u.push_back(x.head(nu));
    hist.phi.push_back(x.segment(nu, ns));
    hist.lam.push_back(x.tail(ns));
    if (observer)
    {
      observer(n, hist);
    }
  }
  return hist;
}

}  // namespace tdfsi
