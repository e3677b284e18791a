#include <doctest.h>

#include <random>

#include "tdfsi/error.hpp"
#include "tdfsi/fem.hpp"
#include "tdfsi/mot.hpp"
#include "tdfsi/tdbem.hpp"

using namespace tdfsi;

namespace
{

// n = 1 keeps every test here well under a second; dt = 0.4 is the default
// ratio on that mesh.
struct Problem
{
  VolumeMesh mesh = build_cube_mesh(1);
  SurfaceMesh surf = extract_boundary(mesh);
  double dt = 0.4;
  CouplingBlocks blocks = assemble_coupling_blocks(mesh, surf, MaterialParams{});
  RetardedMatrixSequence seq;

  explicit Problem(int steps) { seq = assemble_sequence(mesh, surf, dt, steps); }
};

const Problem &shared()
{
  static const Problem p(8);
  return p;
}

StepData noise_data(int step, int nu, int ns, unsigned seed)
{
  std::mt19937 rng(seed * 1000u + static_cast<unsigned>(step));
  std::normal_distribution<double> nd;
  StepData d;
  d.H = Eigen::VectorXd(nu);
  d.G = Eigen::VectorXd(ns);
  for (Eigen::Index i = 0; i < nu; ++i)
    d.H[i] = nd(rng);
  for (Eigen::Index i = 0; i < ns; ++i)
    d.G[i] = nd(rng);
  return d;
}

SolutionHistory zero_history(int steps, int nu, int ns, double dt)
{
  SolutionHistory h;
  h.dt = dt;
  for (int i = 0; i <= steps; ++i)
  {
    h.u.push_back(Eigen::VectorXd::Zero(nu));
    h.phi.push_back(Eigen::VectorXd::Zero(ns));
    h.lam.push_back(Eigen::VectorXd::Zero(ns));
  }
  return h;
}

}  // namespace

TEST_SUITE("mot")
{
  TEST_CASE("block solve has small residual and matches the dense operator")
  {
    const Problem &p = shared();
    const BlockSystem sys(p.blocks, p.seq, p.dt);
    CHECK(sys.num_u() == 24);
    CHECK(sys.num_s() == 8);
    const DenseMatrix L = sys.dense();
    std::mt19937 rng(11);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial)
    {
      Eigen::VectorXd b(sys.size());
      for (Eigen::Index i = 0; i < b.size(); ++i)
        b[i] = nd(rng);
      const Eigen::VectorXd x = sys.solve(b);
      CHECK((sys.apply(x) - b).norm() < 1e-10 * b.norm());
      CHECK((L * x - sys.apply(x)).norm() < 1e-12 * b.norm());
      const Eigen::VectorXd xd = L.partialPivLu().solve(b);
      CHECK((x - xd).norm() < 1e-9 * xd.norm());
    }
  }

  TEST_CASE("block layout")
  {
    const Problem &p = shared();
    const BlockSystem sys(p.blocks, p.seq, p.dt);
    const DenseMatrix L = sys.dense();
    const int nu = sys.num_u(), ns = sys.num_s();
    const DenseMatrix S = DenseMatrix(0.5 * p.dt * p.blocks.A + p.blocks.M / p.dt);
    CHECK((L.topLeftCorner(nu, nu) - S).norm() < 1e-14 * S.norm());
    CHECK(L.block(0, nu + ns, nu, ns).norm() == 0.0);
    CHECK(L.block(nu + ns, 0, ns, nu).norm() == 0.0);
    const DenseMatrix C = DenseMatrix(p.blocks.nxRI);
    CHECK((L.block(0, nu, nu, ns) - C.transpose()).norm() == 0.0);
    CHECK((L.block(nu, 0, ns, nu) + C).norm() == 0.0);
    const DenseMatrix I = DenseMatrix(p.blocks.I_bnd);
    CHECK((L.block(nu, nu, ns, ns) + p.seq.get(Family::W, 0)).norm() == 0.0);
    CHECK((L.block(nu + ns, nu + ns, ns, ns) - p.seq.get(Family::V, 0)).norm() == 0.0);
    CHECK((L.block(nu + ns, nu, ns, ns) + p.seq.get(Family::K, 0) + 0.5 * I).norm() < 1e-15);
    CHECK((L.block(nu, nu + ns, ns, ns) - p.seq.get(Family::KT, 0) + 0.25 * p.dt * I).norm() <
          1e-15);
  }

  TEST_CASE("right-hand side with zero history is the data")
  {
    const Problem &p = shared();
    const int nu = 24, ns = 8;
    const StepData d = noise_data(1, nu, ns, 5);
    for (int n : {1, 3})
    {
      const SolutionHistory h = zero_history(n - 1, nu, ns, p.dt);
      const Eigen::VectorXd b = rhs_step(n, h, d, p.blocks, p.seq);
      CHECK((b.head(nu) - d.H).norm() == 0.0);
      CHECK((b.segment(nu, ns) - d.G).norm() == 0.0);
      CHECK(b.tail(ns).norm() == 0.0);
    }
    const SolutionHistory short_hist = zero_history(1, nu, ns, p.dt);
    try
    {
      rhs_step(3, short_hist, d, p.blocks, p.seq);
      FAIL("no throw");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::State);
    }
  }

  TEST_CASE("history terms use the previous steps")
  {
    const Problem &p = shared();
    const int nu = 24, ns = 8;
    SolutionHistory h = zero_history(2, nu, ns, p.dt);
    h.phi[1] = Eigen::VectorXd::Ones(ns);
    StepData d{Eigen::VectorXd::Zero(nu), Eigen::VectorXd::Zero(ns)};
    const Eigen::VectorXd b = rhs_step(3, h, d, p.blocks, p.seq);
    // Only lag 2 of W and K touches phi_1 at step 3.
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(ns);
    CHECK((b.segment(nu, ns) - p.seq.get(Family::W, 2) * one).norm() < 1e-14);
    CHECK((b.tail(ns) - p.seq.get(Family::K, 2) * one).norm() < 1e-14);
    CHECK(b.head(nu).norm() == 0.0);
  }

  TEST_CASE("zero data gives an exactly zero solution")
  {
    const Problem &p = shared();
    const BlockSystem sys(p.blocks, p.seq, p.dt);
    const auto hist = mot_solve(sys, p.blocks, p.seq, [](int) {
      return StepData{Eigen::VectorXd::Zero(24), Eigen::VectorXd::Zero(8)};
    }, 8);
    CHECK(hist.steps() == 8);
    for (int n = 0; n <= 8; ++n)
    {
      CHECK(hist.u[n].lpNorm<Eigen::Infinity>() == 0.0);
      CHECK(hist.phi[n].lpNorm<Eigen::Infinity>() == 0.0);
      CHECK(hist.lam[n].lpNorm<Eigen::Infinity>() == 0.0);
    }
  }

  TEST_CASE("one step equals a single block solve")
  {
    const Problem &p = shared();
    const BlockSystem sys(p.blocks, p.seq, p.dt);
    const StepData d = noise_data(1, 24, 8, 9);
    const auto hist = mot_solve(sys, p.blocks, p.seq, [&](int) { return d; }, 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(40);
    b.head(24) = d.H;
    b.segment(24, 8) = d.G;
    const Eigen::VectorXd x = sys.solve(b);
    CHECK((hist.u[1] - x.head(24)).norm() == 0.0);
    CHECK((hist.phi[1] - x.segment(24, 8)).norm() == 0.0);
    CHECK((hist.lam[1] - x.tail(8)).norm() == 0.0);
  }

  TEST_CASE("deterministic, causal and linear")
  {
    const Problem &p = shared();
    const BlockSystem sys(p.blocks, p.seq, p.dt);
    auto late = [](unsigned seed) {
      return [seed](int n) {
        if (n < 4)
          return StepData{Eigen::VectorXd::Zero(24), Eigen::VectorXd::Zero(8)};
        return noise_data(n, 24, 8, seed);
      };
    };
    const auto a = mot_solve(sys, p.blocks, p.seq, late(1), 8);
    const auto a2 = mot_solve(sys, p.blocks, p.seq, late(1), 8);
    const auto b = mot_solve(sys, p.blocks, p.seq, late(2), 8);
    const auto ab = mot_solve(sys, p.blocks, p.seq, [&](int n) {
      StepData x = late(1)(n), y = late(2)(n);
      return StepData{x.H + 2.0 * y.H, x.G + 2.0 * y.G};
    }, 8);
    for (int n = 0; n <= 8; ++n)
    {
      CHECK((a.u[n] - a2.u[n]).norm() == 0.0);
      CHECK((a.lam[n] - a2.lam[n]).norm() == 0.0);
      if (n < 4)
      {
        CHECK(a.u[n].norm() == 0.0);
        CHECK(a.phi[n].norm() == 0.0);
      }
      const double scale = 1.0 + a.u[n].norm() + b.u[n].norm();
      CHECK((ab.u[n] - a.u[n] - 2.0 * b.u[n]).norm() < 1e-10 * scale);
      const double sp = 1.0 + a.phi[n].norm() + b.phi[n].norm();
      CHECK((ab.phi[n] - a.phi[n] - 2.0 * b.phi[n]).norm() < 1e-10 * sp);
    }
    CHECK(a.u[4].norm() > 0.0);
  }

  TEST_CASE("sequence must cover the requested steps")
  {
    const Problem p(3);
    const BlockSystem sys(p.blocks, p.seq, p.dt);
    auto zero = [](int) { return StepData{Eigen::VectorXd::Zero(24), Eigen::VectorXd::Zero(8)}; };
    try
    {
      mot_solve(sys, p.blocks, p.seq, zero, 4);
      FAIL("no throw");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::State);
    }
    CHECK_THROWS_AS(mot_solve(sys, p.blocks, p.seq, zero, 0), Error);
    CHECK_THROWS_AS(BlockSystem(p.blocks, p.seq, 0.0), Error);
  }
}
