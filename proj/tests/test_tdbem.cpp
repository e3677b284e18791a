#include <doctest.h>

#include <cmath>

#include <Eigen/SparseCholesky>

#include "tdfsi/error.hpp"
#include "tdfsi/fem.hpp"
#include "tdfsi/manufactured.hpp"
#include "tdfsi/rules.hpp"
#include "tdfsi/tdbem.hpp"
#include "support/util.hpp"

using namespace tdfsi;
using testutil::rel_fro;

namespace
{

struct CubeSetup
{
  VolumeMesh mesh;
  SurfaceMesh surf;
  double dt;
  explicit CubeSetup(int n) : mesh(build_cube_mesh(n)), surf(extract_boundary(mesh))
  {
    dt = 0.1414 * mesh_size(mesh);
  }
};

// Relative residuals of the two boundary integral identities for the exact
// outgoing wave, projected onto the discrete boundary spaces:
//   lambda row: (1/2)(phi_k - phi_{k-1}) tested, i.e. -I/2 d phi - K phi + V lambda
//   phi row:    (dt/4) I (lam_k + lam_{k-1}) - W phi + K' lambda
std::pair<double, double> calderon_residuals(const CubeSetup &c, const RetardedMatrixSequence &seq)
{
  const int nt = static_cast<int>(std::llround(4.0 / c.dt));
  const int ns = c.surf.num_nodes();
  const SparseMatrix I = assemble_boundary_mass(c.mesh, c.surf);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt{Eigen::SparseMatrix<double>(I)};
  std::vector<Eigen::VectorXd> phi(nt + 1), lam(nt + 1);
  const auto rule = triangle_gauss(6);
  for (int m = 0; m <= nt; ++m)
  {
    Eigen::VectorXd bp = Eigen::VectorXd::Zero(ns), bl = bp;
    const double t = m * c.dt;
    for (int k = 0; k < c.surf.num_triangles(); ++k)
    {
      const auto &vt = c.surf.triangles[k];
      const auto st = c.surf.surface_triangle(k);
      const Vec3 a = c.mesh.nodes[vt[0]], e1 = c.mesh.nodes[vt[1]] - a, e2 = c.mesh.nodes[vt[2]] - a;
      for (std::size_t q = 0; q < rule.w.size(); ++q)
      {
        const double s = rule.x[q][0], r = rule.x[q][1];
        const double hat[3] = {1 - s - r, s, r};
        const Vec3 x = a + s * e1 + r * e2;
        const double w = rule.w[q] * 2 * c.surf.areas[k];
        const double v = exact_v(x, t), dn = exact_grad_v(x, t).dot(c.surf.normals[k]);
        for (int j = 0; j < 3; ++j)
        {
          bp[st[j]] += w * hat[j] * v;
          bl[st[j]] += w * hat[j] * dn;
        }
      }
    }
    phi[m] = ldlt.solve(bp);
    lam[m] = ldlt.solve(bl);
  }
  double s1 = 0, s1n = 0, s2 = 0, s2n = 0;
  for (int k = 1; k <= nt; ++k)
  {
    const Eigen::VectorXd r1 = -0.5 * (I * (phi[k] - phi[k - 1]));
    const Eigen::VectorXd r2 = 0.25 * c.dt * (I * (lam[k] + lam[k - 1]));
    Eigen::VectorXd a1 = Eigen::VectorXd::Zero(ns), a2 = a1, b1 = a1, b2 = a1;
    for (int m = 1; m <= k; ++m)
    {
      const int l = k - m;
      a1 -= seq.get(Family::K, l) * phi[m];
      b1 += seq.get(Family::V, l) * lam[m];
      a2 -= seq.get(Family::W, l) * phi[m];
      b2 += seq.get(Family::KT, l) * lam[m];
    }
    s1 += (r1 + a1 + b1).squaredNorm();
    s1n += b1.squaredNorm();
    s2 += (r2 + a2 + b2).squaredNorm();
    s2n += a2.squaredNorm() + r2.squaredNorm();
  }
  return {std::sqrt(s1 / s1n), std::sqrt(s2 / s2n)};
}

}  // namespace

TEST_SUITE("tdbem")
{
  TEST_CASE("radial weight examples")
  {
    const double dt = 0.3;
    for (int k : {2, 3, 7})
    {
      CHECK(eval_Y(k * dt, k, dt) == doctest::Approx(dt / 2).epsilon(1e-14));
      CHECK(eval_Y((k - 1) * dt, k, dt) == doctest::Approx(dt / 2).epsilon(1e-14));
      CHECK(eval_Y((k + 1) * dt, k, dt) == 0.0);
      CHECK(eval_Y((k - 2) * dt, k, dt) == 0.0);
      CHECK(eval_Y((k + 1.5) * dt, k, dt) == 0.0);
    }
    CHECK(eval_Y(0.1, -1, dt) == 0.0);
    // lag 0 and 1 start at r = 0 with the partial pieces
    CHECK(eval_Y(0.0, 0, dt) == doctest::Approx(dt / 2));
    CHECK(eval_Y(0.0, 1, dt) == doctest::Approx(dt / 2));
  }

  TEST_CASE("radial weight integrates the hat against the step indicator")
  {
    // dt * int_{k-1-s}^{k-s} hat(x) dx with s = r / dt, by midpoint sums
    const double dt = 0.4;
    for (int k : {0, 1, 4})
      for (double r : {0.05, 0.31, 0.77, 1.13, 1.6, 1.9})
      {
        const double s = r / dt;
        const int m = 20000;
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
        {
          const double x = (k - 1 - s) + (i + 0.5) / m;
          acc += std::max(0.0, 1.0 - std::abs(x));
        }
        CHECK(eval_Y(r, k, dt) == doctest::Approx(dt * acc / m).epsilon(1e-7));
      }
  }

  TEST_CASE("causal lag count")
  {
    CHECK(causal_lag_count(2.0 * std::sqrt(3.0), 0.4) == 11);
    CHECK(causal_lag_count(1.0, 0.25) == 6);
    CHECK_THROWS_AS(causal_lag_count(1.0, 0.0), Error);
  }

  TEST_CASE("negative lags and empty light cones give exact zeros")
  {
    const CubeSetup c(1);
    for (auto f : {assemble_V, assemble_K, assemble_KT, assemble_W})
    {
      CHECK(f(c.mesh, c.surf, c.dt, -1, {}).norm() == 0.0);
      const int first_empty = causal_lag_count(2.0 * std::sqrt(3.0), c.dt);
      CHECK(f(c.mesh, c.surf, c.dt, first_empty, {}).norm() == 0.0);
      CHECK(f(c.mesh, c.surf, c.dt, first_empty - 3, {}).norm() > 0.0);
    }
  }

  TEST_CASE("sequence bookkeeping")
  {
    const CubeSetup c(1);
    const auto one = assemble_sequence(c.mesh, c.surf, c.dt, 1);
    CHECK(one.stored() == 1);
    CHECK(one.count == 1);
    const auto all = assemble_sequence(c.mesh, c.surf, c.dt, 40);
    CHECK(all.stored() == causal_lag_count(surface_diameter(c.mesh, c.surf), c.dt));
    CHECK(all.get(Family::W, 200).norm() == 0.0);
    CHECK(all.get(Family::V, -2).norm() == 0.0);
    // Same lag-0 values up to summation order.
    CHECK(rel_fro(one.V[0], all.V[0]) < 1e-12);
    CHECK_THROWS_AS(assemble_sequence(c.mesh, c.surf, c.dt, 0), Error);
  }

  TEST_CASE("V and W are symmetric, K and K' are not transposes")
  {
    const CubeSetup c(1);
    const auto lags = assemble_lags(c.mesh, c.surf, c.dt, 0, 4, {});
    for (const auto &l : lags)
    {
      CHECK(rel_fro(l[0], l[0].transpose()) < 1e-3);
      CHECK(rel_fro(l[3], l[3].transpose()) < 1e-3);
    }
    // The time test spaces of the two families differ, so no discrete adjointness.
    CHECK(rel_fro(lags[1][2], lags[1][1].transpose()) > 0.1);
  }

  TEST_CASE("pair symmetry classes do not change the matrices")
  {
    const CubeSetup c(1);
    BemOptions off;
    off.use_symmetry = false;
    const auto a = assemble_lags(c.mesh, c.surf, c.dt, 0, 3, {});
    const auto b = assemble_lags(c.mesh, c.surf, c.dt, 0, 3, off);
    for (int k = 0; k < 3; ++k)
      for (int f = 0; f < 4; ++f)
        CHECK(rel_fro(a[k][f], b[k][f]) < 1e-3);
  }

  TEST_CASE("defaults are stable under quadrature refinement")
  {
    const CubeSetup c(2);
    BemOptions fine;
    fine.quad.order_near += 1;
    fine.quad.order_far += 1;
    fine.quad.subdiv_depth += 1;
    const auto a = assemble_lags(c.mesh, c.surf, c.dt, 0, 1, {});
    const auto b = assemble_lags(c.mesh, c.surf, c.dt, 0, 1, fine);
    for (int f = 0; f < 4; ++f)
      CHECK(rel_fro(a[0][f], b[0][f]) < 5e-3);
    CHECK(BemOptions{}.hash() != fine.hash());
  }

  TEST_CASE("sign conventions: Calderon identities of the exact exterior wave")
  {
    const CubeSetup c(2);
    const int nt = static_cast<int>(std::llround(4.0 / c.dt));
    BemOptions opt;
    const auto seq = assemble_sequence(c.mesh, c.surf, c.dt, nt, opt);
    const auto [lam_row, phi_row] = calderon_residuals(c, seq);
    CHECK(lam_row < 0.2);
    CHECK(phi_row < 0.15);

    BemOptions flip_kt = opt;
    flip_kt.kt_sign = -opt.kt_sign;
    CHECK(calderon_residuals(c, assemble_sequence(c.mesh, c.surf, c.dt, nt, flip_kt)).second > 0.4);
    BemOptions flip_curl = opt;
    flip_curl.w_curl_sign = -opt.w_curl_sign;
    CHECK(calderon_residuals(c, assemble_sequence(c.mesh, c.surf, c.dt, nt, flip_curl)).second > 0.4);
  }
}
