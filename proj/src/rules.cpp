// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/rules.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "tdfsi/error.hpp"

namespace tdfsi
{

namespace
{

Rule1D compute_gauss_legendre(int n)
{
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i)
  {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k)
      {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
      {
        p0 = 1.0;
        p1 = z;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
      {
        break;
      }
    }
    // Map from [-1,1] to [0,1], ascending order.
    r.x[n - 1 - i] = 0.5 * (z + 1.0);
    r.w[n - 1 - i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

}  // namespace

const Rule1D &gauss_legendre(int npts)
{
  if (npts < 1 || npts > 64)
  {
    raise(ErrorCode::InvalidArgument, "gauss_legendre: order must be in [1,64]");
  }
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto &slot = cache[npts];
  if (!slot)
  {
    slot = std::make_unique<Rule1D>(compute_gauss_legendre(npts));
  }
  return *slot;
}

TriangleRule triangle_gauss(int npts)
{
  const Rule1D &g = gauss_legendre(npts);
  TriangleRule r;
  for (int i = 0; i < npts; ++i)
  {
    for (int j = 0; j < npts; ++j)
    {
      const double u = g.x[i], v = g.x[j];
      r.x.push_back({u * (1.0 - v), u * v});
      r.w.push_back(g.w[i] * g.w[j] * u);
    }
  }
  return r;
}

const TriangleRule &triangle_7pt()
{
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w1 = (155.0 - s15) / 2400.0, w2 = (155.0 + s15) / 2400.0;
    r.x = {{1.0 / 3.0, 1.0 / 3.0}, {a1, a1}, {b1, a1}, {a1, b1}, {a2, a2}, {b2, a2}, {a2, b2}};
    r.w = {9.0 / 80.0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

TetRule tet_gauss(int npts)
{
  const Rule1D &g = gauss_legendre(npts);
  TetRule r;
  for (int i = 0; i < npts; ++i)
  {
    for (int j = 0; j < npts; ++j)
    {
      for (int k = 0; k < npts; ++k)
      {
        const double u = g.x[i], v = g.x[j], w = g.x[k];
        // Collapse the unit cube onto the tet.
        const double x = u * (1.0 - v);
        const double y = u * v * (1.0 - w);
        const double z = u * v * w;
        r.x.push_back({x, y, z});
        r.w.push_back(g.w[i] * g.w[j] * g.w[k] * u * u * v);
      }
    }
  }
  return r;
}

}  // namespace tdfsi
