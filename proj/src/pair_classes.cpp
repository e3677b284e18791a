// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/pair_classes.hpp"

#include <algorithm>
#include <cmath>

namespace tdfsi
{

namespace
{

struct Isometry
{
  std::array<int, 3> axis;
  std::array<double, 3> sign;

  Vec3 apply(const Vec3 &v) const
  {
    return Vec3(sign[0] * v[axis[0]], sign[1] * v[axis[1]], sign[2] * v[axis[2]]);
  }
};

const std::vector<Isometry> &isometries()
{
  static const std::vector<Isometry> g = [] {
    std::vector<Isometry> out;
    std::array<int, 3> p = {0, 1, 2};
    do
    {
      for (int s = 0; s < 8; ++s)
      {
        out.push_back(Isometry{p, {(s & 1) ? -1.0 : 1.0, (s & 2) ? -1.0 : 1.0,
                                   (s & 4) ? -1.0 : 1.0}});
      }
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  return g;
}

using IVec = std::array<std::int64_t, 3>;

IVec quantize(const Vec3 &v, double quantum)
{
  return {std::llround(v[0] / quantum), std::llround(v[1] / quantum), std::llround(v[2] / quantum)};
}

}  // namespace

std::size_t PairKeyHash::operator()(const PairKey &p) const
{
  std::uint64_t h = 1469598103934665603ull;
  for (auto v : p.k)
  {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

CanonicalPair canonicalize_pair(const Triangle &x, const Triangle &y, double quantum,
                                bool allow_swap)
{
  CanonicalPair best;
  bool have = false;
  for (int s = 0; s < (allow_swap ? 2 : 1); ++s)
  {
    const Triangle &A = s ? y : x;
    const Triangle &B = s ? x : y;
    for (const auto &g : isometries())
    {
      std::array<Vec3, 6> pts;
      for (int i = 0; i < 3; ++i)
      {
        pts[i] = g.apply(A.v[i]);
        pts[3 + i] = g.apply(B.v[i]);
      }
      Vec3 lo = pts[0];
      for (const auto &p : pts)
      {
        lo = lo.cwiseMin(p);
      }
      std::array<IVec, 6> q;
      for (int i = 0; i < 6; ++i)
      {
        pts[i] -= lo;
        q[i] = quantize(pts[i], quantum);
      }
      std::array<int, 3> pa = {0, 1, 2}, pb = {0, 1, 2};
      std::sort(pa.begin(), pa.end(), [&](int i, int j) { return q[i] < q[j]; });
      std::sort(pb.begin(), pb.end(), [&](int i, int j) { return q[3 + i] < q[3 + j]; });
      PairKey key;
      int m = 0;
      for (int i = 0; i < 3; ++i)
      {
        for (int c = 0; c < 3; ++c)
        {
          key.k[m++] = q[pa[i]][c];
        }
      }
      for (int i = 0; i < 3; ++i)
      {
        for (int c = 0; c < 3; ++c)
        {
          key.k[m++] = q[3 + pb[i]][c];
        }
      }
      const Vec3 na = g.apply(A.normal), nb = g.apply(B.normal);
      const IVec qa = quantize(na, 1e-9), qb = quantize(nb, 1e-9);
      for (int c = 0; c < 3; ++c)
      {
        key.k[m++] = qa[c];
      }
      for (int c = 0; c < 3; ++c)
      {
        key.k[m++] = qb[c];
      }
      if (!have || key.k < best.key.k)
      {
        have = true;
        best.key = key;
        best.swapped = (s == 1);
        best.perm_x = pa;
        best.perm_y = pb;
        best.rep_x = make_triangle(pts[pa[0]], pts[pa[1]], pts[pa[2]], na);
        best.rep_y = make_triangle(pts[3 + pb[0]], pts[3 + pb[1]], pts[3 + pb[2]], nb);
      }
    }
  }
  return best;
}

ShellMoments map_moments(const ShellMoments &rep, const CanonicalPair &c)
{
  std::array<int, 3> inv_x{}, inv_y{};
  for (int i = 0; i < 3; ++i)
  {
    inv_x[c.perm_x[i]] = i;
    inv_y[c.perm_y[i]] = i;
  }
  ShellMoments m;
  for (int q = 0; q < 3; ++q)
  {
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        if (!c.swapped)
        {
          const int ra = inv_y[a], rb = inv_x[b];
          m.plain[q][a][b] = rep.plain[q][ra][rb];
          m.ny[q][a][b] = rep.ny[q][ra][rb];
          m.nx[q][a][b] = rep.nx[q][ra][rb];
        }
        else
        {
          // Representative has the roles exchanged: its Y is our X.
          const int ra = inv_y[b], rb = inv_x[a];
          m.plain[q][a][b] = rep.plain[q][ra][rb];
          m.ny[q][a][b] = -rep.nx[q][ra][rb];
          m.nx[q][a][b] = -rep.ny[q][ra][rb];
        }
      }
    }
  }
  return m;
}

}  // namespace tdfsi
