// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "tdfsi/error.hpp"
#include "tdfsi/rules.hpp"

namespace tdfsi
{

namespace
{

constexpr double kPi = std::numbers::pi;
using Vec2 = Eigen::Vector2d;

double cross2(const Vec2 &a, const Vec2 &b)
{
  return a.x() * b.y() - a.y() * b.x();
}

Vec3 closest_point_on_triangle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c)
{
  // Voronoi-region walk (Ericson, Real-Time Collision Detection 5.1.5).
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0)
  {
    return a;
  }
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3)
  {
    return b;
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0)
  {
    return a + ab * (d1 / (d1 - d3));
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6)
  {
    return c;
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0)
  {
    return a + ac * (d2 / (d2 - d6));
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
  {
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double segment_segment_distance(const Vec3 &p1, const Vec3 &q1, const Vec3 &p2, const Vec3 &q2)
{
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = d1.dot(d1), e = d2.dot(d2), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  const double c = d1.dot(r), b = d1.dot(d2);
  const double denom = a * e - b * b;
  if (denom > 1e-14 * a * e)
  {
    s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  }
  t = (b * s + f) / e;
  if (t < 0.0)
  {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  }
  else if (t > 1.0)
  {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return ((p1 + d1 * s) - (p2 + d2 * t)).norm();
}

// Inner triangle in its own plane frame.
struct PlaneFrame
{
  Vec3 y0, u, v, n;
  std::array<Vec2, 3> Q;   // vertices relative to y0
  std::array<Vec2, 3> g;   // hat gradients
  std::array<double, 3> c; // hat values at y0-frame origin
  double orient = 1.0;     // sign of the signed area in (u, v)
  double scale = 1.0;      // triangle diameter
};

PlaneFrame make_frame(const Triangle &t)
{
  PlaneFrame f;
  f.y0 = t.v[0];
  f.n = t.normal;
  f.u = (t.v[1] - t.v[0]).normalized();
  f.v = f.n.cross(f.u);
  for (int i = 0; i < 3; ++i)
  {
    const Vec3 d = t.v[i] - f.y0;
    f.Q[i] = Vec2(d.dot(f.u), d.dot(f.v));
  }
  const double a2 = cross2(f.Q[1] - f.Q[0], f.Q[2] - f.Q[0]);
  f.orient = a2 > 0.0 ? 1.0 : -1.0;
  f.scale = triangle_diameter(t);
  for (int a = 0; a < 3; ++a)
  {
    const Vec2 &B = f.Q[(a + 1) % 3];
    const Vec2 &C = f.Q[(a + 2) % 3];
    f.g[a] = Vec2(B.y() - C.y(), C.x() - B.x()) / a2;
    f.c[a] = cross2(B, C) / a2;
  }
  return f;
}

double dist_point_segment_2d(const Vec2 &a, const Vec2 &b)
{
  // Distance from the origin to segment [a, b].
  const Vec2 d = b - a;
  const double t = std::clamp(-a.dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (a + t * d).norm();
}

// Angular integrals over the arcs of the circle |q| = rho inside the triangle
// (coordinates relative to the projected point).
struct ArcSums
{
  double len = 0.0, c = 0.0, s = 0.0, cc = 0.0, cs = 0.0, ss = 0.0;
};

struct Crossing
{
  double theta;
  double cx, sx;
  bool enter;
};

void add_arc(ArcSums &acc, double th1, double c1, double s1, double th2, double c2, double s2)
{
  double d = th2 - th1;
  if (d <= 0.0)
  {
    d += 2.0 * kPi;
  }
  acc.len += d;
  acc.c += s2 - s1;
  acc.s += c1 - c2;
  const double icc = 0.5 * d + 0.5 * (s2 * c2 - s1 * c1);
  acc.cc += icc;
  acc.cs += 0.5 * (s2 * s2 - s1 * s1);
  acc.ss += d - icc;
}

bool inside_local(const std::array<Vec2, 3> &P, double orient, const Vec2 &q)
{
  for (int i = 0; i < 3; ++i)
  {
    const Vec2 &a = P[i];
    const Vec2 &b = P[(i + 1) % 3];
    if (orient * cross2(b - a, q - a) < 0.0)
    {
      return false;
    }
  }
  return true;
}

ArcSums circle_arcs(const std::array<Vec2, 3> &P, double orient, double rho)
{
  ArcSums acc;
  std::array<Crossing, 6> cr;
  int nc = 0;
  const double rho2 = rho * rho;
  for (int i = 0; i < 3; ++i)
  {
    const Vec2 &a = P[i];
    const Vec2 D = P[(i + 1) % 3] - a;
    const double A = D.squaredNorm();
    const double B = 2.0 * a.dot(D);
    const double C = a.squaredNorm() - rho2;
    const double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0)
    {
      continue;
    }
    const double sq = std::sqrt(disc);
    // Stable roots.
    const double qq = -0.5 * (B + (B >= 0.0 ? sq : -sq));
    double t1 = qq / A;
    double t2 = (qq != 0.0) ? C / qq : t1;
    if (t1 > t2)
    {
      std::swap(t1, t2);
    }
    for (double t : {t1, t2})
    {
      if (t >= 0.0 && t < 1.0)
      {
        const Vec2 pt = a + t * D;
        const double cx = pt.x() / rho, sx = pt.y() / rho;
        // Counter-clockwise tangent (-sx, cx); interior is to the left of D when orient > 0.
        const double cr_dt = D.x() * cx + D.y() * sx;
        cr[nc++] = Crossing{std::atan2(sx, cx), cx, sx, orient * cr_dt > 0.0};
      }
    }
  }
  if (nc == 0)
  {
    if (inside_local(P, orient, Vec2(rho, 0.0)))
    {
      acc.len = 2.0 * kPi;
      acc.cc = kPi;
      acc.ss = kPi;
    }
    return acc;
  }
  std::sort(cr.begin(), cr.begin() + nc,
            [](const Crossing &x, const Crossing &y) { return x.theta < y.theta; });
  bool alternating = (nc % 2 == 0);
  for (int i = 0; i < nc && alternating; ++i)
  {
    alternating = cr[i].enter != cr[(i + 1) % nc].enter;
  }
  for (int i = 0; i < nc; ++i)
  {
    const Crossing &a = cr[i];
    const Crossing &b = cr[(i + 1) % nc];
    bool in;
    if (alternating)
    {
      in = a.enter;
    }
    else
    {
      double mid = 0.5 * (a.theta + b.theta);
      if (i + 1 == nc)
      {
        mid += kPi;
      }
      in = inside_local(P, orient, Vec2(rho * std::cos(mid), rho * std::sin(mid)));
    }
    if (in)
    {
      add_arc(acc, a.theta, a.cx, a.sx, b.theta, b.cx, b.sx);
    }
  }
  return acc;
}

// Per-shell inner integrals for one outer point:
//   S[k][a] = int r^q xi_a dy,                 q = k - 3, k = 0..4 (q = -3..1)
//   T[k][a] = int r^q rho (n_x . e) xi_a dy,   q = k - 3, k = 0..2
struct InnerShell
{
  double S[5][3];
  double T[3][3];
};

struct Scratch
{
  std::vector<double> breaks;
  std::vector<InnerShell> inner;
};

void inner_integrals(const PlaneFrame &F, const Vec3 &x, const Vec3 &nx_vec,
                     const std::vector<double> &bounds, int order, Scratch &scratch,
                     double &d_signed)
{
  const int nshell = static_cast<int>(bounds.size()) - 1;
  auto &inner = scratch.inner;
  inner.assign(nshell, InnerShell{});
  for (auto &s : inner)
  {
    std::memset(&s, 0, sizeof(InnerShell));
  }

  const Vec3 rel = x - F.y0;
  double ds = F.n.dot(rel);
  // Points in the plane of Y: the limit d -> 0 of the double layer kernel is a
  // jump term, which is not what coplanar pairs need.
  if (std::abs(ds) < 1e-12 * F.scale)
  {
    ds = 0.0;
  }
  d_signed = ds;
  const double d = std::abs(ds);
  const double d2 = d * d;
  const Vec2 p(rel.dot(F.u), rel.dot(F.v));
  std::array<Vec2, 3> P;
  for (int i = 0; i < 3; ++i)
  {
    P[i] = F.Q[i] - p;
  }
  std::array<double, 3> A;
  for (int a = 0; a < 3; ++a)
  {
    A[a] = F.c[a] + F.g[a].dot(p);
  }
  const double cu = nx_vec.dot(F.u), cv = nx_vec.dot(F.v);

  double rho_min = 0.0;
  const bool p_inside = inside_local(P, F.orient, Vec2::Zero());
  double rho_max = 0.0;
  auto &br = scratch.breaks;
  br.clear();
  double seg_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
  {
    const double rv = P[i].norm();
    rho_max = std::max(rho_max, rv);
    br.push_back(rv);
    const double sd = dist_point_segment_2d(P[i], P[(i + 1) % 3]);
    br.push_back(sd);
    seg_min = std::min(seg_min, sd);
  }
  if (!p_inside)
  {
    rho_min = seg_min;
  }
  br.push_back(rho_min);
  for (double &b : br)
  {
    b = std::sqrt(b * b + d2);
  }
  const double r_lo = std::sqrt(rho_min * rho_min + d2);
  const double r_hi = std::sqrt(rho_max * rho_max + d2);
  for (double b : bounds)
  {
    if (b > r_lo && b < r_hi)
    {
      br.push_back(b);
    }
  }
  std::sort(br.begin(), br.end());
  const double tol = 1e-13 * r_hi;

  const Rule1D &gl = gauss_legendre(order);

  auto integrate_piece = [&](double a, double b, int shell) {
    InnerShell &acc = inner[shell];
    const double half = 0.5 * (b - a);
    for (std::size_t gi = 0; gi < gl.x.size(); ++gi)
    {
      // Cosine map smooths square-root endpoint behaviour at critical radii.
      const double s = gl.x[gi];
      const double cs = std::cos(kPi * s);
      const double r = a + half * (1.0 - cs);
      const double w = gl.w[gi] * half * kPi * std::sin(kPi * s);
      const double rho2 = r * r - d2;
      if (rho2 <= 0.0)
      {
        continue;
      }
      const double rho = std::sqrt(rho2);
      const ArcSums arc = circle_arcs(P, F.orient, rho);
      if (arc.len == 0.0)
      {
        continue;
      }
      const double ec = cu * arc.c + cv * arc.s;
      double xi[3], nxi[3];
      for (int h = 0; h < 3; ++h)
      {
        const double gx = F.g[h].x(), gy = F.g[h].y();
        xi[h] = A[h] * arc.len + rho * (gx * arc.c + gy * arc.s);
        nxi[h] = A[h] * ec + rho * (gx * cu * arc.cc + (gx * cv + gy * cu) * arc.cs + gy * cv * arc.ss);
      }
      // Jacobian r dr dtheta.
      const double ir = 1.0 / r;
      const double rp[5] = {w * ir * ir, w * ir, w, w * r, w * r * r};  // w r^{q+1}, q = -3..1
      for (int k = 0; k < 5; ++k)
      {
        for (int h = 0; h < 3; ++h)
        {
          acc.S[k][h] += rp[k] * xi[h];
        }
      }
      for (int k = 0; k < 3; ++k)
      {
        for (int h = 0; h < 3; ++h)
        {
          acc.T[k][h] += rp[k] * rho * nxi[h];
        }
      }
    }
  };

  for (std::size_t i = 0; i + 1 < br.size(); ++i)
  {
    double a = br[i];
    const double b = br[i + 1];
    if (b - a <= tol)
    {
      continue;
    }
    const double mid = 0.5 * (a + b);
    const int shell =
        static_cast<int>(std::upper_bound(bounds.begin(), bounds.end(), mid) - bounds.begin()) - 1;
    if (shell < 0 || shell >= nshell)
    {
      continue;
    }
    // Geometric grading away from small radii.
    int guard = 0;
    while (a > 0.0 && b > 2.0 * a && guard < 64)
    {
      integrate_piece(a, 2.0 * a, shell);
      a *= 2.0;
      ++guard;
    }
    integrate_piece(a, b, shell);
  }
}

// Sub-triangle of X in barycentric coordinates of X.
using Bary = Eigen::Vector3d;

struct OuterContext
{
  const Triangle *X;
  const Triangle *Y;
  PlaneFrame F;
  const std::vector<double> *bounds;
  std::vector<ShellMoments> *out;
  double cell_size;
  int order;
  int subdiv_depth;
  // Singular set in barycentric terms: touches(b) tests a sub-triangle vertex.
  int shared_mask = 0;  // bit b set if X vertex b coincides with a vertex of Y
  int shared_count = 0;
  TriangleRule rule;
  Scratch scratch;
};

Vec3 bary_point(const Triangle &X, const Bary &b)
{
  return b[0] * X.v[0] + b[1] * X.v[1] + b[2] * X.v[2];
}

bool touches_singular(const OuterContext &ctx, const Bary &b)
{
  constexpr double eps = 1e-12;
  if (ctx.shared_count == 0)
  {
    return false;
  }
  if (ctx.shared_count == 1)
  {
    for (int k = 0; k < 3; ++k)
    {
      if (ctx.shared_mask & (1 << k))
      {
        return b[k] > 1.0 - eps;
      }
    }
  }
  if (ctx.shared_count == 2)
  {
    for (int k = 0; k < 3; ++k)
    {
      if (!(ctx.shared_mask & (1 << k)))
      {
        return b[k] < eps;
      }
    }
  }
  // Identical triangles: any boundary point.
  return b.minCoeff() < eps;
}

void integrate_leaf(OuterContext &ctx, const std::array<Bary, 3> &T)
{
  const Triangle &X = *ctx.X;
  const Vec3 p0 = bary_point(X, T[0]);
  const Vec3 p1 = bary_point(X, T[1]);
  const Vec3 p2 = bary_point(X, T[2]);
  const double jac = (p1 - p0).cross(p2 - p0).norm();
  if (jac == 0.0)
  {
    return;
  }
  const Vec3 &nx = X.normal;
  const double nxny = nx.dot(ctx.F.n);
  auto &out = *ctx.out;
  for (std::size_t q = 0; q < ctx.rule.w.size(); ++q)
  {
    const double s = ctx.rule.x[q][0], t = ctx.rule.x[q][1];
    const Bary b = (1.0 - s - t) * T[0] + s * T[1] + t * T[2];
    const Vec3 x = bary_point(X, b);
    const double w = ctx.rule.w[q] * jac;
    double ds = 0.0;
    inner_integrals(ctx.F, x, nx, *ctx.bounds, ctx.order, ctx.scratch, ds);
    const double c0 = ds * nxny;
    for (std::size_t sh = 0; sh < out.size(); ++sh)
    {
      const InnerShell &in = ctx.scratch.inner[sh];
      ShellMoments &m = out[sh];
      for (int bb = 0; bb < 3; ++bb)
      {
        const double wb = w * b[bb];
        if (wb == 0.0)
        {
          continue;
        }
        for (int a = 0; a < 3; ++a)
        {
          for (int k = 0; k < 3; ++k)
          {
            m.plain[k][a][bb] += wb * in.S[k + 2][a];
            m.ny[k][a][bb] += wb * ds * in.S[k][a];
            m.nx[k][a][bb] += wb * (c0 * in.S[k][a] - in.T[k][a]);
          }
        }
      }
    }
  }
}

void refine(OuterContext &ctx, const std::array<Bary, 3> &T, int extra)
{
  const Triangle &X = *ctx.X;
  const Vec3 p0 = bary_point(X, T[0]);
  const Vec3 p1 = bary_point(X, T[1]);
  const Vec3 p2 = bary_point(X, T[2]);
  const double diam = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
  bool split = diam > ctx.cell_size;
  int next_extra = extra;
  if (!split && extra < ctx.subdiv_depth &&
      (touches_singular(ctx, T[0]) || touches_singular(ctx, T[1]) || touches_singular(ctx, T[2])))
  {
    split = true;
    next_extra = extra + 1;
  }
  if (!split)
  {
    integrate_leaf(ctx, T);
    return;
  }
  const Bary m01 = 0.5 * (T[0] + T[1]);
  const Bary m12 = 0.5 * (T[1] + T[2]);
  const Bary m20 = 0.5 * (T[2] + T[0]);
  refine(ctx, {T[0], m01, m20}, next_extra);
  refine(ctx, {m01, T[1], m12}, next_extra);
  refine(ctx, {m20, m12, T[2]}, next_extra);
  refine(ctx, {m12, m20, m01}, next_extra);
}

// Split a convex polygon (barycentric vertices, values f) at level c.
void slice_polygon(const std::vector<Bary> &poly, const std::vector<double> &f, double c,
                   std::vector<Bary> &below, std::vector<double> &fb, std::vector<Bary> &above,
                   std::vector<double> &fa)
{
  below.clear();
  above.clear();
  fb.clear();
  fa.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
  {
    const std::size_t j = (i + 1) % n;
    const double gi = f[i] - c, gj = f[j] - c;
    if (gi <= 0.0)
    {
      below.push_back(poly[i]);
      fb.push_back(f[i]);
    }
    if (gi >= 0.0)
    {
      above.push_back(poly[i]);
      fa.push_back(f[i]);
    }
    if ((gi < 0.0 && gj > 0.0) || (gi > 0.0 && gj < 0.0))
    {
      const double t = gi / (gi - gj);
      const Bary pt = poly[i] + t * (poly[j] - poly[i]);
      below.push_back(pt);
      fb.push_back(c);
      above.push_back(pt);
      fa.push_back(c);
    }
  }
}

}  // namespace

Triangle make_triangle(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &normal)
{
  Triangle t;
  t.v = {a, b, c};
  t.area = 0.5 * (b - a).cross(c - a).norm();
  if (!(t.area > 0.0))
  {
    raise(ErrorCode::Geometry, "make_triangle: degenerate triangle");
  }
  t.normal = normal.normalized();
  return t;
}

Triangle make_triangle(const Vec3 &a, const Vec3 &b, const Vec3 &c)
{
  return make_triangle(a, b, c, (b - a).cross(c - a));
}

Triangle surface_triangle(const VolumeMesh &mesh, const SurfaceMesh &surf, int t)
{
  const auto &tri = surf.triangles[t];
  return make_triangle(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]],
                       surf.normals[t]);
}

double triangle_diameter(const Triangle &t)
{
  return std::max({(t.v[0] - t.v[1]).norm(), (t.v[1] - t.v[2]).norm(), (t.v[2] - t.v[0]).norm()});
}

double point_triangle_distance(const Vec3 &p, const Triangle &t)
{
  return (p - closest_point_on_triangle(p, t.v[0], t.v[1], t.v[2])).norm();
}

double triangle_distance(const Triangle &x, const Triangle &y)
{
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
  {
    d = std::min(d, point_triangle_distance(x.v[i], y));
    d = std::min(d, point_triangle_distance(y.v[i], x));
  }
  for (int i = 0; i < 3; ++i)
  {
    for (int j = 0; j < 3; ++j)
    {
      d = std::min(d, segment_segment_distance(x.v[i], x.v[(i + 1) % 3], y.v[j],
                                               y.v[(j + 1) % 3]));
    }
  }
  return d;
}

double triangle_max_distance(const Triangle &x, const Triangle &y)
{
  double d = 0.0;
  for (const auto &a : x.v)
  {
    for (const auto &b : y.v)
    {
      d = std::max(d, (a - b).norm());
    }
  }
  return d;
}

PairClass classify_pair(const Triangle &x, const Triangle &y, const ShellSpec &shell)
{
  const double dmin = triangle_distance(x, y);
  const double dmax = triangle_max_distance(x, y);
  if (dmax < shell.lo() || dmin > shell.hi())
  {
    return PairClass::Outside;
  }
  if (dmin >= shell.lo() && dmax <= shell.hi())
  {
    return PairClass::Inside;
  }
  return PairClass::Cut;
}

void QuadConfig::validate() const
{
  if (order_near < 1 || order_near > 32 || order_far < 1 || order_far > 32)
  {
    raise(ErrorCode::InvalidArgument, "quadrature orders must be in [1,32]");
  }
  if (subdiv_depth < 0 || subdiv_depth > 20)
  {
    raise(ErrorCode::InvalidArgument, "subdivision depth must be in [0,20]");
  }
  if (!(cell_factor > 0.0) || !std::isfinite(cell_factor))
  {
    raise(ErrorCode::InvalidArgument, "cell factor must be positive");
  }
}

std::uint64_t QuadConfig::hash() const
{
  // FNV-1a over the settings and an engine revision tag.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
    {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  std::uint64_t cf;
  std::memcpy(&cf, &cell_factor, sizeof(cf));
  mix(static_cast<std::uint64_t>(order_near));
  mix(static_cast<std::uint64_t>(order_far));
  mix(static_cast<std::uint64_t>(subdiv_depth));
  mix(cf);
  mix(4);  // engine revision
  return h;
}

void ShellMoments::set_zero()
{
  std::memset(this, 0, sizeof(ShellMoments));
}

ShellMoments &ShellMoments::operator+=(const ShellMoments &o)
{
  double *a = &plain[0][0][0];
  const double *b = &o.plain[0][0][0];
  for (std::size_t i = 0; i < sizeof(ShellMoments) / sizeof(double); ++i)
  {
    a[i] += b[i];
  }
  return *this;
}

std::array<int, 2> shell_range(const Triangle &x, const Triangle &y, double dt)
{
  const double dmin = triangle_distance(x, y);
  const double dmax = triangle_max_distance(x, y);
  int lo = static_cast<int>(std::floor(dmin / dt));
  int hi = static_cast<int>(std::floor(dmax / dt));
  // A pair touching t_{l} exactly only needs shell l if its range goes past it.
  if (hi > lo && hi * dt >= dmax)
  {
    --hi;
  }
  return {lo, hi};
}

std::vector<ShellMoments> compute_interval_moments(const Triangle &x, const Triangle &y,
                                                   const std::vector<double> &bounds,
                                                   double cell_size, const QuadConfig &cfg)
{
  cfg.validate();
  if (bounds.size() < 2)
  {
    raise(ErrorCode::InvalidArgument, "compute_interval_moments: need at least two bounds");
  }
  std::vector<ShellMoments> out(bounds.size() - 1);
  for (auto &m : out)
  {
    m.set_zero();
  }

  OuterContext ctx;
  ctx.X = &x;
  ctx.Y = &y;
  ctx.F = make_frame(y);
  ctx.bounds = &bounds;
  ctx.out = &out;
  ctx.subdiv_depth = cfg.subdiv_depth;
  const double diam = std::max(triangle_diameter(x), triangle_diameter(y));
  const double dmin = triangle_distance(x, y);
  const bool near = dmin < diam;
  ctx.order = near ? cfg.order_near : cfg.order_far;
  ctx.rule = triangle_gauss(ctx.order);
  ctx.cell_size = std::isfinite(cell_size) ? cell_size : triangle_diameter(x);

  const double tol = 1e-12 * diam;
  for (int b = 0; b < 3; ++b)
  {
    for (int a = 0; a < 3; ++a)
    {
      if ((x.v[b] - y.v[a]).norm() < tol)
      {
        ctx.shared_mask |= 1 << b;
        ctx.shared_count++;
      }
    }
  }
  // Coplanar-adjacent or identical pairs only; non-coincident touching is not expected.
  if (ctx.shared_count == 3 && (x.normal - y.normal).norm() > 1e-12)
  {
    raise(ErrorCode::Geometry, "compute_interval_moments: coincident triangles with opposite normals");
  }

  // Cut X along the planes parallel to Y at the shell radii so that the kink
  // of the inner integral at r = dist(x, plane Y) follows element boundaries.
  std::vector<std::vector<Bary>> pieces;
  std::vector<Bary> tri0 = {Bary(1, 0, 0), Bary(0, 1, 0), Bary(0, 0, 1)};
  const bool parallel = x.normal.cross(y.normal).norm() < 1e-12;
  // In-plane pairs have no normal-derivative singularity left; three levels
  // of grading already saturate the accuracy there.
  if (parallel && std::abs(y.normal.dot(x.v[0] - y.v[0])) < tol)
  {
    ctx.subdiv_depth = std::min(ctx.subdiv_depth, 3);
  }
  if (parallel)
  {
    pieces.push_back(tri0);
  }
  else
  {
    std::vector<double> f0(3);
    for (int b = 0; b < 3; ++b)
    {
      f0[b] = y.normal.dot(x.v[b] - y.v[0]);
    }
    const double fmin = *std::min_element(f0.begin(), f0.end());
    const double fmax = *std::max_element(f0.begin(), f0.end());
    std::vector<double> levels;
    for (double b : bounds)
    {
      if (!std::isfinite(b))
      {
        continue;
      }
      for (double c : {-b, b})
      {
        if (c > fmin + tol && c < fmax - tol)
        {
          levels.push_back(c);
        }
      }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<Bary> rest = tri0, below, above;
    std::vector<double> frest = f0, fb, fa;
    for (double c : levels)
    {
      slice_polygon(rest, frest, c, below, fb, above, fa);
      if (below.size() >= 3)
      {
        pieces.push_back(below);
      }
      rest = above;
      frest = fa;
    }
    if (rest.size() >= 3)
    {
      pieces.push_back(rest);
    }
  }

  for (const auto &poly : pieces)
  {
    for (std::size_t k = 1; k + 1 < poly.size(); ++k)
    {
      refine(ctx, {poly[0], poly[k], poly[k + 1]}, 0);
    }
  }

  for (const auto &m : out)
  {
    const double *p = &m.plain[0][0][0];
    for (std::size_t i = 0; i < sizeof(ShellMoments) / sizeof(double); ++i)
    {
      if (!std::isfinite(p[i]))
      {
        raise(ErrorCode::Accuracy, "compute_interval_moments: non-finite moment");
      }
    }
  }
  return out;
}

PairMoments compute_pair_moments(const Triangle &x, const Triangle &y, double dt,
                                 const QuadConfig &cfg)
{
  if (!(dt > 0.0))
  {
    raise(ErrorCode::InvalidArgument, "compute_pair_moments: dt must be positive");
  }
  PairMoments pm;
  const auto range = shell_range(x, y, dt);
  pm.first_shell = range[0];
  if (range[1] < range[0])
  {
    return pm;
  }
  std::vector<double> bounds;
  for (int l = range[0]; l <= range[1] + 1; ++l)
  {
    bounds.push_back(l * dt);
  }
  pm.shells = compute_interval_moments(x, y, bounds, cfg.cell_factor * dt, cfg);
  return pm;
}

Vec3 hat_gradient(const Triangle &t, int a)
{
  const Vec3 &p = t.v[(a + 1) % 3];
  const Vec3 &q = t.v[(a + 2) % 3];
  // Gradient of the hat at vertex a: n x (q - p) / (2 area), oriented by the normal.
  const Vec3 e = q - p;
  Vec3 g = t.normal.cross(e) / (2.0 * t.area);
  // Sign check against the vertex: grad . (v_a - p) must be +1.
  if (g.dot(t.v[a] - p) < 0.0)
  {
    g = -g;
  }
  return g;
}

Vec3 hat_curl(const Triangle &t, int a)
{
  return t.normal.cross(hat_gradient(t, a));
}

double hat_value(const Triangle &t, int a, const Vec3 &p)
{
  return 1.0 + hat_gradient(t, a).dot(p - t.v[a]);
}

namespace
{

double kernel_value(KernelId k, const Triangle &x, const Triangle &y, const Vec3 &px,
                    const Vec3 &py, double r, double curl_dot)
{
  const double inv4pi = 1.0 / (4.0 * kPi);
  switch (k)
  {
    case KernelId::SL:
      return inv4pi / r;
    case KernelId::SL_R0:
      return inv4pi;
    case KernelId::SL_R1:
      return inv4pi * r;
    case KernelId::DLy:
      return inv4pi * y.normal.dot(px - py) / (r * r * r);
    case KernelId::DLx:
      return inv4pi * x.normal.dot(px - py) / (r * r * r);
    case KernelId::DLx_R2:
      return inv4pi * x.normal.dot(px - py) / (r * r);
    case KernelId::DLx_R1:
      return inv4pi * x.normal.dot(px - py) / r;
    case KernelId::HSNormal:
      return inv4pi * x.normal.dot(y.normal) / r;
    case KernelId::HSCurl:
      return inv4pi * curl_dot / r;
  }
  return 0.0;
}

}  // namespace

double integrate_pair(KernelId kernel, int hat_x, int hat_y, const Triangle &x, const Triangle &y,
                      const ShellSpec &shell, const QuadConfig &cfg)
{
  if (hat_x < -1 || hat_x > 2 || hat_y < -1 || hat_y > 2)
  {
    raise(ErrorCode::InvalidArgument, "integrate_pair: hat index must be -1..2");
  }
  if (kernel == KernelId::HSCurl && (hat_x < 0 || hat_y < 0))
  {
    raise(ErrorCode::InvalidArgument, "integrate_pair: curl kernel needs both hats");
  }
  if (classify_pair(x, y, shell) == PairClass::Outside)
  {
    return 0.0;
  }
  std::vector<double> bounds = {shell.lo(), shell.hi()};
  const double cell = shell.unbounded ? triangle_diameter(x) : cfg.cell_factor * shell.dt;
  const ShellMoments m = compute_interval_moments(x, y, bounds, cell, cfg)[0];

  auto sum = [&](const double (&arr)[3][3][3], int k) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a)
    {
      if (hat_y >= 0 && a != hat_y)
      {
        continue;
      }
      for (int b = 0; b < 3; ++b)
      {
        if (hat_x >= 0 && b != hat_x)
        {
          continue;
        }
        s += arr[k][a][b];
      }
    }
    return s;
  };
  const double inv4pi = 1.0 / (4.0 * kPi);
  switch (kernel)
  {
    case KernelId::SL:
      return inv4pi * sum(m.plain, 0);
    case KernelId::SL_R0:
      return inv4pi * sum(m.plain, 1);
    case KernelId::SL_R1:
      return inv4pi * sum(m.plain, 2);
    case KernelId::DLy:
      return inv4pi * sum(m.ny, 0);
    case KernelId::DLx:
      return inv4pi * sum(m.nx, 0);
    case KernelId::DLx_R2:
      return inv4pi * sum(m.nx, 1);
    case KernelId::DLx_R1:
      return inv4pi * sum(m.nx, 2);
    case KernelId::HSNormal:
      return inv4pi * x.normal.dot(y.normal) * sum(m.plain, 0);
    case KernelId::HSCurl:
      return inv4pi * hat_curl(y, hat_y).dot(hat_curl(x, hat_x)) * m.plain[0][hat_y][hat_x];
  }
  return 0.0;
}

double brute_force_pair(KernelId kernel, int hat_x, int hat_y, const Triangle &x,
                        const Triangle &y, const ShellSpec &shell, int m)
{
  if (m < 1)
  {
    raise(ErrorCode::InvalidArgument, "brute_force_pair: m must be >= 1");
  }
  if (classify_pair(x, y, shell) == PairClass::Outside)
  {
    return 0.0;
  }
  auto centroids = [m](const Triangle &t) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(m) * m);
    const Vec3 e1 = (t.v[1] - t.v[0]) / m, e2 = (t.v[2] - t.v[0]) / m;
    for (int i = 0; i < m; ++i)
    {
      for (int j = 0; i + j < m; ++j)
      {
        pts.push_back(t.v[0] + (i + 1.0 / 3.0) * e1 + (j + 1.0 / 3.0) * e2);
        if (i + j < m - 1)
        {
          pts.push_back(t.v[0] + (i + 2.0 / 3.0) * e1 + (j + 2.0 / 3.0) * e2);
        }
      }
    }
    return pts;
  };
  const auto px = centroids(x);
  const auto py = centroids(y);
  const double wx = x.area / (static_cast<double>(m) * m);
  const double wy = y.area / (static_cast<double>(m) * m);
  const double curl_dot =
      (kernel == KernelId::HSCurl) ? hat_curl(y, hat_y).dot(hat_curl(x, hat_x)) : 0.0;
  const double lo = shell.lo(), hi = shell.hi();
  double total = 0.0;
  for (const auto &a : px)
  {
    const double hx = hat_x >= 0 ? hat_value(x, hat_x, a) : 1.0;
    double row = 0.0;
    for (const auto &b : py)
    {
      const double r = (a - b).norm();
      if (r < 1e-12 || r < lo || r > hi)
      {
        continue;
      }
      const double hy = hat_y >= 0 ? hat_value(y, hat_y, b) : 1.0;
      row += hy * kernel_value(kernel, x, y, a, b, r, curl_dot);
    }
    total += hx * row;
  }
  return total * wx * wy;
}

}  // namespace tdfsi
