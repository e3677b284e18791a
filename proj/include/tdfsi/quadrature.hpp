// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_QUADRATURE_HPP
#define TDFSI_QUADRATURE_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "tdfsi/mesh.hpp"

namespace tdfsi
{

struct Triangle
{
  std::array<Vec3, 3> v;
  Vec3 normal = Vec3::Zero();
  double area = 0.0;
};

// normal must be a unit vector orthogonal to the triangle plane.
Triangle make_triangle(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &normal);
// Normal taken from the vertex orientation.
Triangle make_triangle(const Vec3 &a, const Vec3 &b, const Vec3 &c);
Triangle surface_triangle(const VolumeMesh &mesh, const SurfaceMesh &surf, int t);

double triangle_diameter(const Triangle &t);
// Exact minimum distance between two triangles.
double triangle_distance(const Triangle &x, const Triangle &y);
// Maximum distance (attained at a vertex pair).
double triangle_max_distance(const Triangle &x, const Triangle &y);
double point_triangle_distance(const Vec3 &p, const Triangle &t);

// Light-cone shell l: l dt <= |x-y| <= (l+1) dt.
struct ShellSpec
{
  int l = 0;
  double dt = 1.0;
  bool unbounded = false;

  double lo() const { return unbounded ? 0.0 : l * dt; }
  double hi() const { return unbounded ? std::numeric_limits<double>::infinity() : (l + 1) * dt; }
  static ShellSpec all() { return ShellSpec{0, 1.0, true}; }
};

enum class PairClass
{
  Inside,
  Outside,
  Cut
};

PairClass classify_pair(const Triangle &x, const Triangle &y, const ShellSpec &shell);

struct QuadConfig
{
  int order_near = 6;     // outer/radial Gauss order for pairs closer than their diameter
  int order_far = 3;      // same for separated pairs
  int subdiv_depth = 6;   // extra grading levels toward shared vertices/edges
  double cell_factor = 1.0;  // outer cells are refined to diameter <= cell_factor * dt

  void validate() const;
  std::uint64_t hash() const;
};

// Shell moments of one ordered triangle pair (X = test/outer, Y = ansatz/inner).
// Index [q][a][b]: a = hat of Y at vertex a, b = hat of X at vertex b.
//   plain: r^q            for q = -1, 0, 1
//   ny   : n_y.(x-y) r^q  for q = -3, -2, -1
//   nx   : n_x.(x-y) r^q  for q = -3, -2, -1
struct ShellMoments
{
  double plain[3][3][3];
  double ny[3][3][3];
  double nx[3][3][3];

  void set_zero();
  ShellMoments &operator+=(const ShellMoments &o);
};

struct PairMoments
{
  int first_shell = 0;
  std::vector<ShellMoments> shells;
};

// Shell index range [lo, hi] possibly intersected by the pair; lo > hi if none.
std::array<int, 2> shell_range(const Triangle &x, const Triangle &y, double dt);

// Moments for every shell the pair can reach.
PairMoments compute_pair_moments(const Triangle &x, const Triangle &y, double dt,
                                 const QuadConfig &cfg);
// Moments over the radial intervals [bounds[i], bounds[i+1]] (ascending; the last
// bound may be +inf).
std::vector<ShellMoments> compute_interval_moments(const Triangle &x, const Triangle &y,
                                                   const std::vector<double> &bounds,
                                                   double cell_size, const QuadConfig &cfg);

enum class KernelId
{
  SL,        // 1 / (4 pi r)
  SL_R0,     // 1 / (4 pi)
  SL_R1,     // r / (4 pi)
  DLy,       // n_y.(x-y) / (4 pi r^3)
  DLx,       // n_x.(x-y) / (4 pi r^3)
  DLx_R2,    // n_x.(x-y) / (4 pi r^2)
  DLx_R1,    // n_x.(x-y) / (4 pi r)
  HSNormal,  // n_x.n_y / (4 pi r)
  HSCurl     // curl xi_a(y) . curl xi_b(x) / (4 pi r), needs both hats
};

// Hat index -1 means the constant function 1.
double integrate_pair(KernelId kernel, int hat_x, int hat_y, const Triangle &x, const Triangle &y,
                      const ShellSpec &shell, const QuadConfig &cfg);

// Uniform sampling at the centroids of m^2 congruent sub-triangles on each side;
// points closer than 1e-12 are skipped.
double brute_force_pair(KernelId kernel, int hat_x, int hat_y, const Triangle &x,
                        const Triangle &y, const ShellSpec &shell, int m);

// Surface gradient of the hat at vertex a (constant on the triangle).
Vec3 hat_gradient(const Triangle &t, int a);
// curl_G xi_a = n x grad xi_a.
Vec3 hat_curl(const Triangle &t, int a);
double hat_value(const Triangle &t, int a, const Vec3 &p);

}  // namespace tdfsi

#endif  // TDFSI_QUADRATURE_HPP
