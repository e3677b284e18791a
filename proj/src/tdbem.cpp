// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/tdbem.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>
#include <unordered_map>

#include "tdfsi/error.hpp"
#include "tdfsi/pair_classes.hpp"

namespace tdfsi
{

namespace
{

constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);

// Coefficients of the lag-k radial weight on shell k - j (j = 0, 1, 2):
// Y = c0 + c1 r + c2 r^2.
struct YCoef
{
  double c0, c1, c2;
};

YCoef y_coef(int k, int j, double dt)
{
  switch (j)
  {
    case 0:
      return {0.5 * (k + 1.0) * (k + 1.0) * dt, -(k + 1.0), 0.5 / dt};
    case 1:
      return {0.5 * (2.0 - (k - 1.0) * (k - 1.0) - double(k) * k) * dt, 2.0 * k - 1.0, -1.0 / dt};
    default:
      return {0.5 * (k - 2.0) * (k - 2.0) * dt, -(k - 2.0), 0.5 / dt};
  }
}

// Coefficient of 1/r (or 1/r^2 for the adjoint family) on shell k - j.
double lag_r_coef(int k, int j)
{
  switch (j)
  {
    case 0:
      return -(k + 1.0);
    case 1:
      return 2.0 * k - 1.0;
    default:
      return -(k - 2.0);
  }
}

// [1, -2, 1] pattern.
double lag_dt_coef(int j)
{
  return j == 1 ? -2.0 : 1.0;
}

struct PairRecord
{
  int tx, ty;
  int l_lo, l_hi;
  int cls;
  std::array<int, 3> perm_x, perm_y;
  bool swapped;
};

}  // namespace

const char *family_name(Family f)
{
  switch (f)
  {
    case Family::V:
      return "V";
    case Family::K:
      return "K";
    case Family::KT:
      return "KT";
    case Family::W:
      return "W";
  }
  return "?";
}

std::uint64_t BemOptions::hash() const
{
  std::uint64_t h = quad.hash();
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(kt_sign);
  mix(w_curl_sign);
  // use_symmetry changes results only at quadrature-error level, but keep
  // cache entries apart anyway.
  mix(use_symmetry ? 1.0 : 0.0);
  return h;
}

double eval_Y(double r, int k, double dt)
{
  if (r < 0.0 || k < 0)
  {
    return 0.0;
  }
  // Y vanishes at both ends of its support; return exact zeros there rather
  // than the round-off of the monomial form.
  const double lo = (k - 2) * dt;
  const double hi = (k + 1) * dt;
  if ((k >= 2 && r <= lo) || r >= hi)
  {
    return 0.0;
  }
  int j;
  if (r >= k * dt)
  {
    j = 0;
  }
  else if (r >= (k - 1) * dt)
  {
    j = 1;
  }
  else
  {
    j = 2;
  }
  const YCoef c = y_coef(k, j, dt);
  return c.c0 + r * (c.c1 + r * c.c2);
}

int causal_lag_count(double diameter, double dt)
{
  if (!(dt > 0.0) || !(diameter > 0.0))
  {
    raise(ErrorCode::InvalidArgument, "causal_lag_count: positive arguments required");
  }
  return static_cast<int>(std::ceil(diameter / dt)) + 2;
}

const DenseMatrix &RetardedMatrixSequence::get(Family f, int k) const
{
  const auto &fam = family(f);
  if (k >= 0 && k < static_cast<int>(fam.size()))
  {
    return fam[k];
  }
  if (zero_.rows() != num_nodes)
  {
    zero_ = DenseMatrix::Zero(num_nodes, num_nodes);
  }
  return zero_;
}

std::vector<DenseMatrix> &RetardedMatrixSequence::family(Family f)
{
  switch (f)
  {
    case Family::V:
      return V;
    case Family::K:
      return K;
    case Family::KT:
      return KT;
    default:
      return W;
  }
}

const std::vector<DenseMatrix> &RetardedMatrixSequence::family(Family f) const
{
  return const_cast<RetardedMatrixSequence *>(this)->family(f);
}

std::vector<std::array<DenseMatrix, 4>> assemble_lags(const VolumeMesh &mesh,
                                                      const SurfaceMesh &surf, double dt,
                                                      int k_begin, int k_end,
                                                      const BemOptions &opt, AssemblyStats *stats,
                                                      const ProgressFn &progress)
{
  opt.quad.validate();
  if (!(dt > 0.0) || k_begin < 0 || k_end < k_begin)
  {
    raise(ErrorCode::InvalidArgument, "assemble_lags: invalid lag window or dt");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const int ns = surf.num_nodes();
  const int nt = surf.num_triangles();
  std::vector<std::array<DenseMatrix, 4>> out(k_end - k_begin);
  for (auto &arr : out)
  {
    for (auto &m : arr)
    {
      m = DenseMatrix::Zero(ns, ns);
    }
  }
  if (k_end == k_begin)
  {
    return out;
  }
  const int l_need_lo = std::max(0, k_begin - 2);
  const int l_need_hi = k_end - 1;

  std::vector<Triangle> tris;
  tris.reserve(nt);
  for (int t = 0; t < nt; ++t)
  {
    tris.push_back(surface_triangle(mesh, surf, t));
  }
  const double quantum = 1e-9 * std::max(mesh.h, 1e-300);

  // Enumerate pairs and group them into congruence classes.
  std::vector<PairRecord> pairs;
  std::unordered_map<PairKey, int, PairKeyHash> class_of;
  std::vector<std::pair<Triangle, Triangle>> reps;
  std::vector<std::array<int, 2>> rep_range;
  for (int tx = 0; tx < nt; ++tx)
  {
    for (int ty = 0; ty < nt; ++ty)
    {
      auto range = shell_range(tris[tx], tris[ty], dt);
      const int lo = std::max(range[0], l_need_lo);
      const int hi = std::min(range[1], l_need_hi);
      if (hi < lo)
      {
        continue;
      }
      PairRecord rec{tx, ty, lo, hi, -1, {0, 1, 2}, {0, 1, 2}, false};
      if (opt.use_symmetry)
      {
        CanonicalPair c = canonicalize_pair(tris[tx], tris[ty], quantum);
        auto it = class_of.find(c.key);
        if (it == class_of.end())
        {
          it = class_of.emplace(c.key, static_cast<int>(reps.size())).first;
          reps.emplace_back(c.rep_x, c.rep_y);
          rep_range.push_back({lo, hi});
        }
        rec.cls = it->second;
        rec.perm_x = c.perm_x;
        rec.perm_y = c.perm_y;
        rec.swapped = c.swapped;
      }
      else
      {
        rec.cls = static_cast<int>(reps.size());
        reps.emplace_back(tris[tx], tris[ty]);
        rep_range.push_back({lo, hi});
      }
      pairs.push_back(rec);
    }
  }
  if (progress)
  {
    progress("pairs=" + std::to_string(pairs.size()) + " classes=" + std::to_string(reps.size()));
  }

  // Moments per class.
  const long long ncls = static_cast<long long>(reps.size());
  std::vector<std::vector<ShellMoments>> moments(reps.size());
  std::vector<std::string> failures(reps.size());
  long long done = 0;
#ifdef TDFSI_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (long long c = 0; c < ncls; ++c)
  {
    try
    {
      std::vector<double> bounds;
      for (int l = rep_range[c][0]; l <= rep_range[c][1] + 1; ++l)
      {
        bounds.push_back(l * dt);
      }
      moments[c] = compute_interval_moments(reps[c].first, reps[c].second, bounds,
                                            opt.quad.cell_factor * dt, opt.quad);
    }
    catch (const std::exception &e)
    {
      failures[c] = e.what();
    }
    if (progress)
    {
#ifdef TDFSI_HAVE_OPENMP
#pragma omp critical(tdfsi_progress)
#endif
      {
        ++done;
        if (done % 2000 == 0)
        {
          progress("classes " + std::to_string(done) + "/" + std::to_string(ncls));
        }
      }
    }
  }
  for (long long c = 0; c < ncls; ++c)
  {
    if (!failures[c].empty())
    {
      raise(ErrorCode::Accuracy, "retarded assembly failed for triangle pair class " +
                                     std::to_string(c) + ": " + failures[c]);
    }
  }

  // Deterministic serial scatter.
  for (const PairRecord &p : pairs)
  {
    const Triangle &X = tris[p.tx];
    const Triangle &Y = tris[p.ty];
    const auto sx = surf.surface_triangle(p.tx);
    const auto sy = surf.surface_triangle(p.ty);
    const double nxny = X.normal.dot(Y.normal);
    double curl[3][3];
    for (int a = 0; a < 3; ++a)
    {
      const Vec3 cy = hat_curl(Y, a);
      for (int b = 0; b < 3; ++b)
      {
        curl[a][b] = cy.dot(hat_curl(X, b));
      }
    }
    const auto &cm = moments[p.cls];
    CanonicalPair cp;
    cp.perm_x = p.perm_x;
    cp.perm_y = p.perm_y;
    cp.swapped = p.swapped;
    for (int l = p.l_lo; l <= p.l_hi; ++l)
    {
      const ShellMoments M = map_moments(cm[l - p.l_lo], cp);
      double H[3] = {0.0, 0.0, 0.0};
      for (int q = 0; q < 3; ++q)
      {
        for (int a = 0; a < 3; ++a)
        {
          for (int b = 0; b < 3; ++b)
          {
            H[q] += M.plain[q][a][b];
          }
        }
      }
      for (int j = 0; j < 3; ++j)
      {
        const int k = l + j;
        if (k < k_begin || k >= k_end)
        {
          continue;
        }
        auto &mats = out[k - k_begin];
        const double cr = lag_r_coef(k, j);
        const double cd = lag_dt_coef(j) / dt;
        const YCoef y = y_coef(k, j, dt);
        // Shell terms of the adjoint family: -c_r / r^2 and -c_d / r.
        for (int a = 0; a < 3; ++a)
        {
          const int col = sy[a];
          for (int b = 0; b < 3; ++b)
          {
            const int row = sx[b];
            const double v = cr * M.plain[0][a][b] + cd * M.plain[1][a][b];
            const double kk = cr * M.ny[0][a][b];
            const double kt = y.c0 * M.nx[0][a][b] + y.c1 * M.nx[1][a][b] + y.c2 * M.nx[2][a][b] -
                              cr * M.nx[1][a][b] - cd * M.nx[2][a][b];
            const double w = -cd * nxny * M.plain[0][a][b] +
                             opt.w_curl_sign * curl[a][b] * (y.c0 * H[0] + y.c1 * H[1] + y.c2 * H[2]);
            mats[0](row, col) += kInv4Pi * v;
            mats[1](row, col) += kInv4Pi * kk;
            mats[2](row, col) += opt.kt_sign * kInv4Pi * kt;
            mats[3](row, col) += kInv4Pi * w;
          }
        }
      }
    }
  }

  if (stats)
  {
    stats->pairs = static_cast<long long>(pairs.size());
    stats->classes = ncls;
    stats->seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return out;
}

namespace
{

DenseMatrix single_lag(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                       const BemOptions &opt, Family f)
{
  if (k < 0)
  {
    return DenseMatrix::Zero(surf.num_nodes(), surf.num_nodes());
  }
  auto lags = assemble_lags(mesh, surf, dt, k, k + 1, opt);
  return std::move(lags[0][static_cast<int>(f)]);
}

}  // namespace

DenseMatrix assemble_V(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                       const BemOptions &opt)
{
  return single_lag(mesh, surf, dt, k, opt, Family::V);
}

DenseMatrix assemble_K(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                       const BemOptions &opt)
{
  return single_lag(mesh, surf, dt, k, opt, Family::K);
}

DenseMatrix assemble_KT(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                        const BemOptions &opt)
{
  return single_lag(mesh, surf, dt, k, opt, Family::KT);
}

DenseMatrix assemble_W(const VolumeMesh &mesh, const SurfaceMesh &surf, double dt, int k,
                       const BemOptions &opt)
{
  return single_lag(mesh, surf, dt, k, opt, Family::W);
}

RetardedMatrixSequence assemble_sequence(const VolumeMesh &mesh, const SurfaceMesh &surf,
                                         double dt, int num_steps, const BemOptions &opt,
                                         AssemblyStats *stats, const ProgressFn &progress)
{
  if (num_steps < 1)
  {
    raise(ErrorCode::InvalidArgument, "assemble_sequence: need at least one time step");
  }
  RetardedMatrixSequence seq;
  seq.dt = dt;
  seq.count = num_steps;
  seq.num_nodes = surf.num_nodes();
  const int nlag = std::min(num_steps, causal_lag_count(surface_diameter(mesh, surf), dt));
  auto lags = assemble_lags(mesh, surf, dt, 0, nlag, opt, stats, progress);
  for (auto &arr : lags)
  {
    seq.V.push_back(std::move(arr[0]));
    seq.K.push_back(std::move(arr[1]));
    seq.KT.push_back(std::move(arr[2]));
    seq.W.push_back(std::move(arr[3]));
  }
  return seq;
}

}  // namespace tdfsi
