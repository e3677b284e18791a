// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdfsi/cache.hpp"
#include "tdfsi/error.hpp"
#include "tdfsi/fem.hpp"
#include "tdfsi/manufactured.hpp"
#include "tdfsi/mesh.hpp"
#include "tdfsi/parallel.hpp"
#include "tdfsi/tdbem.hpp"
#include "tdfsi/vtk.hpp"

namespace tdfsi
{

namespace fs = std::filesystem;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string make_dir(const fs::path &p)
{
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec)
  {
    raise(ErrorCode::Io, "cannot create directory " + p.string());
  }
  return p.string();
}

void write_snapshot(const std::string &path, int step, double t, const SolutionHistory &hist)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out)
  {
    raise(ErrorCode::Io, "cannot open " + path);
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", t);
  out << "# step " << step << " t " << buf << '\n';
  auto block = [&](const char *name, const Eigen::VectorXd &v) {
    out << name << ' ' << v.size() << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      out << buf << '\n';
    }
  };
  block("u", hist.u[step]);
  block("phi", hist.phi[step]);
  block("lam", hist.lam[step]);
  if (!out)
  {
    raise(ErrorCode::Io, "failed writing " + path);
  }
}

void write_step_vtk(const std::string &path, const VolumeMesh &mesh, const SurfaceMesh &surf,
                    const SolutionHistory &hist, int step, double t)
{
  const std::size_t nn = mesh.nodes.size();
  VtkField u{"u", 3, std::vector<double>(hist.u[step].data(), hist.u[step].data() + 3 * nn)};
  VtkField ue{"u_exact", 3, std::vector<double>(3 * nn)};
  VtkField phi{"phi", 1, std::vector<double>(nn, 0.0)};
  for (std::size_t i = 0; i < nn; ++i)
  {
    const Vec3 e = exact_u(mesh.nodes[i], t);
    for (int c = 0; c < 3; ++c)
    {
      ue.values[3 * i + c] = e[c];
    }
  }
  for (int s = 0; s < surf.num_nodes(); ++s)
  {
    phi.values[surf.boundary_node_map[s]] = hist.phi[step][s];
  }
  write_vtk(path, mesh, &surf, {u, ue, phi});
}

int corner_node(const VolumeMesh &mesh)
{
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
  {
    if ((mesh.nodes[i] - Vec3(-1.0, -1.0, -1.0)).norm() < 1e-12)
    {
      return static_cast<int>(i);
    }
  }
  raise(ErrorCode::Internal, "corner node (-1,-1,-1) not found");
}

}  // namespace

void write_config_echo(const std::string &dir, const RunConfig &cfg)
{
  make_dir(dir);
  const std::string path = (fs::path(dir) / "config.txt").string();
  std::ofstream out(path, std::ios::trunc);
  out << resolved_config_text(cfg);
  if (!out)
  {
    raise(ErrorCode::Io, "failed writing " + path);
  }
}

RunReport run_single(const RunConfig &cfg, int n, const LogFn &log, SolutionHistory *hist_out)
{
  cfg.validate();
  auto say = [&](const std::string &m) {
    if (log)
    {
      log(m);
    }
  };
  if (cfg.threads > 0)
  {
    set_max_threads(cfg.threads);
  }
  const auto t_start = Clock::now();

  MaterialParams mat{cfg.lam, cfg.mu};
  validate_material(mat);
  if (std::abs(mat.lam + 2.0 * mat.mu - 4.0) > 1e-12)
  {
    say("warning: lambda + 2 mu != 4, the manufactured displacement is not an exact solution");
  }

  const VolumeMesh mesh = build_cube_mesh(n);
  const SurfaceMesh surf = extract_boundary(mesh);
  RunReport rep;
  rep.n = n;
  rep.h = mesh_size(mesh);
  rep.dt = cfg.dt_ratio * rep.h;
  rep.num_steps = num_time_steps(cfg.T, rep.dt);
  const double dt = rep.dt;
  {
    std::ostringstream os;
    os << "n=" << n << ": " << mesh.nodes.size() << " nodes, " << mesh.tets.size() << " tets, "
       << surf.num_triangles() << " boundary triangles, h=" << rep.h << ", dt=" << dt
       << ", steps=" << rep.num_steps;
    say(os.str());
  }

  const CouplingBlocks blocks = assemble_coupling_blocks(mesh, surf, mat);

  BemOptions opt;
  opt.quad.order_near = cfg.quad_order_near;
  opt.quad.order_far = cfg.quad_order_far;
  opt.quad.subdiv_depth = cfg.subdiv_depth;
  opt.quad.cell_factor = cfg.cell_factor;
  opt.quad.validate();
  opt.kt_sign = cfg.kt_sign;
  opt.w_curl_sign = cfg.w_curl_sign;
  opt.use_symmetry = cfg.use_symmetry;

  const auto t_asm = Clock::now();
  CacheStats cstats;
  AssemblyStats astats;
  const RetardedMatrixSequence seq =
    cached_sequence(mesh, surf, dt, rep.num_steps, opt, cfg.cache_dir, &cstats, &astats, say);
  rep.assembly_seconds = seconds_since(t_asm);
  {
    std::ostringstream os;
    os << "n=" << n << ": " << seq.stored() << " lags ready in " << rep.assembly_seconds
       << " s (cache hits " << cstats.hits << ", misses " << cstats.misses << ")";
    say(os.str());
  }

  const BlockSystem sys(blocks, seq, dt);
  ManufacturedData data{mat, cfg.zero_data};
  const DataFn fn = [&](int step) { return rhs_vectors(step, dt, mesh, surf, data); };

  std::string level_dir, snap_dir, vtk_dir;
  if (!cfg.out_dir.empty())
  {
    level_dir = make_dir(fs::path(cfg.out_dir) / ("n" + std::to_string(n)));
    write_config_echo(level_dir, cfg);
    if (cfg.snapshots)
    {
      snap_dir = make_dir(fs::path(level_dir) / "snapshots");
      write_config_echo(snap_dir, cfg);
    }
    if (cfg.vtk)
    {
      vtk_dir = make_dir(fs::path(level_dir) / "vtk");
      write_config_echo(vtk_dir, cfg);
    }
    if (cfg.dump_matrices)
    {
      const std::string mdir = make_dir(fs::path(level_dir) / "matrices");
      write_config_echo(mdir, cfg);
      write_coo((fs::path(mdir) / "A.coo").string(), blocks.A);
      write_coo((fs::path(mdir) / "M.coo").string(), blocks.M);
      write_coo((fs::path(mdir) / "I.coo").string(), blocks.I_bnd);
      write_coo((fs::path(mdir) / "C.coo").string(), blocks.nxRI);
      for (Family f : {Family::V, Family::K, Family::KT, Family::W})
      {
        const std::string name = std::string(family_name(f)) + "_0000.coo";
        write_coo((fs::path(mdir) / name).string(),
                  SparseMatrix(seq.get(f, 0).sparseView()));
      }
    }
  }

  const int corner = corner_node(mesh);
  auto record = [&](int step, const SolutionHistory &hist) {
    const double t = step * dt;
    StepRow row;
    row.n = step;
    row.t = t;
    row.norm_u_h = l2_space_norm(hist.u[step], blocks.M);
    row.norm_phi_h = l2_space_norm(hist.phi[step], blocks.I_bnd);
    const VectorField ue = [t](const Vec3 &x) { return exact_u(x, t); };
    const ScalarField ve = [t](const Vec3 &x) { return exact_v(x, t); };
    const Eigen::VectorXd zu = Eigen::VectorXd::Zero(hist.u[step].size());
    const Eigen::VectorXd zp = Eigen::VectorXd::Zero(hist.phi[step].size());
    row.norm_u_exact = l2_volume_error(mesh, zu, ue, cfg.error_order);
    row.norm_phi_exact = l2_surface_error(mesh, surf, zp, ve, cfg.error_order);
    row.err_u = l2_volume_error(mesh, hist.u[step], ue, cfg.error_order);
    row.err_phi = l2_surface_error(mesh, surf, hist.phi[step], ve, cfg.error_order);
    rep.rows.push_back(row);
    rep.corner_u1.push_back(hist.u[step][vector_dof(corner, 0)]);
    if (!snap_dir.empty())
    {
      char name[32];
      std::snprintf(name, sizeof(name), "step_%05d.txt", step);
      write_snapshot((fs::path(snap_dir) / name).string(), step, t, hist);
    }
    if (!vtk_dir.empty())
    {
      char name[32];
      std::snprintf(name, sizeof(name), "step_%05d.vtk", step);
      write_step_vtk((fs::path(vtk_dir) / name).string(), mesh, surf, hist, step, t);
    }
  };

  MotOptions mopt;
  mopt.phi_row_u_sign = cfg.phi_row_u_sign;
  const int report_every = std::max(1, rep.num_steps / 10);
  SolutionHistory initial;
  initial.dt = dt;
  initial.u.push_back(Eigen::VectorXd::Zero(sys.num_u()));
  initial.phi.push_back(Eigen::VectorXd::Zero(sys.num_s()));
  initial.lam.push_back(Eigen::VectorXd::Zero(sys.num_s()));
  record(0, initial);

  SolutionHistory hist = mot_solve(sys, blocks, seq, fn, rep.num_steps, mopt,
                                   [&](int step, const SolutionHistory &h) {
                                     record(step, h);
                                     if (step % report_every == 0 || step == rep.num_steps)
                                     {
                                       say("n=" + std::to_string(n) + ": step " +
                                           std::to_string(step) + "/" +
                                           std::to_string(rep.num_steps));
                                     }
                                   });
  finalize_report(rep);
  rep.seconds = seconds_since(t_start);

  if (!level_dir.empty())
  {
    write_steps_csv((fs::path(level_dir) / "steps.csv").string(), rep);
    std::ofstream out(fs::path(level_dir) / "corner.csv", std::ios::trunc);
    out << "t,u1_h,u1_exact\n";
    char buf[128];
    for (int s = 0; s <= rep.num_steps; ++s)
    {
      const double t = s * dt;
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", t, rep.corner_u1[s],
                    exact_u(mesh.nodes[corner], t)[0]);
      out << buf;
    }
    if (!out)
    {
      raise(ErrorCode::Io, "failed writing corner.csv");
    }
  }
  {
    std::ostringstream os;
    os << "n=" << n << ": st_err_u=" << rep.st_err_u << " st_err_phi=" << rep.st_err_phi
       << " (" << rep.seconds << " s)";
    say(os.str());
  }
  if (hist_out)
  {
    *hist_out = std::move(hist);
  }
  return rep;
}

std::vector<RunReport> run_study(const RunConfig &cfg, const LogFn &log)
{
  cfg.validate();
  if (cfg.levels.size() < 2)
  {
    raise(ErrorCode::InvalidArgument, "run_study: need at least two levels");
  }
  std::vector<RunReport> reports;
  for (int n : cfg.levels)
  {
    reports.push_back(run_single(cfg, n, log));
  }
  const auto rows = summarize(reports);
  if (!cfg.out_dir.empty())
  {
    write_config_echo(cfg.out_dir, cfg);
    write_summary_csv((fs::path(cfg.out_dir) / "summary.csv").string(), rows);
  }
  bool positive = true;
  for (const auto &r : reports)
  {
    positive = positive && r.st_err_u > 0.0 && r.st_err_phi > 0.0;
  }
  if (log)
  {
    std::vector<double> hs, eu, ep;
    for (const auto &r : reports)
    {
      hs.push_back(r.h);
      eu.push_back(r.st_err_u);
      ep.push_back(r.st_err_phi);
    }
    std::ostringstream os;
    if (positive)
    {
      os << "fitted rates: u " << convergence_rate(eu, hs) << ", phi "
         << convergence_rate(ep, hs);
    }
    else
    {
      os << "fitted rates: undefined (zero error)";
    }
    log(os.str());
  }
  return reports;
}

std::vector<RunReport> run(const RunConfig &cfg, const LogFn &log)
{
  if (!cfg.levels.empty())
  {
    return run_study(cfg, log);
  }
  std::vector<RunReport> reports{run_single(cfg, cfg.n, log)};
  if (!cfg.out_dir.empty())
  {
    write_config_echo(cfg.out_dir, cfg);
    write_summary_csv((fs::path(cfg.out_dir) / "summary.csv").string(), summarize(reports));
  }
  return reports;
}

}  // namespace tdfsi
