// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the solver only through the C API.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tdfsi/tdfsi.h"

namespace
{

void print_log(const char *msg, void *)
{
  std::fprintf(stderr, "[tdfsi] %s\n", msg);
}

int report_failure(tdfsi_status s, const char *what)
{
  std::fprintf(stderr, "tdfsi: %s failed (%s): %s\n", what, tdfsi_status_name(s),
               tdfsi_last_error());
  return 1;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Space-time Galerkin FEM-BEM solver for transient fluid-structure interaction"};
  app.set_version_flag("--version", std::string(tdfsi_version()));

  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags override it")
    ->check(CLI::ExistingFile);

  // Options are forwarded verbatim; the library parses and validates them.
  struct Forward
  {
    const char *flag;
    const char *key;
    const char *help;
    std::string value;
  };
  std::vector<Forward> fwd = {
    {"--n", "n", "mesh subdivisions per cube edge", {}},
    {"--levels", "levels", "comma-separated mesh levels for a convergence study", {}},
    {"--dt-ratio", "dt_ratio", "time step over mesh size", {}},
    {"--T", "T", "final time", {}},
    {"--lambda", "lambda", "first Lame constant", {}},
    {"--mu", "mu", "shear modulus", {}},
    {"--quad-order-near", "quad_order_near", "Gauss order for near triangle pairs", {}},
    {"--quad-order-far", "quad_order_far", "Gauss order for well-separated pairs", {}},
    {"--subdiv-depth", "subdiv_depth", "grading levels toward shared vertices and edges", {}},
    {"--cell-factor", "cell_factor", "outer cell size as a multiple of dt", {}},
    {"--error-order", "error_order", "Gauss order of the error integrals", {}},
    {"--cache-dir", "cache_dir", "matrix cache directory (overrides TDFSI_CACHE_DIR)", {}},
    {"--out-dir", "out_dir", "output directory", {}},
    {"--threads", "threads", "cap on worker threads", {}},
  };
  for (auto &f : fwd)
  {
    app.add_option(f.flag, f.value, f.help);
  }
  bool vtk = false, zero_data = false, snapshots = false, dump = false, quiet = false;
  app.add_flag("--vtk", vtk, "write VTK files for every step");
  app.add_flag("--snapshots", snapshots, "write solution vectors for every step");
  app.add_flag("--dump-matrices", dump, "write FEM blocks and lag-0 BEM matrices as COO text");
  app.add_flag("--zero-data", zero_data, "debug: switch off the incident data");
  app.add_flag("-q,--quiet", quiet, "no progress output");

  CLI11_PARSE(app, argc, argv);

  tdfsi_config *cfg = nullptr;
  tdfsi_status s = tdfsi_config_create(&cfg);
  if (s != TDFSI_OK)
  {
    return report_failure(s, "config_create");
  }
  // Precedence: config file < TDFSI_CACHE_DIR < flags.
  auto fail = [&](tdfsi_status st, const char *what) {
    const int rc = report_failure(st, what);
    tdfsi_config_destroy(cfg);
    return rc;
  };
  if (!config_path.empty() && (s = tdfsi_config_load_file(cfg, config_path.c_str())) != TDFSI_OK)
  {
    return fail(s, "loading the config file");
  }
  if (const char *env = std::getenv("TDFSI_CACHE_DIR"); env && *env)
  {
    if ((s = tdfsi_config_set(cfg, "cache_dir", env)) != TDFSI_OK)
    {
      return fail(s, "TDFSI_CACHE_DIR");
    }
  }
  for (const auto &f : fwd)
  {
    if (app.count(f.flag) > 0 && (s = tdfsi_config_set(cfg, f.key, f.value.c_str())) != TDFSI_OK)
    {
      return fail(s, f.flag);
    }
  }
  const std::pair<bool, const char *> flags[] = {
    {vtk, "vtk"}, {snapshots, "snapshots"}, {dump, "dump_matrices"}, {zero_data, "zero_data"}};
  for (const auto &[on, key] : flags)
  {
    if (on && (s = tdfsi_config_set(cfg, key, "true")) != TDFSI_OK)
    {
      return fail(s, key);
    }
  }
  if ((s = tdfsi_config_validate(cfg)) != TDFSI_OK)
  {
    return fail(s, "config validation");
  }

  tdfsi_result *res = nullptr;
  s = tdfsi_run(cfg, quiet ? nullptr : print_log, nullptr, &res);
  if (s != TDFSI_OK)
  {
    return fail(s, "run");
  }
  std::printf("n,h,dt,steps,st_err_u,st_err_phi,rate_u,rate_phi,seconds\n");
  for (int i = 0; i < tdfsi_result_num_levels(res); ++i)
  {
    tdfsi_level_summary l;
    if ((s = tdfsi_result_level(res, i, &l)) != TDFSI_OK)
    {
      tdfsi_result_destroy(res);
      return fail(s, "result_level");
    }
    std::printf("%d,%.6g,%.6g,%d,%.6e,%.6e,%.4f,%.4f,%.1f\n", l.n, l.h, l.dt, l.num_steps,
                l.st_err_u, l.st_err_phi, l.rate_u, l.rate_phi, l.seconds);
  }
  tdfsi_result_destroy(res);
  tdfsi_config_destroy(cfg);
  return 0;
}
