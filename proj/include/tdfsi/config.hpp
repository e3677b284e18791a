// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_CONFIG_HPP
#define TDFSI_CONFIG_HPP

#include <string>
#include <vector>

namespace tdfsi
{

struct RunConfig
{
  int n = 2;
  std::vector<int> levels;  // non-empty selects a convergence study
  double dt_ratio = 0.1414;
  double T = 4.0;
  double lam = 2.0;
  double mu = 1.0;
  int quad_order_near = 6;
  int quad_order_far = 3;
  int subdiv_depth = 6;
  double cell_factor = 1.0;
  int error_order = 4;
  std::string cache_dir;
  std::string out_dir;
  bool vtk = false;
  bool snapshots = false;
  bool dump_matrices = false;
  bool zero_data = false;
  int threads = 0;  // 0: library default
  double kt_sign = -1.0;
  double w_curl_sign = -1.0;
  double phi_row_u_sign = -1.0;
  bool use_symmetry = true;

  void validate() const;
};

// Sets one key from its textual value; unknown keys and malformed values throw.
void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value);

// "key = value" lines; '#' starts a comment. Keys use underscores.
void load_config_file(RunConfig &cfg, const std::string &path);

// Every key with its effective value, in a form load_config_file accepts.
std::string resolved_config_text(const RunConfig &cfg);

// Steps covering [0, T] at dt = dt_ratio * h.
int num_time_steps(double T, double dt);

}  // namespace tdfsi

#endif  // TDFSI_CONFIG_HPP
