// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_DRIVER_HPP
#define TDFSI_DRIVER_HPP

#include <functional>
#include <string>
#include <vector>

#include "tdfsi/analysis.hpp"
#include "tdfsi/config.hpp"
#include "tdfsi/mot.hpp"

namespace tdfsi
{

using LogFn = std::function<void(const std::string &)>;

// Mesh, assembly, time stepping and error report for mesh level n. Writes
// the per-level outputs when cfg.out_dir is set. hist_out, if given,
// receives the full solution history.
RunReport run_single(const RunConfig &cfg, int n, const LogFn &log = {},
                     SolutionHistory *hist_out = nullptr);

// run_single for every entry of cfg.levels followed by summary.csv.
std::vector<RunReport> run_study(const RunConfig &cfg, const LogFn &log = {});

// Study if cfg.levels is set, otherwise a single run at cfg.n; either way
// out_dir receives config.txt and summary.csv.
std::vector<RunReport> run(const RunConfig &cfg, const LogFn &log = {});

// Writes config.txt with the resolved settings into dir (created if needed).
void write_config_echo(const std::string &dir, const RunConfig &cfg);

}  // namespace tdfsi

#endif  // TDFSI_DRIVER_HPP
