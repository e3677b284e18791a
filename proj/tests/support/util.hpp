// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_TEST_UTIL_HPP
#define TDFSI_TEST_UTIL_HPP

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <Eigen/Core>
#include <unistd.h>

namespace testutil
{

// Fresh empty directory below $TDFSI_TEST_TMP (or the system temp dir).
inline std::filesystem::path scratch_dir(const std::string &tag)
{
  static std::atomic<int> counter{0};
  const char *env = std::getenv("TDFSI_TEST_TMP");
  const std::filesystem::path base =
      env ? std::filesystem::path(env) : std::filesystem::temp_directory_path() / "tdfsi_tests";
  const auto dir = base / (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline double rel_fro(const Eigen::MatrixXd &a, const Eigen::MatrixXd &ref)
{
  return (a - ref).norm() / ref.norm();
}

}  // namespace testutil

#endif  // TDFSI_TEST_UTIL_HPP
