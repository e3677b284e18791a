// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_ERROR_HPP
#define TDFSI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tdfsi
{

// Mirrors tdfsi_status in the C header; keep the numbering in sync.
enum class ErrorCode
{
  InvalidArgument = 1,
  Geometry = 2,
  Topology = 3,
  Assembly = 4,
  Accuracy = 5,
  Solver = 6,
  State = 7,
  Io = 8,
  Domain = 9,
  Internal = 10
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

const char *error_code_name(ErrorCode code);

[[noreturn]] void raise(ErrorCode code, const std::string &msg);

}  // namespace tdfsi

#endif  // TDFSI_ERROR_HPP
