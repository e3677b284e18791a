// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/error.hpp"

namespace tdfsi
{

const char *error_code_name(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::InvalidArgument:
      return "invalid argument";
    case ErrorCode::Geometry:
      return "geometry error";
    case ErrorCode::Topology:
      return "topology error";
    case ErrorCode::Assembly:
      return "assembly error";
    case ErrorCode::Accuracy:
      return "accuracy failure";
    case ErrorCode::Solver:
      return "solver error";
    case ErrorCode::State:
      return "state error";
    case ErrorCode::Io:
      return "i/o error";
    case ErrorCode::Domain:
      return "domain error";
    case ErrorCode::Internal:
      return "internal error";
  }
  return "unknown error";
}

void raise(ErrorCode code, const std::string &msg)
{
  throw Error(code, msg);
}

}  // namespace tdfsi
