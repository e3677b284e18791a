// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tdfsi/error.hpp"

namespace tdfsi
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value)
{
  raise(ErrorCode::InvalidArgument, "config: bad value '" + value + "' for key '" + key + "'");
}

int parse_int(const std::string &key, const std::string &v)
{
  int out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
  {
    bad_value(key, v);
  }
  return out;
}

double parse_double(const std::string &key, const std::string &v)
{
  // strtod rather than from_chars: libstdc++ 11 lacks the floating overloads on
  // some targets.
  char *end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
  {
    bad_value(key, v);
  }
  return out;
}

bool parse_bool(const std::string &key, const std::string &v)
{
  if (v == "1" || v == "true" || v == "yes" || v == "on")
  {
    return true;
  }
  if (v == "0" || v == "false" || v == "no" || v == "off")
  {
    return false;
  }
  bad_value(key, v);
}

std::vector<int> parse_levels(const std::string &key, const std::string &v)
{
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (!item.empty())
    {
      out.push_back(parse_int(key, item));
    }
  }
  return out;
}

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::validate() const
{
  auto need = [](bool ok, const char *msg) {
    if (!ok)
    {
      raise(ErrorCode::InvalidArgument, std::string("config: ") + msg);
    }
  };
  need(n >= 1, "n must be >= 1");
  for (int l : levels)
  {
    need(l >= 1, "levels must be >= 1");
  }
  need(levels.empty() || levels.size() >= 2, "a study needs at least two levels");
  need(dt_ratio > 0.0, "dt_ratio must be positive");
  need(T > 0.0, "T must be positive");
  need(lam > 0.0 && mu > 0.0, "lambda and mu must be positive");
  need(quad_order_near >= 1 && quad_order_far >= 1, "quadrature orders must be >= 1");
  need(subdiv_depth >= 0, "subdiv_depth must be >= 0");
  need(cell_factor > 0.0, "cell_factor must be positive");
  need(error_order >= 1, "error_order must be >= 1");
  need(threads >= 0, "threads must be >= 0");
  need(std::abs(kt_sign) == 1.0 && std::abs(w_curl_sign) == 1.0 &&
         std::abs(phi_row_u_sign) == 1.0,
       "sign settings must be +1 or -1");
}

void set_config_value(RunConfig &cfg, const std::string &key, const std::string &raw)
{
  const std::string v = trim(raw);
  if (key == "n")
    cfg.n = parse_int(key, v);
  else if (key == "levels")
    cfg.levels = parse_levels(key, v);
  else if (key == "dt_ratio")
    cfg.dt_ratio = parse_double(key, v);
  else if (key == "T")
    cfg.T = parse_double(key, v);
  else if (key == "lambda")
    cfg.lam = parse_double(key, v);
  else if (key == "mu")
    cfg.mu = parse_double(key, v);
  else if (key == "quad_order_near")
    cfg.quad_order_near = parse_int(key, v);
  else if (key == "quad_order_far")
    cfg.quad_order_far = parse_int(key, v);
  else if (key == "subdiv_depth")
    cfg.subdiv_depth = parse_int(key, v);
  else if (key == "cell_factor")
    cfg.cell_factor = parse_double(key, v);
  else if (key == "error_order")
    cfg.error_order = parse_int(key, v);
  else if (key == "cache_dir")
    cfg.cache_dir = v;
  else if (key == "out_dir")
    cfg.out_dir = v;
  else if (key == "vtk")
    cfg.vtk = parse_bool(key, v);
  else if (key == "snapshots")
    cfg.snapshots = parse_bool(key, v);
  else if (key == "dump_matrices")
    cfg.dump_matrices = parse_bool(key, v);
  else if (key == "zero_data")
    cfg.zero_data = parse_bool(key, v);
  else if (key == "threads")
    cfg.threads = parse_int(key, v);
  else if (key == "kt_sign")
    cfg.kt_sign = parse_double(key, v);
  else if (key == "w_curl_sign")
    cfg.w_curl_sign = parse_double(key, v);
  else if (key == "phi_row_u_sign")
    cfg.phi_row_u_sign = parse_double(key, v);
  else if (key == "use_symmetry")
    cfg.use_symmetry = parse_bool(key, v);
  else
    raise(ErrorCode::InvalidArgument, "config: unknown key '" + key + "'");
}

void load_config_file(RunConfig &cfg, const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    raise(ErrorCode::Io, "config: cannot open " + path);
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      raise(ErrorCode::InvalidArgument,
            "config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

std::string resolved_config_text(const RunConfig &cfg)
{
  std::ostringstream os;
  os << "n = " << cfg.n << '\n';
  os << "levels = ";
  for (std::size_t i = 0; i < cfg.levels.size(); ++i)
  {
    os << (i ? "," : "") << cfg.levels[i];
  }
  os << '\n';
  os << "dt_ratio = " << fmt(cfg.dt_ratio) << '\n';
  os << "T = " << fmt(cfg.T) << '\n';
  os << "lambda = " << fmt(cfg.lam) << '\n';
  os << "mu = " << fmt(cfg.mu) << '\n';
  os << "quad_order_near = " << cfg.quad_order_near << '\n';
  os << "quad_order_far = " << cfg.quad_order_far << '\n';
  os << "subdiv_depth = " << cfg.subdiv_depth << '\n';
  os << "cell_factor = " << fmt(cfg.cell_factor) << '\n';
  os << "error_order = " << cfg.error_order << '\n';
  os << "cache_dir = " << cfg.cache_dir << '\n';
  os << "out_dir = " << cfg.out_dir << '\n';
  os << "vtk = " << (cfg.vtk ? "true" : "false") << '\n';
  os << "snapshots = " << (cfg.snapshots ? "true" : "false") << '\n';
  os << "dump_matrices = " << (cfg.dump_matrices ? "true" : "false") << '\n';
  os << "zero_data = " << (cfg.zero_data ? "true" : "false") << '\n';
  os << "threads = " << cfg.threads << '\n';
  os << "kt_sign = " << fmt(cfg.kt_sign) << '\n';
  os << "w_curl_sign = " << fmt(cfg.w_curl_sign) << '\n';
  os << "phi_row_u_sign = " << fmt(cfg.phi_row_u_sign) << '\n';
  os << "use_symmetry = " << (cfg.use_symmetry ? "true" : "false") << '\n';
  return os.str();
}

int num_time_steps(double T, double dt)
{
  if (!(T > 0.0) || !(dt > 0.0))
  {
    raise(ErrorCode::InvalidArgument, "num_time_steps: T and dt must be positive");
  }
  const long long nt = std::llround(T / dt);
  if (nt < 1)
  {
    raise(ErrorCode::InvalidArgument, "num_time_steps: T / dt rounds to zero steps");
  }
  return static_cast<int>(nt);
}

}  // namespace tdfsi
