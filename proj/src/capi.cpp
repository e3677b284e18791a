// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/tdfsi.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "tdfsi/analysis.hpp"
#include "tdfsi/config.hpp"
#include "tdfsi/driver.hpp"
#include "tdfsi/error.hpp"
#include "tdfsi/parallel.hpp"

struct tdfsi_config
{
  tdfsi::RunConfig cfg;
};

struct tdfsi_result
{
  std::vector<tdfsi::RunReport> reports;
  std::vector<tdfsi::SummaryRow> summary;
};

namespace
{

thread_local std::string g_last_error;

tdfsi_status fail(tdfsi_status s, const std::string &msg)
{
  g_last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
tdfsi_status guarded(F &&f)
{
  try
  {
    f();
    g_last_error.clear();
    return TDFSI_OK;
  }
  catch (const tdfsi::Error &e)
  {
    return fail(static_cast<tdfsi_status>(e.code()), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return fail(TDFSI_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return fail(TDFSI_ERR_INTERNAL, e.what());
  }
  catch (...)
  {
    return fail(TDFSI_ERR_INTERNAL, "unknown exception");
  }
}

}  // namespace

extern "C" {

const char *tdfsi_version(void)
{
  return "0.1.0";
}

const char *tdfsi_status_name(tdfsi_status status)
{
  if (status == TDFSI_OK)
  {
    return "ok";
  }
  if (status < TDFSI_ERR_INVALID_ARGUMENT || status > TDFSI_ERR_INTERNAL)
  {
    return "unknown";
  }
  return tdfsi::error_code_name(static_cast<tdfsi::ErrorCode>(status));
}

const char *tdfsi_last_error(void)
{
  return g_last_error.c_str();
}

tdfsi_status tdfsi_config_create(tdfsi_config **out)
{
  if (!out)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_config_create: null output pointer");
  }
  return guarded([&] { *out = new tdfsi_config(); });
}

void tdfsi_config_destroy(tdfsi_config *cfg)
{
  delete cfg;
}

tdfsi_status tdfsi_config_set(tdfsi_config *cfg, const char *key, const char *value)
{
  if (!cfg || !key || !value)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_config_set: null argument");
  }
  return guarded([&] { tdfsi::set_config_value(cfg->cfg, key, value); });
}

tdfsi_status tdfsi_config_load_file(tdfsi_config *cfg, const char *path)
{
  if (!cfg || !path)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_config_load_file: null argument");
  }
  return guarded([&] { tdfsi::load_config_file(cfg->cfg, path); });
}

tdfsi_status tdfsi_config_validate(const tdfsi_config *cfg)
{
  if (!cfg)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_config_validate: null config");
  }
  return guarded([&] { cfg->cfg.validate(); });
}

tdfsi_status tdfsi_config_resolved(const tdfsi_config *cfg, char *buf, size_t cap,
                                   size_t *needed)
{
  if (!cfg)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_config_resolved: null config");
  }
  const std::string text = tdfsi::resolved_config_text(cfg->cfg);
  if (needed)
  {
    *needed = text.size() + 1;
  }
  if (buf)
  {
    if (cap < text.size() + 1)
    {
      return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_config_resolved: buffer too small");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
  }
  g_last_error.clear();
  return TDFSI_OK;
}

tdfsi_status tdfsi_run(const tdfsi_config *cfg, tdfsi_log_fn log, void *user,
                       tdfsi_result **out)
{
  if (!cfg || !out)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_run: null argument");
  }
  *out = nullptr;
  return guarded([&] {
    tdfsi::LogFn fn;
    if (log)
    {
      fn = [log, user](const std::string &m) { log(m.c_str(), user); };
    }
    auto res = new tdfsi_result();
    try
    {
      res->reports = tdfsi::run(cfg->cfg, fn);
      res->summary = tdfsi::summarize(res->reports);
    }
    catch (...)
    {
      delete res;
      throw;
    }
    *out = res;
  });
}

void tdfsi_result_destroy(tdfsi_result *res)
{
  delete res;
}

int tdfsi_result_num_levels(const tdfsi_result *res)
{
  return res ? static_cast<int>(res->reports.size()) : 0;
}

tdfsi_status tdfsi_result_level(const tdfsi_result *res, int index, tdfsi_level_summary *out)
{
  if (!res || !out)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_result_level: null argument");
  }
  if (index < 0 || index >= static_cast<int>(res->reports.size()))
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_result_level: index out of range");
  }
  const auto &r = res->reports[index];
  const auto &s = res->summary[index];
  out->n = r.n;
  out->num_steps = r.num_steps;
  out->h = r.h;
  out->dt = r.dt;
  out->st_err_u = r.st_err_u;
  out->st_err_phi = r.st_err_phi;
  out->rate_u = s.rate_u;
  out->rate_phi = s.rate_phi;
  out->seconds = r.seconds;
  g_last_error.clear();
  return TDFSI_OK;
}

tdfsi_status tdfsi_set_threads(int threads)
{
  if (threads < 1)
  {
    return fail(TDFSI_ERR_INVALID_ARGUMENT, "tdfsi_set_threads: need at least one thread");
  }
  return guarded([&] { tdfsi::set_max_threads(threads); });
}

int tdfsi_have_openmp(void)
{
  return tdfsi::have_openmp() ? 1 : 0;
}

}  // extern "C"
