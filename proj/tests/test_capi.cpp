// Exercises the shared library through its C interface only.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "tdfsi/tdfsi.h"

namespace
{

struct Config
{
  tdfsi_config *p = nullptr;
  Config() { REQUIRE(tdfsi_config_create(&p) == TDFSI_OK); }
  ~Config() { tdfsi_config_destroy(p); }
};

void count_lines(const char *, void *user)
{
  ++*static_cast<int *>(user);
}

}  // namespace

TEST_SUITE("capi")
{
  TEST_CASE("version and status names")
  {
    CHECK(std::string(tdfsi_version()) == "0.1.0");
    CHECK(std::string(tdfsi_status_name(TDFSI_OK)) == "ok");
    CHECK(std::string(tdfsi_status_name(TDFSI_ERR_IO)).size() > 0);
    CHECK(std::string(tdfsi_status_name(static_cast<tdfsi_status>(99))) == "unknown");
    CHECK(tdfsi_have_openmp() >= 0);
  }

  TEST_CASE("setting and validating")
  {
    Config c;
    CHECK(tdfsi_config_set(c.p, "n", "3") == TDFSI_OK);
    CHECK(std::string(tdfsi_last_error()).empty());
    CHECK(tdfsi_config_set(c.p, "nope", "3") == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(std::string(tdfsi_last_error()).find("nope") != std::string::npos);
    CHECK(tdfsi_config_set(c.p, "T", "abc") == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_config_validate(c.p) == TDFSI_OK);
    CHECK(tdfsi_config_set(c.p, "mu", "-1") == TDFSI_OK);
    CHECK(tdfsi_config_validate(c.p) == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_config_load_file(c.p, "/nonexistent/tdfsi.cfg") == TDFSI_ERR_IO);
  }

  TEST_CASE("resolved text buffer sizing")
  {
    Config c;
    size_t need = 0;
    REQUIRE(tdfsi_config_resolved(c.p, nullptr, 0, &need) == TDFSI_OK);
    CHECK(need > 10);
    std::vector<char> small(need - 1);
    CHECK(tdfsi_config_resolved(c.p, small.data(), small.size(), nullptr) ==
          TDFSI_ERR_INVALID_ARGUMENT);
    std::vector<char> buf(need);
    REQUIRE(tdfsi_config_resolved(c.p, buf.data(), buf.size(), nullptr) == TDFSI_OK);
    CHECK(std::strlen(buf.data()) + 1 == need);
    CHECK(std::string(buf.data()).rfind("n = 2\n", 0) == 0);
  }

  TEST_CASE("null pointers are rejected")
  {
    CHECK(tdfsi_config_create(nullptr) == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_config_set(nullptr, "n", "1") == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_config_validate(nullptr) == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_config_resolved(nullptr, nullptr, 0, nullptr) == TDFSI_ERR_INVALID_ARGUMENT);
    tdfsi_result *res = nullptr;
    CHECK(tdfsi_run(nullptr, nullptr, nullptr, &res) == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_result_level(nullptr, 0, nullptr) == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_result_num_levels(nullptr) == 0);
    tdfsi_config_destroy(nullptr);
    tdfsi_result_destroy(nullptr);
  }

  TEST_CASE("thread cap")
  {
    CHECK(tdfsi_set_threads(0) == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(tdfsi_set_threads(1) == TDFSI_OK);
  }

  TEST_CASE("a small run returns a level summary")
  {
    Config c;
    REQUIRE(tdfsi_config_set(c.p, "n", "1") == TDFSI_OK);
    REQUIRE(tdfsi_config_set(c.p, "T", "0.5") == TDFSI_OK);
    int lines = 0;
    tdfsi_result *res = nullptr;
    REQUIRE(tdfsi_run(c.p, count_lines, &lines, &res) == TDFSI_OK);
    CHECK(lines > 0);
    REQUIRE(tdfsi_result_num_levels(res) == 1);
    tdfsi_level_summary s{};
    REQUIRE(tdfsi_result_level(res, 0, &s) == TDFSI_OK);
    CHECK(s.n == 1);
    CHECK(s.h == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(s.dt == doctest::Approx(0.1414 * 2.0 * std::sqrt(2.0)));
    CHECK(s.num_steps == 1);
    CHECK(std::isfinite(s.st_err_u));
    CHECK(std::isnan(s.rate_u));
    CHECK(tdfsi_result_level(res, 1, &s) == TDFSI_ERR_INVALID_ARGUMENT);
    tdfsi_result_destroy(res);
  }

  TEST_CASE("failed runs report a status and leave no result")
  {
    Config c;
    REQUIRE(tdfsi_config_set(c.p, "levels", "3") == TDFSI_OK);
    tdfsi_result *res = reinterpret_cast<tdfsi_result *>(0x1);
    CHECK(tdfsi_run(c.p, nullptr, nullptr, &res) == TDFSI_ERR_INVALID_ARGUMENT);
    CHECK(res == nullptr);
    CHECK(std::string(tdfsi_last_error()).size() > 0);
  }
}
