#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "tdfsi/driver.hpp"
#include "tdfsi/error.hpp"
#include "tdfsi/manufactured.hpp"
#include "support/util.hpp"

using namespace tdfsi;
namespace fs = std::filesystem;

TEST_SUITE("driver")
{
  TEST_CASE("zero data: errors equal the exact norms")
  {
    RunConfig c;
    c.zero_data = true;
    c.T = 1.5;
    const RunReport r = run_single(c, 1);
    CHECK(r.num_steps == 4);
    REQUIRE(r.rows.size() == 5);
    for (const auto &row : r.rows)
    {
      CHECK(row.norm_u_h == 0.0);
      CHECK(row.norm_phi_h == 0.0);
      CHECK(row.err_u == row.norm_u_exact);
      CHECK(row.err_phi == row.norm_phi_exact);
    }
    CHECK(r.rows.back().norm_phi_exact > 0.0);
  }

  TEST_CASE("warm cache reproduces the CSV output byte for byte")
  {
    const auto dir = testutil::scratch_dir("driver_cache");
    RunConfig c;
    c.T = 1.0;
    c.cache_dir = (dir / "cache").string();
    c.out_dir = (dir / "cold").string();
    std::vector<std::string> lines;
    run(c, [&](const std::string &m) { lines.push_back(m); });
    c.out_dir = (dir / "warm").string();
    run(c, [&](const std::string &m) { lines.push_back(m); });
    CHECK(testutil::slurp(dir / "cold" / "n2" / "steps.csv") ==
          testutil::slurp(dir / "warm" / "n2" / "steps.csv"));
    CHECK(testutil::slurp(dir / "cold" / "summary.csv") ==
          testutil::slurp(dir / "warm" / "summary.csv"));
    bool saw_hits = false;
    for (const auto &l : lines)
    {
      saw_hits = saw_hits || l.find("misses 0") != std::string::npos;
    }
    CHECK(saw_hits);
  }

  TEST_CASE("every output directory carries the resolved configuration")
  {
    const auto dir = testutil::scratch_dir("driver_out");
    RunConfig c;
    c.n = 1;
    c.T = 0.8;
    c.out_dir = dir.string();
    c.vtk = true;
    c.snapshots = true;
    c.dump_matrices = true;
    run(c);
    const std::string text = resolved_config_text(c);
    for (const fs::path p : {dir, dir / "n1", dir / "n1" / "vtk", dir / "n1" / "snapshots",
                             dir / "n1" / "matrices"})
    {
      CHECK(testutil::slurp(p / "config.txt") == text);
    }
    CHECK(fs::exists(dir / "n1" / "vtk" / "step_00002.vtk"));
    CHECK(fs::exists(dir / "n1" / "snapshots" / "step_00000.txt"));
    CHECK(fs::exists(dir / "n1" / "matrices" / "V_0000.coo"));
    CHECK(fs::exists(dir / "n1" / "corner.csv"));
    const std::string snap = testutil::slurp(dir / "n1" / "snapshots" / "step_00001.txt");
    CHECK(snap.rfind("# step 1 t ", 0) == 0);
    CHECK(snap.find("\nu 24\n") != std::string::npos);
  }

  TEST_CASE("study over two levels yields one rate pair")
  {
    const auto dir = testutil::scratch_dir("driver_study");
    RunConfig c;
    c.levels = {1, 2};
    c.T = 1.0;
    c.out_dir = dir.string();
    const auto reps = run(c);
    REQUIRE(reps.size() == 2);
    const auto rows = summarize(reps);
    CHECK(std::isnan(rows[0].rate_u));
    CHECK(std::isfinite(rows[1].rate_u));
    CHECK(std::isfinite(rows[1].rate_phi));
    const std::string csv = testutil::slurp(dir / "summary.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  }

  TEST_CASE("discrete displacement stays close in size to the exact one")
  {
    RunConfig c;
    const RunReport r = run_single(c, 2);
    double mh = 0.0, me = 0.0;
    for (const auto &row : r.rows)
    {
      REQUIRE(std::isfinite(row.norm_u_h));
      mh = std::max(mh, row.norm_u_h);
      me = std::max(me, row.norm_u_exact);
    }
    CHECK(me > 0.0);
    CHECK(mh < 2.0 * me);
    CHECK(mh > 0.5 * me);
  }

  TEST_CASE("invalid configurations are rejected before any work")
  {
    RunConfig c;
    c.T = -1.0;
    CHECK_THROWS_AS(run_single(c, 1), Error);
    RunConfig d;
    d.levels = {2};
    CHECK_THROWS_AS(run(d), Error);
    RunConfig e;
    CHECK_THROWS_AS(run_study(e), Error);
  }
}
