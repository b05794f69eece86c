#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sparsevar/cli.hpp"
#include "sparsevar/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.status = sparsevar::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sparsevar_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string s(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("simulate, fit, forecast, evaluate") {
  const fs::path dir = scratch("pipeline");
  REQUIRE(run({"simulate", "--out", s(dir / "sim"), "--k", "4", "--lag", "2", "--t", "420", "--density", "0.3",
               "--magnitude", "0.35", "--seed", "11"})
              .status == 0);
  CHECK(fs::exists(dir / "sim" / "panel.csv"));
  CHECK(fs::exists(dir / "sim" / "truth.json"));
  const std::string panel = s(dir / "sim" / "panel.csv");

  const auto fit = run({"fit", "--panel", panel, "--lag", "2", "--grid", "15,0.001", "--out", s(dir / "fit")});
  REQUIRE(fit.status == 0);
  CHECK(fit.out.find("\"status\":\"ok\"") != std::string::npos);
  CHECK(fs::exists(dir / "fit" / "model.json"));

  const std::string origins = "2019-01-15:2019-02-13";
  REQUIRE(run({"forecast", "--panel", panel, "--lag", "2", "--grid", "15,0.001", "--origins", origins, "--out",
               s(dir / "lasso")})
              .status == 0);
  REQUIRE(run({"forecast", "--panel", panel, "--model", s(dir / "sim" / "truth.json"), "--origins", origins, "--out",
               s(dir / "truth")})
              .status == 0);
  REQUIRE(run({"forecast", "--panel", panel, "--model", s(dir / "fit" / "model.json"), "--origins", origins, "--out",
               s(dir / "fixed")})
              .status == 0);
  const auto ev = run({"evaluate", "--forecasts", "lasso=" + s(dir / "lasso" / "forecasts.csv"), "--forecasts",
                       "truth=" + s(dir / "truth" / "forecasts.csv"), "--benchmark", "lasso", "--panel", panel,
                       "--out", s(dir / "eval")});
  REQUIRE(ev.status == 0);
  const auto table = sparsevar::csv::read(dir / "eval" / "evaluation.csv");
  CHECK(table.header == std::vector<std::string>{"model", "series", "horizon", "metric", "value", "stars"});
  bool found = false;
  for (const auto& row : table.rows) {
    if (row[0] == "truth" && row[1] == "average" && row[2] == "1" && row[3] == "mda") {
      found = true;
      CHECK(std::stod(row[4]) > 0.5);
    }
  }
  CHECK(found);
}

TEST_CASE("evaluate names dates whose actuals disagree with the panel") {
  const fs::path dir = scratch("mismatch");
  REQUIRE(run({"simulate", "--out", s(dir), "--k", "2", "--lag", "1", "--t", "200", "--seed", "2"}).status == 0);
  REQUIRE(run({"forecast", "--panel", s(dir / "panel.csv"), "--model", s(dir / "truth.json"), "--origins",
               "2018-06-01:2018-06-20", "--horizons", "2", "--out", s(dir)})
              .status == 0);
  auto table = sparsevar::csv::read(dir / "forecasts.csv");
  std::ofstream out(dir / "tampered.csv");
  out << "origin,horizon,series,forecast,actual\n";
  for (auto row : table.rows) {
    if (row[0] == "2018-06-04" && row[1] == "1") row[4] = "123.5";
    out << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << ',' << row[4] << '\n';
  }
  out.close();
  const auto r = run({"evaluate", "--forecasts", "m=" + s(dir / "tampered.csv"), "--panel", s(dir / "panel.csv"),
                      "--out", s(dir / "eval")});
  CHECK(r.status != 0);
  CHECK(r.err.find("2018-06-05") != std::string::npos);
  CHECK(r.err.find('\n') == r.err.size() - 1);
  CHECK(r.err.rfind("{", 0) == 0);
}

TEST_CASE("granger with threshold 0 writes no edges but the full matrix") {
  const fs::path dir = scratch("granger");
  REQUIRE(run({"simulate", "--out", s(dir), "--k", "3", "--lag", "1", "--t", "300", "--density", "0.4", "--seed",
               "5"})
              .status == 0);
  REQUIRE(run({"granger", "--panel", s(dir / "panel.csv"), "--lag", "1", "--threshold", "0", "--out", s(dir / "g")})
              .status == 0);
  CHECK(slurp(dir / "g" / "granger_edges.csv") == "from,to,p_value\n");
  const auto matrix = sparsevar::csv::read(dir / "g" / "granger_matrix.csv");
  CHECK(matrix.rows.size() == 3);
  CHECK(matrix.header.size() == 4);
}

TEST_CASE("config file with flag overrides") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# shared settings\nlag = 3\nk = 2\nt = 150\nseed = 9\nout = " << s(dir / "from_config") << "\n";
  }
  REQUIRE(run({"simulate", "--config", s(dir / "run.cfg"), "--lag", "1"}).status == 0);
  const auto truth = slurp(dir / "from_config" / "truth.json");
  CHECK(truth.find("\"p\": 1") != std::string::npos);

  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "lag = 2\nbogus = 1\nalso_bogus = 2\n";
  }
  const auto r = run({"simulate", "--config", s(dir / "bad.cfg"), "--out", s(dir / "x")});
  CHECK(r.status == 2);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK(r.err.find("also_bogus") != std::string::npos);
}

TEST_CASE("usage and runtime errors are single JSON lines") {
  auto r = run({"fit", "--no-such-flag"});
  CHECK(r.status == 2);
  CHECK(r.err.rfind("{\"errors\"", 0) == 0);
  r = run({});
  CHECK(r.status == 2);
  const fs::path dir = scratch("runtime");
  {
    std::ofstream bad(dir / "p.csv");
    bad << "date,a\n2020-01-01,1\n2020-01-03,2\n";
  }
  r = run({"fit", "--panel", s(dir / "p.csv"), "--lag", "1", "--out", s(dir)});
  CHECK(r.status == 1);
  CHECK(r.err.find("missing dates") != std::string::npos);
  CHECK(run({"--help"}).status == 0);
}

TEST_CASE("outputs are byte-identical across thread counts") {
  const fs::path dir = scratch("threads");
  const std::string bin = SPARSEVAR_CLI_PATH;
  auto sh = [&](const std::string& cmd) { return std::system((bin + " " + cmd + " > /dev/null").c_str()); };
  for (const std::string threads : {"1", "3"}) {
    const std::string out = s(dir / ("t" + threads));
    const std::string panel = out + "/sim/panel.csv";
    const std::string t = " --threads " + threads;
    REQUIRE(sh("simulate --k 4 --lag 2 --t 300 --density 0.3 --seed 4 --out " + out + "/sim" + t) == 0);
    REQUIRE(sh("cv --panel " + panel + " --lag 2 --grid 10,0.01 --out " + out + "/cv" + t) == 0);
    REQUIRE(sh("fit --panel " + panel + " --lag 2 --estimator fgls-lasso --grid 10,0.01 --out " + out + "/fit" + t) == 0);
    REQUIRE(sh("forecast --panel " + panel + " --lag 2 --grid 10,0.01 --origins 2018-10-01:2018-10-12 --out " + out +
               "/fc" + t) == 0);
    REQUIRE(sh("evaluate --forecasts a=" + out + "/fc/forecasts.csv --panel " + panel + " --out " + out + "/ev" + t) == 0);
    REQUIRE(sh("granger --panel " + panel + " --lag 2 --out " + out + "/gr" + t) == 0);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "t1")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir / "t1");
    CHECK_MESSAGE(slurp(entry.path()) == slurp(dir / "t3" / rel), rel.string());
    ++compared;
  }
  CHECK(compared >= 10);
}
