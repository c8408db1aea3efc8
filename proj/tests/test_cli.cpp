#include "metaes/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

using namespace metaes;
using namespace metaes::cli;
namespace fs = std::filesystem;

namespace {

/// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("metaes_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
    ::unsetenv("METAES_OUTDIR");
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("run writes a trace and a summary") {
  TempDir tmp;
  const std::string cfg = "function: sphere\ndimension: 16\nalgorithm: lmcma_serial\nbudget: 10000\nseed: 2\noutdir: " +
                          (tmp.path / "a").string() + "\n";
  std::ostringstream out, err;
  REQUIRE(cmd_run(tmp.write("run.yaml", cfg), false, out, err) == kExitOk);
  CHECK(err.str().empty());
  const auto rows = io::read_trace(tmp.path / "a" / "trace.csv");
  REQUIRE(rows.size() >= 2);
  CHECK(rows.front().evals == 1);
  CHECK(rows.back().evals <= 10000 + 19);
  for (const auto& r : rows) CHECK(r.wall_s == 0.0);

  const auto summary = nlohmann::json::parse(slurp(tmp.path / "a" / "summary.json"));
  CHECK(summary["function"] == "sphere");
  CHECK(summary["algorithm"] == "lmcma_serial");
  CHECK(summary["dimension"] == 16);
  CHECK(summary["f_best"].get<double>() == rows.back().best_f);
  CHECK(summary["evals"] == rows.back().evals);
  CHECK(summary["config_hash"].get<std::string>().size() == 16);
  CHECK(summary["x_best"].size() == 16);
  CHECK(summary.contains("reached_threshold"));

  // Same config, different directory: identical trace bytes.
  const std::string again = "function: sphere\ndimension: 16\nalgorithm: lmcma_serial\nbudget: 10000\nseed: 2\noutdir: " +
                            (tmp.path / "b").string() + "\n";
  REQUIRE(cmd_run(tmp.write("again.yaml", again), false, out, err) == kExitOk);
  CHECK(slurp(tmp.path / "a" / "trace.csv") == slurp(tmp.path / "b" / "trace.csv"));
  const auto s2 = nlohmann::json::parse(slurp(tmp.path / "b" / "summary.json"));
  CHECK(s2["config_hash"] == summary["config_hash"]);
}

TEST_CASE("distributed run traces are byte-identical across pool sizes") {
  TempDir tmp;
  const auto cfg = [&](const std::string& dir, int pool) {
    return "function: ellipsoid\ndimension: 8\nlambda_prime: 5\nisolation: 200\nbudget: 4000\nseed: 1\npool_size: " +
           std::to_string(pool) + "\noutdir: " + (tmp.path / dir).string() + "\n";
  };
  std::ostringstream out, err;
  REQUIRE(cmd_run(tmp.write("p1.yaml", cfg("p1", 1)), false, out, err) == kExitOk);
  REQUIRE(cmd_run(tmp.write("p4.yaml", cfg("p4", 4)), false, out, err) == kExitOk);
  CHECK(slurp(tmp.path / "p1" / "trace.csv") == slurp(tmp.path / "p4" / "trace.csv"));
}

TEST_CASE("run exit codes") {
  TempDir tmp;
  std::ostringstream out, err;
  CHECK(cmd_run(tmp.write("bad.yaml", "function: nope\n"), false, out, err) == kExitConfig);
  CHECK(err.str().find("bad.yaml:1: key 'function': unknown function 'nope'") != std::string::npos);
  CHECK(cmd_run(tmp.path / "missing.yaml", false, out, err) == kExitConfig);
  CHECK(cmd_run(tmp.write("bad2.yaml", "budget_mode: seconds\n"), false, out, err) == kExitConfig);
}

TEST_CASE("output directory override") {
  TempDir tmp;
  RunConfig c;
  c.outdir = "x";
  CHECK(resolve_outdir(c) == "x");
  ::setenv("METAES_OUTDIR", (tmp.path / "env").c_str(), 1);
  CHECK(resolve_outdir(c) == tmp.path / "env");
  ::unsetenv("METAES_OUTDIR");
}

TEST_CASE("bench runs every cell and writes medians") {
  TempDir tmp;
  const std::string suite = "functions: [sphere, rastrigin]\nalgorithms: [lmcma_serial]\nseeds: 3\ndimension: 8\n"
                            "budget: 2000\noutdir: " +
                            (tmp.path / "suite").string() + "\n";
  std::ostringstream out, err;
  REQUIRE(cmd_bench(tmp.write("suite.yaml", suite), false, out, err) == kExitOk);
  std::size_t traces = 0;
  for (const auto& entry : fs::recursive_directory_iterator(tmp.path / "suite")) {
    if (entry.path().filename() == "trace.csv") ++traces;
  }
  CHECK(traces == 6);
  CHECK(fs::exists(tmp.path / "suite" / "rastrigin" / "lmcma_serial" / "seed_2" / "summary.json"));
  const std::string medians = slurp(tmp.path / "suite" / "medians.csv");
  CHECK(count(medians, "\n") == 3);
  CHECK(medians.find("sphere,lmcma_serial,3,0,ok,") != std::string::npos);
  CHECK(medians.find("rastrigin,lmcma_serial,3,0,ok,") != std::string::npos);

  CHECK(cmd_bench(tmp.write("empty.yaml", "functions: []\n"), false, out, err) == kExitConfig);
}

TEST_CASE("plot draws one polyline per trace") {
  TempDir tmp;
  io::write_trace(tmp.path / "a.csv", {{0, 1, 0, 10, 1}, {1, 50, 0, 1e-3, 0.5}, {2, 90, 0, 1e-12, 0.1}});
  io::write_trace(tmp.path / "b.csv", {{0, 1, 0, 8, 1}, {1, 60, 0, 2, 0.5}});
  std::ostringstream out, err;
  REQUIRE(cmd_plot({tmp.path / "a.csv"}, tmp.path / "one.svg", plot::XAxis::evaluations, out, err) == kExitOk);
  const std::string one = slurp(tmp.path / "one.svg");
  CHECK(count(one, "<polyline") == 1);
  CHECK(one.find("clipped") != std::string::npos);
  CHECK((one.starts_with("<svg") || one.starts_with("<?xml")));

  REQUIRE(cmd_plot({tmp.path / "a.csv", tmp.path / "b.csv"}, tmp.path / "two.svg", plot::XAxis::wall_seconds, out,
                   err) == kExitOk);
  CHECK(count(slurp(tmp.path / "two.svg"), "<polyline") == 2);

  const fs::path bad = tmp.write("bad.csv", "epoch,evals,wall_s,best_f,sigma_prime\n0,1,0,abc,1\n");
  CHECK(cmd_plot({bad}, tmp.path / "bad.svg", plot::XAxis::evaluations, out, err) != kExitOk);
  CHECK(err.str().find("bad.csv:2") != std::string::npos);
  CHECK(cmd_plot({}, tmp.path / "none.svg", plot::XAxis::evaluations, out, err) == kExitConfig);
}
