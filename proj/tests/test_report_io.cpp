#include "metaes/report_io.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <random>

using namespace metaes;
using namespace metaes::io;

namespace {

std::vector<TraceRow> curve(std::initializer_list<double> fs) {
  std::vector<TraceRow> rows;
  std::uint64_t k = 0;
  for (double f : fs) {
    rows.push_back({k, 1 + 10 * k, 0.0, f, 1.0});
    ++k;
  }
  return rows;
}

std::string error_of(const std::string& text) {
  try {
    (void)parse_trace(text, "t.csv");
  } catch (const TraceError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("traces round-trip bit for bit") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> expo(-300.0, 300.0);
  std::vector<TraceRow> rows;
  for (std::uint64_t k = 0; k < 200; ++k) {
    rows.push_back({k, k * 19 + 1, std::pow(10.0, expo(rng) / 100.0), std::pow(10.0, expo(rng)),
                    std::nextafter(1.0, 2.0) * std::pow(10.0, expo(rng) / 10.0)});
  }
  rows.push_back({200, 4000, 0.0, std::numeric_limits<double>::infinity(), 5e-324});
  CHECK(parse_trace(format_trace(rows), "x") == rows);
}

TEST_CASE("trace rows start with the initial record") {
  exec::RunReport report;
  report.initial.evals = 1;
  report.initial.best_f = 9.0;
  report.initial.wall_s = 0.5;
  exec::EpochRecord r;
  r.epoch = 1;
  r.evals = 100;
  r.wall_s = 1.25;
  r.best_f = 2.0;
  r.sigma_prime = 0.3;
  report.records.push_back(r);
  const auto rows = trace_rows(report, false);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].best_f == 9.0);
  CHECK(rows[1] == TraceRow{1, 100, 1.25, 2.0, 0.3});
  for (const TraceRow& t : trace_rows(report, true)) CHECK(t.wall_s == 0.0);
  CHECK(format_trace(rows).starts_with("epoch,evals,wall_s,best_f,sigma_prime\n0,1,0.5,9,"));
}

TEST_CASE("malformed traces report the line") {
  CHECK(error_of("") == "t.csv:1: empty file");
  CHECK(error_of("a,b\n").starts_with("t.csv:1: expected header"));
  CHECK(error_of("epoch,evals,wall_s,best_f,sigma_prime\n0,1,0,1,1\n1,2,0,x,1\n") == "t.csv:3: malformed number");
  CHECK(error_of("epoch,evals,wall_s,best_f,sigma_prime\n0,1,0,1\n") == "t.csv:2: expected 5 fields, got 4");
  CHECK(error_of("epoch,evals,wall_s,best_f,sigma_prime\n-1,1,0,1,1\n") == "t.csv:2: malformed number");
  CHECK(error_of("epoch,evals,wall_s,best_f,sigma_prime\r\n0,1,0,1,1\r\n\n").empty());
}

TEST_CASE("medians") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("median table groups cells and holds short curves") {
  std::vector<CellOutcome> cells{
      {"sphere", "dlmcma", 0, false, curve({10, 5, 1})},
      {"sphere", "dlmcma", 1, false, curve({8, 2})},
      {"sphere", "dlmcma", 2, false, curve({12, 6, 3, 0.5})},
      {"sphere", "lmcma_serial", 0, true, {}},
      {"ellipsoid", "dlmcma", 0, false, curve({7})},
  };
  const auto table = median_table(cells);
  REQUIRE(table.size() == 3);
  CHECK(table[0].function == "sphere");
  CHECK(table[0].runs == 3);
  CHECK(table[0].median_final_f == 0.5 * 0 + 1.0);
  CHECK(table[0].median_evals == 21.0);
  CHECK(table[0].median_curve == std::vector<double>{10, 5, 2, 1});
  CHECK(table[1].failed == 1);
  CHECK(std::isnan(table[1].median_final_f));
  CHECK(table[2].median_curve == std::vector<double>{7});

  const std::string text = format_medians(table);
  CHECK(text.starts_with("function,algorithm,runs,failed,status,median_final_f,median_evals,median_curve\n"));
  CHECK(text.find("sphere,dlmcma,3,0,ok,1,21,10;5;2;1\n") != std::string::npos);
  CHECK(text.find("sphere,lmcma_serial,1,1,failed,nan,nan,\n") != std::string::npos);
}

TEST_CASE("shortest decimal output") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-10) == "1e-10");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  double back = 0.0;
  const std::string s = format_double(std::nextafter(0.1, 1.0));
  std::from_chars(s.data(), s.data() + s.size(), back);
  CHECK(back == std::nextafter(0.1, 1.0));
}
