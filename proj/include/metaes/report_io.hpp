#pragma once

#include "metaes/exec.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace metaes::io {

inline constexpr const char* kTraceHeader = "epoch,evals,wall_s,best_f,sigma_prime";

struct TraceRow {
  std::uint64_t epoch = 0;
  std::uint64_t evals = 0;
  double wall_s = 0.0;
  double best_f = 0.0;
  double sigma_prime = 0.0;

  bool operator==(const TraceRow&) const = default;
};

/// Malformed trace file; the message names the file and line.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial row followed by one row per record. Numbers use the shortest form
/// that reads back exactly. With `zero_wall_time`
/// the wall_s column is written as 0 to keep the file reproducible.
std::vector<TraceRow> trace_rows(const exec::RunReport& report, bool zero_wall_time);

std::string format_trace(const std::vector<TraceRow>& rows);
std::vector<TraceRow> parse_trace(const std::string& text, const std::string& source);

void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace(const std::filesystem::path& path);

/// One benchmark cell as seen by the median table.
struct CellOutcome {
  std::string function;
  std::string algorithm;
  std::uint64_t seed = 0;
  bool failed = false;
  std::vector<TraceRow> rows;  // empty when failed
};

struct MedianRow {
  std::string function;
  std::string algorithm;
  std::size_t runs = 0;
  std::size_t failed = 0;
  double median_final_f = 0.0;
  double median_evals = 0.0;
  std::vector<double> median_curve;  // median best_f per row index, shorter traces held at their last value
};

double median(std::vector<double> values);

/// Groups cells by (function, algorithm) in first-seen order.
std::vector<MedianRow> median_table(const std::vector<CellOutcome>& cells);

/// Columns: function,algorithm,runs,failed,status,median_final_f,median_evals,median_curve
/// where median_curve is ';'-separated.
std::string format_medians(const std::vector<MedianRow>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace metaes::io
