#include "metaes/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace metaes::io {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string::size_type begin = 0;
  while (true) {
    const auto end = line.find(sep, begin);
    parts.push_back(line.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return parts;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  if (text == "inf") {
    if constexpr (std::is_floating_point_v<T>) {
      out = std::numeric_limits<T>::infinity();
      return true;
    }
  }
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size();
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ec == std::errc() ? end : buffer);
}

std::vector<TraceRow> trace_rows(const exec::RunReport& report, bool zero_wall_time) {
  std::vector<TraceRow> rows;
  rows.reserve(report.records.size() + 1);
  const auto add = [&](const exec::EpochRecord& r) {
    rows.push_back({r.epoch, r.evals, zero_wall_time ? 0.0 : r.wall_s, r.best_f, r.sigma_prime});
  };
  add(report.initial);
  for (const auto& r : report.records) add(r);
  return rows;
}

std::string format_trace(const std::vector<TraceRow>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow& r : rows) {
    out += std::to_string(r.epoch) + ',' + std::to_string(r.evals) + ',' + format_double(r.wall_s) + ',' +
           format_double(r.best_f) + ',' + format_double(r.sigma_prime) + '\n';
  }
  return out;
}

std::vector<TraceRow> parse_trace(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  const auto error = [&](const std::string& what) {
    throw TraceError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    error("empty file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) error("expected header '" + std::string(kTraceHeader) + "'");

  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 5) error("expected 5 fields, got " + std::to_string(fields.size()));
    TraceRow r;
    if (!parse_number(fields[0], r.epoch) || !parse_number(fields[1], r.evals) ||
        !parse_number(fields[2], r.wall_s) || !parse_number(fields[3], r.best_f) ||
        !parse_number(fields[4], r.sigma_prime)) {
      error("malformed number");
    }
    rows.push_back(r);
  }
  return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
  write_text(path, format_trace(rows));
}

std::vector<TraceRow> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError(path.string() + ": cannot read file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_trace(text.str(), path.string());
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<MedianRow> median_table(const std::vector<CellOutcome>& cells) {
  std::vector<MedianRow> rows;
  std::map<std::pair<std::string, std::string>, std::vector<const CellOutcome*>> groups;
  for (const CellOutcome& cell : cells) {
    auto& group = groups[{cell.function, cell.algorithm}];
    if (group.empty()) rows.push_back({cell.function, cell.algorithm, 0, 0, 0.0, 0.0, {}});
    group.push_back(&cell);
  }
  for (MedianRow& row : rows) {
    std::vector<const std::vector<TraceRow>*> traces;
    for (const CellOutcome* cell : groups[{row.function, row.algorithm}]) {
      ++row.runs;
      if (cell->failed || cell->rows.empty()) {
        ++row.failed;
      } else {
        traces.push_back(&cell->rows);
      }
    }
    if (traces.empty()) {
      row.median_final_f = row.median_evals = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    std::vector<double> finals, evals;
    std::size_t length = 0;
    for (const auto* t : traces) {
      finals.push_back(t->back().best_f);
      evals.push_back(static_cast<double>(t->back().evals));
      length = std::max(length, t->size());
    }
    row.median_final_f = median(finals);
    row.median_evals = median(evals);
    for (std::size_t k = 0; k < length; ++k) {
      std::vector<double> column;
      for (const auto* t : traces) column.push_back((*t)[std::min(k, t->size() - 1)].best_f);
      row.median_curve.push_back(median(column));
    }
  }
  return rows;
}

std::string format_medians(const std::vector<MedianRow>& rows) {
  std::string out = "function,algorithm,runs,failed,status,median_final_f,median_evals,median_curve\n";
  for (const MedianRow& r : rows) {
    std::string curve;
    for (std::size_t k = 0; k < r.median_curve.size(); ++k) {
      if (k) curve += ';';
      curve += format_double(r.median_curve[k]);
    }
    const char* status = r.failed == 0 ? "ok" : (r.failed == r.runs ? "failed" : "partial");
    out += r.function + ',' + r.algorithm + ',' + std::to_string(r.runs) + ',' + std::to_string(r.failed) + ',' +
           status + ',' + format_double(r.median_final_f) + ',' + format_double(r.median_evals) + ',' + curve + '\n';
  }
  return out;
}

}  // namespace metaes::io
