#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "recaudit/errors.hpp"
#include "recaudit/pipeline.hpp"

namespace recaudit {

namespace {

constexpr const char* kMetricsHeader = "window,series,metric,value,n";

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("write failed for " + path);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string to_csv(const MetricTable& table) {
  std::string out = kMetricsHeader;
  out += '\n';
  for (const auto& row : table) {
    out += row.window;
    out += ',';
    out += row.series;
    out += ',';
    out += row.metric;
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += std::to_string(row.n);
    out += '\n';
  }
  return out;
}

MetricTable parse_metrics_csv(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsHeader)
    throw ParseError("line 1: expected header '" + std::string(kMetricsHeader) + "'", 1);

  MetricTable table;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 5)
      throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    MetricRow row;
    row.window = fields[0];
    row.series = fields[1];
    row.metric = fields[2];
    {
      const auto& s = fields[3];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), row.value);
      if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad value '" + s + "'", line_no,
                         4);
    }
    {
      const auto& s = fields[4];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), row.n);
      if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad count '" + s + "'", line_no,
                         5);
    }
    table.push_back(std::move(row));
  }
  return table;
}

MetricTable load_metrics_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  try {
    return parse_metrics_csv(f);
  } catch (ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line, e.column);
  }
}

void emit_csv(const MetricTable& table, const std::string& path) {
  write_file(path, to_csv(table));
}

std::string to_csv(const CompareResult& result) {
  std::string out =
      "series,metric,mean_before,mean_after,mean_diff,slope_before,slope_after,slope_diff,"
      "n_before,n_after\n";
  for (const auto& row : result.rows) {
    out += row.series;
    out += ',';
    out += row.metric;
    out += ',';
    out += format_double(row.mean_before);
    out += ',';
    out += format_double(row.mean_after);
    out += ',';
    out += format_double(row.mean_diff);
    out += ',';
    out += format_double(row.slope_before);
    out += ',';
    out += format_double(row.slope_after);
    out += ',';
    out += format_double(row.slope_diff);
    out += ',';
    out += std::to_string(row.n_before);
    out += ',';
    out += std::to_string(row.n_after);
    out += '\n';
  }
  return out;
}

void emit_compare_csv(const CompareResult& result, const std::string& path) {
  write_file(path, to_csv(result));
}

}  // namespace recaudit
