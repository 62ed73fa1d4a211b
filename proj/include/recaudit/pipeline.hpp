#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "recaudit/config.hpp"
#include "recaudit/types.hpp"

namespace recaudit {

struct MetricRow {
  std::string window;
  std::string series;  // algorithm name, or "data" for profiling rows
  std::string metric;
  double value = 0.0;
  uint64_t n = 0;  // users behind the value: active that month, or eligible

  friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

// Rows are kept sorted by (window, series, metric); the triple is unique.
using MetricTable = std::vector<MetricRow>;

struct Dataset {
  Records records;
  GenreTable genres;
  AuthorTable authors;
};

Dataset load_dataset(const RunConfig& cfg);

MetricTable run_profile(const Dataset& data, const RunConfig& cfg);

struct ExperimentResult {
  MetricTable table;
  std::vector<std::string> warnings;  // skipped splits and failed trainings
  size_t n_splits = 0;
  bool partial = false;
};

ExperimentResult run_experiment(const Dataset& data, const RunConfig& cfg);

struct CompareRow {
  std::string series;
  std::string metric;
  double mean_before = 0.0;
  double mean_after = 0.0;
  double mean_diff = 0.0;
  double slope_before = 0.0;
  double slope_after = 0.0;
  double slope_diff = 0.0;
  uint64_t n_before = 0;
  uint64_t n_after = 0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<std::string> skipped;  // series/metric pairs with too few windows
};

// Descriptive before/after summary around an intervention date: means and
// least-squares slopes over the shared window index, no causal reading.
CompareResult compare(const MetricTable& table, int64_t intervention_date);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string to_csv(const MetricTable& table);
MetricTable parse_metrics_csv(std::istream& in);
MetricTable load_metrics_csv(const std::string& path);
void emit_csv(const MetricTable& table, const std::string& path);

std::string to_csv(const CompareResult& result);
void emit_compare_csv(const CompareResult& result, const std::string& path);

// One self-contained SVG per metric under dir, one polyline per series.
void emit_charts(const MetricTable& table, const std::string& dir);

}  // namespace recaudit
