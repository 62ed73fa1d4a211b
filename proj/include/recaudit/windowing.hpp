#pragma once

#include <string>
#include <vector>

#include "recaudit/calendar.hpp"
#include "recaudit/types.hpp"

namespace recaudit {

// Half-open [start, end) interval in epoch seconds.
struct TimeWindow {
  int64_t start = 0;
  int64_t end = 0;
  bool contains(int64_t ts) const { return ts >= start && ts < end; }
  bool operator==(const TimeWindow&) const = default;
};

struct MonthBucket {
  cal::Month month;
  std::vector<uint32_t> record_idx;  // indices into the record table
};

// Assigns records to the UTC calendar month containing their last timestamp.
// Every month the range touches appears, empty or not; records outside the
// range are ignored. Throws ConfigError on an empty range.
std::vector<MonthBucket> monthly_buckets(const Records&, TimeWindow range);

struct SplitConfig {
  int64_t first_test_start = cal::parse_date("2009-01-01");  // month boundary
  int test_months = 2;
  int train_months = 24;
  // Last day with data, inclusive. A test window is retained only if it ends
  // by the following midnight, so the default keeps windows through
  // [2017-09-01, 2017-11-01).
  int64_t horizon_end = cal::parse_date("2017-10-31");
};

struct ExperimentSplit {
  TimeWindow train;
  TimeWindow test;
  std::vector<std::string> eligible_users;  // sorted
};

// Tiles the timeline with contiguous test windows of test_months starting at
// first_test_start, each preceded by its train_months-long train window.
// Window membership everywhere uses last_ts. Throws ConfigError if no
// complete test window fits.
std::vector<ExperimentSplit> rolling_splits(const Records&, const SplitConfig& = {});

// Users with at least one record in each window (by last_ts), sorted.
std::vector<std::string> eligible_users(const Records&, TimeWindow train, TimeWindow test);

}  // namespace recaudit
