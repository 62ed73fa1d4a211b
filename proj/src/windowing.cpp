#include "recaudit/windowing.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "recaudit/errors.hpp"

namespace recaudit {

std::vector<MonthBucket> monthly_buckets(const Records& records, TimeWindow range) {
  if (range.start >= range.end) throw ConfigError("monthly_buckets: empty range");

  cal::Month first = cal::month_of(range.start);
  cal::Month last = cal::month_of(range.end - 1);
  int n_months = cal::months_between(first, last) + 1;

  std::vector<MonthBucket> buckets;
  buckets.reserve(n_months);
  for (int i = 0; i < n_months; ++i) buckets.push_back({cal::add_months(first, i), {}});

  for (uint32_t idx = 0; idx < records.size(); ++idx) {
    int64_t ts = records[idx].last_ts;
    if (!range.contains(ts)) continue;
    int slot = cal::months_between(first, cal::month_of(ts));
    buckets[static_cast<size_t>(slot)].record_idx.push_back(idx);
  }
  return buckets;
}

std::vector<std::string> eligible_users(const Records& records, TimeWindow train,
                                        TimeWindow test) {
  std::unordered_set<std::string_view> in_train;
  std::unordered_set<std::string_view> in_test;
  for (const InteractionRecord& r : records) {
    if (train.contains(r.last_ts)) in_train.insert(r.user_id);
    if (test.contains(r.last_ts)) in_test.insert(r.user_id);
  }
  std::vector<std::string> users;
  for (std::string_view u : in_test)
    if (in_train.count(u)) users.push_back(std::string(u));
  std::sort(users.begin(), users.end());
  return users;
}

std::vector<ExperimentSplit> rolling_splits(const Records& records, const SplitConfig& cfg) {
  if (cfg.test_months <= 0 || cfg.train_months <= 0)
    throw ConfigError("rolling_splits: window durations must be positive");
  cal::Month first_test = cal::month_of(cfg.first_test_start);
  if (cal::month_start(first_test) != cfg.first_test_start)
    throw ConfigError("rolling_splits: first_test_start must be a month boundary");

  // horizon_end names the last day with data; windows may run through the
  // following midnight.
  const int64_t horizon_boundary = cfg.horizon_end + 86400;

  std::vector<ExperimentSplit> splits;
  for (int k = 0;; ++k) {
    cal::Month test_start = cal::add_months(first_test, k * cfg.test_months);
    cal::Month test_end = cal::add_months(test_start, cfg.test_months);
    TimeWindow test{cal::month_start(test_start), cal::month_start(test_end)};
    if (test.end > horizon_boundary) break;
    cal::Month train_start = cal::add_months(test_start, -cfg.train_months);
    TimeWindow train{cal::month_start(train_start), test.start};
    splits.push_back({train, test, eligible_users(records, train, test)});
  }
  if (splits.empty()) throw ConfigError("rolling_splits: no complete test window fits");
  return splits;
}

}  // namespace recaudit
