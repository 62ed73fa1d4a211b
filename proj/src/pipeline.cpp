#include "recaudit/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>

#include "parallel.hpp"
#include "recaudit/errors.hpp"
#include "recaudit/ingest.hpp"
#include "recaudit/matrix.hpp"
#include "recaudit/metrics.hpp"
#include "recaudit/models.hpp"
#include "recaudit/rng.hpp"
#include "recaudit/windowing.hpp"

namespace recaudit {

namespace {

void sort_table(MetricTable& table) {
  std::sort(table.begin(), table.end(), [](const MetricRow& a, const MetricRow& b) {
    if (a.window != b.window) return a.window < b.window;
    if (a.series != b.series) return a.series < b.series;
    return a.metric < b.metric;
  });
  for (size_t i = 1; i < table.size(); ++i) {
    const auto& p = table[i - 1];
    const auto& c = table[i];
    if (p.window == c.window && p.series == c.series && p.metric == c.metric)
      throw Error("metric table: duplicate key " + c.window + "/" + c.series + "/" + c.metric);
  }
}

int64_t day_floor(int64_t ts) {
  int64_t d = ts / 86400;
  if (ts % 86400 < 0) --d;
  return d * 86400;
}

}  // namespace

Dataset load_dataset(const RunConfig& cfg) {
  Dataset data;
  data.records = load_interactions_file(cfg.interactions);
  if (data.records.empty())
    throw ConfigError("dataset: " + cfg.interactions + " holds no interaction records");
  if (!cfg.genres.empty()) data.genres = load_genres_file(cfg.genres);
  if (!cfg.authors.empty()) data.authors = load_authors_file(cfg.authors);
  return data;
}

MetricTable run_profile(const Dataset& data, const RunConfig& cfg) {
  validate_config(cfg);
  int64_t min_last = std::numeric_limits<int64_t>::max();
  int64_t max_last = std::numeric_limits<int64_t>::min();
  for (const auto& rec : data.records) {
    min_last = std::min(min_last, rec.last_ts);
    max_last = std::max(max_last, rec.last_ts);
  }
  int64_t start =
      cfg.profile_start ? *cfg.profile_start : cal::month_start(cal::month_of(min_last));
  int64_t end = cfg.profile_end ? *cfg.profile_end + 86400
                                : cal::month_start(cal::add_months(cal::month_of(max_last), 1));
  TimeWindow range{start, end};
  auto buckets = monthly_buckets(data.records, range);

  // First-interaction volume is bucketed by first_ts, independently of the
  // last_ts bucketing used for everything else.
  std::vector<uint64_t> first_counts(buckets.size(), 0);
  for (const auto& rec : data.records)
    if (range.contains(rec.first_ts))
      ++first_counts[static_cast<size_t>(
          cal::months_between(buckets.front().month, cal::month_of(rec.first_ts)))];

  MetricTable table;
  for (size_t b = 0; b < buckets.size(); ++b) {
    const auto& bucket = buckets[b];
    std::string window = cal::label(bucket.month);
    std::span<const uint32_t> idx(bucket.record_idx);
    UniqueCounts uniq = unique_counts(data.records, idx, data.authors);
    uint64_t n = uniq.n_users;
    auto put = [&](const char* metric, double value) {
      table.push_back({window, "data", metric, value, n});
    };
    auto put_opt = [&](const char* metric, std::optional<double> value) {
      if (value) put(metric, *value);
    };
    put("n_records", static_cast<double>(idx.size()));
    put("n_first_records", static_cast<double>(first_counts[b]));
    put("unique_users", static_cast<double>(uniq.n_users));
    put("unique_items", static_cast<double>(uniq.n_items));
    put("unique_authors", static_cast<double>(uniq.n_authors));
    put_opt("profile_genre_entropy", user_profile_genre_entropy(data.records, idx, data.genres));
    put_opt("interaction_gini_item",
            interaction_gini(data.records, idx, EntityLevel::item, data.authors));
    put_opt("interaction_gini_author",
            interaction_gini(data.records, idx, EntityLevel::author, data.authors));
    put_opt("female_share", female_author_share(data.records, idx, data.authors));
  }
  sort_table(table);
  return table;
}

namespace {

struct SplitOutcome {
  MetricTable rows;
  std::vector<std::string> warnings;
};

SplitOutcome evaluate_split(const Dataset& data, const RunConfig& cfg,
                            const ExperimentSplit& split, const Catalog& item_catalog,
                            const Catalog& author_catalog) {
  SplitOutcome out;
  std::string window = cal::label(cal::month_of(split.test.start));
  if (split.eligible_users.empty()) {
    out.warnings.push_back("window " + window + ": no eligible users, split skipped");
    return out;
  }

  InteractionMatrix matrix = InteractionMatrix::build(data.records, split.train);
  std::unordered_set<std::string_view> eligible(split.eligible_users.begin(),
                                                split.eligible_users.end());
  std::unordered_map<std::string_view, ItemSet> relevant;
  for (const auto& rec : data.records)
    if (split.test.contains(rec.last_ts) && eligible.count(rec.user_id))
      relevant[rec.user_id].insert(rec.item_id);

  const uint64_t n_eligible = split.eligible_users.size();
  const int k = cfg.exposure.k;
  for (const auto& algo : cfg.algos) {
    TrainedModel model;
    try {
      if (algo == "mostpop") {
        model = train_mostpop(matrix);
      } else if (algo == "itemknn") {
        model = train_itemknn(matrix, cfg.itemknn);
      } else if (algo == "implicitmf") {
        ImplicitMfConfig mf = cfg.implicitmf;
        mf.seed = derive_seed(cfg.seed, "implicitmf/" + window);
        model = train_implicitmf(matrix, mf, 1);
      } else {
        BprConfig bp = cfg.bpr;
        bp.seed = derive_seed(cfg.seed, "bpr/" + window);
        model = train_bpr(matrix, bp);
      }
    } catch (const TrainError& e) {
      out.warnings.push_back("window " + window + ": " + algo + " failed: " + e.what());
      continue;
    }

    std::vector<RankedList> lists;
    lists.reserve(split.eligible_users.size());
    for (const auto& user : split.eligible_users)
      lists.push_back(recommend(model, matrix, user, k));

    double sum_ndcg = 0, sum_rbp = 0, sum_mrr = 0;
    for (const auto& list : lists) {
      const ItemSet& rel = relevant.at(list.user_id);
      sum_ndcg += ndcg(list, rel, k);
      sum_rbp += rbp(list, rel, cfg.exposure);
      sum_mrr += mrr(list, rel, k);
    }
    auto put = [&](const char* metric, double value) {
      out.rows.push_back({window, algo, metric, value, n_eligible});
    };
    auto put_opt = [&](const char* metric, std::optional<double> value) {
      if (value) put(metric, *value);
    };
    double n_users = static_cast<double>(n_eligible);
    put("ndcg@k", sum_ndcg / n_users);
    put("rbp@k", sum_rbp / n_users);
    put("mrr@k", sum_mrr / n_users);

    double sum_h = 0;
    uint64_t n_h = 0;
    for (const auto& list : lists)
      if (auto h = entropy_bits(list_genre_distribution(list, data.genres, cfg.exposure))) {
        sum_h += *h;
        ++n_h;
      }
    if (n_h > 0) put("genre_entropy", sum_h / static_cast<double>(n_h));

    put("gini_item@k", exposure_gini(lists, item_catalog, cfg.exposure));
    if (!author_catalog.entities.empty())
      put("gini_author@k", exposure_gini(lists, author_catalog, cfg.exposure));
    put_opt("female_share", female_author_share(lists, data.authors));
    put_opt("female_share_weighted",
            female_author_share_weighted(lists, data.authors, cfg.exposure));
    UniqueCounts uniq = unique_counts(std::span<const RankedList>(lists), data.authors);
    put("unique_items", static_cast<double>(uniq.n_items));
    put("unique_authors", static_cast<double>(uniq.n_authors));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const Dataset& data, const RunConfig& cfg) {
  validate_config(cfg);
  SplitConfig scfg;
  scfg.first_test_start = cfg.first_test_start;
  scfg.test_months = cfg.test_months;
  scfg.train_months = cfg.train_months;
  if (cfg.horizon_end) {
    scfg.horizon_end = *cfg.horizon_end;
  } else {
    int64_t max_last = std::numeric_limits<int64_t>::min();
    for (const auto& rec : data.records) max_last = std::max(max_last, rec.last_ts);
    scfg.horizon_end = day_floor(max_last);
  }
  std::vector<ExperimentSplit> splits = rolling_splits(data.records, scfg);

  Catalog item_catalog = make_item_catalog(data.records);
  Catalog author_catalog = make_author_catalog(data.records, data.authors);

  std::vector<SplitOutcome> outcomes(splits.size());
  std::vector<std::exception_ptr> errors(splits.size());
  parallel_for(static_cast<uint32_t>(splits.size()), cfg.workers, [&](uint32_t s) {
    try {
      outcomes[s] = evaluate_split(data, cfg, splits[s], item_catalog, author_catalog);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentResult result;
  result.n_splits = splits.size();
  for (auto& outcome : outcomes) {
    result.table.insert(result.table.end(), std::make_move_iterator(outcome.rows.begin()),
                        std::make_move_iterator(outcome.rows.end()));
    result.warnings.insert(result.warnings.end(),
                           std::make_move_iterator(outcome.warnings.begin()),
                           std::make_move_iterator(outcome.warnings.end()));
  }
  result.partial = !result.warnings.empty();
  sort_table(result.table);
  return result;
}

namespace {

double ols_slope(const std::vector<std::pair<double, double>>& pts) {
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double num = 0, den = 0;
  for (const auto& [x, y] : pts) {
    num += (x - mx) * (y - my);
    den += (x - mx) * (x - mx);
  }
  return den > 0 ? num / den : 0.0;
}

double mean_y(const std::vector<std::pair<double, double>>& pts) {
  double m = 0;
  for (const auto& [x, y] : pts) m += y;
  return m / static_cast<double>(pts.size());
}

}  // namespace

CompareResult compare(const MetricTable& table, int64_t intervention_date) {
  if (table.empty()) throw ConfigError("compare: metric table is empty");

  std::vector<std::string> windows;
  for (const auto& row : table) windows.push_back(row.window);
  std::sort(windows.begin(), windows.end());
  windows.erase(std::unique(windows.begin(), windows.end()), windows.end());
  std::unordered_map<std::string_view, size_t> window_index;
  std::vector<bool> is_before(windows.size());
  for (size_t i = 0; i < windows.size(); ++i) {
    window_index.emplace(windows[i], i);
    is_before[i] = cal::month_start(cal::parse_month(windows[i])) < intervention_date;
  }

  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> before;
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> after;
  for (const auto& row : table) {
    size_t w = window_index.at(row.window);
    auto key = std::make_pair(row.series, row.metric);
    (is_before[w] ? before : after)[key].emplace_back(static_cast<double>(w), row.value);
  }

  CompareResult result;
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& [key, pts] : before) keys.insert(key);
  for (const auto& [key, pts] : after) keys.insert(key);
  for (const auto& key : keys) {
    auto bit = before.find(key);
    auto ait = after.find(key);
    size_t nb = bit == before.end() ? 0 : bit->second.size();
    size_t na = ait == after.end() ? 0 : ait->second.size();
    if (nb < 2 || na < 2) {
      result.skipped.push_back(key.first + "/" + key.second + ": needs 2 windows per side, has " +
                               std::to_string(nb) + " before and " + std::to_string(na) +
                               " after");
      continue;
    }
    CompareRow row;
    row.series = key.first;
    row.metric = key.second;
    row.mean_before = mean_y(bit->second);
    row.mean_after = mean_y(ait->second);
    row.mean_diff = row.mean_after - row.mean_before;
    row.slope_before = ols_slope(bit->second);
    row.slope_after = ols_slope(ait->second);
    row.slope_diff = row.slope_after - row.slope_before;
    row.n_before = nb;
    row.n_after = na;
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace recaudit
