#include "recaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "recaudit/errors.hpp"

namespace recaudit {

namespace {

void check_exposure_model(const ExposureModel& model) {
  if (!(model.gamma > 0.0 && model.gamma < 1.0))
    throw ConfigError("exposure model: gamma must lie in (0,1)");
  if (model.k < 1) throw ConfigError("exposure model: k must be at least 1");
}

size_t effective_length(const RankedList& list, int k) {
  return std::min(list.items.size(), static_cast<size_t>(k));
}

}  // namespace

std::vector<double> exposure_weights(const ExposureModel& model) {
  check_exposure_model(model);
  std::vector<double> w(static_cast<size_t>(model.k));
  double cur = 1.0;
  for (auto& x : w) {
    x = cur;
    cur *= model.gamma;
  }
  return w;
}

double ndcg(const RankedList& list, const ItemSet& relevant, int k) {
  if (k < 1) throw ConfigError("ndcg: k must be at least 1");
  if (relevant.empty()) return 0.0;
  double dcg = 0.0;
  size_t len = effective_length(list, k);
  for (size_t i = 0; i < len; ++i)
    if (relevant.count(list.items[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  size_t ideal = std::min(relevant.size(), static_cast<size_t>(k));
  double idcg = 0.0;
  for (size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

double rbp(const RankedList& list, const ItemSet& relevant, const ExposureModel& model) {
  check_exposure_model(model);
  double sum = 0.0;
  double w = 1.0;
  size_t len = effective_length(list, model.k);
  for (size_t i = 0; i < len; ++i) {
    if (relevant.count(list.items[i])) sum += w;
    w *= model.gamma;
  }
  return (1.0 - model.gamma) * sum;
}

double mrr(const RankedList& list, const ItemSet& relevant, int k) {
  if (k < 1) throw ConfigError("mrr: k must be at least 1");
  size_t len = effective_length(list, k);
  for (size_t i = 0; i < len; ++i)
    if (relevant.count(list.items[i])) return 1.0 / (static_cast<double>(i) + 1.0);
  return 0.0;
}

namespace {

// Adds each (genre, share) row scaled by weight into mass, which is keyed by
// genre index and therefore already sorted.
void accumulate_genres(std::map<uint32_t, double>& mass, const GenreTable::Row& row,
                       double weight) {
  for (const auto& [g, p] : row) mass[g] += weight * p;
}

GenreDistribution normalize(const std::map<uint32_t, double>& mass) {
  double total = 0.0;
  for (const auto& [g, m] : mass) total += m;
  GenreDistribution dist;
  if (total <= 0.0) return dist;
  dist.reserve(mass.size());
  for (const auto& [g, m] : mass) dist.emplace_back(g, m / total);
  return dist;
}

}  // namespace

GenreDistribution list_genre_distribution(const RankedList& list, const GenreTable& genres,
                                          const ExposureModel& model) {
  check_exposure_model(model);
  std::map<uint32_t, double> mass;
  double w = 1.0;
  size_t len = effective_length(list, model.k);
  for (size_t i = 0; i < len; ++i) {
    if (const auto* row = genres.find(list.items[i])) accumulate_genres(mass, *row, w);
    w *= model.gamma;
  }
  return normalize(mass);
}

std::optional<double> entropy_bits(const GenreDistribution& dist) {
  if (dist.empty()) return std::nullopt;
  double h = 0.0;
  for (const auto& [g, p] : dist)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

std::optional<double> user_profile_genre_entropy(const Records& records,
                                                 std::span<const uint32_t> idx,
                                                 const GenreTable& genres) {
  // Records are grouped per user in id order so the mean has a fixed
  // summation order regardless of how idx was produced.
  std::vector<uint32_t> order(idx.begin(), idx.end());
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (records[a].user_id != records[b].user_id) return records[a].user_id < records[b].user_id;
    return records[a].item_id < records[b].item_id;
  });

  double sum = 0.0;
  size_t n_users = 0;
  std::map<uint32_t, double> mass;
  size_t i = 0;
  while (i < order.size()) {
    const std::string& user = records[order[i]].user_id;
    mass.clear();
    for (; i < order.size() && records[order[i]].user_id == user; ++i)
      if (const auto* row = genres.find(records[order[i]].item_id))
        accumulate_genres(mass, *row, 1.0);
    GenreDistribution dist = normalize(mass);
    if (auto h = entropy_bits(dist)) {
      sum += *h;
      ++n_users;
    }
  }
  if (n_users == 0) return std::nullopt;
  return sum / static_cast<double>(n_users);
}

double gini(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("gini: need at least one value");
  std::vector<double> x(values.begin(), values.end());
  double total = 0.0;
  for (double v : x) {
    if (v < 0.0) throw std::invalid_argument("gini: values must be non-negative");
    total += v;
  }
  if (total <= 0.0) return 0.0;
  std::sort(x.begin(), x.end());
  // Equivalent to sum |x_i - x_j| / (2 n total): with ascending x the double
  // sum collapses to sum_i (2i - n - 1) x_i over 1-based ranks.
  double acc = 0.0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    acc += (2.0 * (static_cast<double>(i) + 1.0) - n - 1.0) * x[i];
  return acc / (n * total);
}

std::optional<double> interaction_gini(const Records& records, std::span<const uint32_t> idx,
                                       EntityLevel level, const AuthorTable& authors) {
  std::map<std::string_view, double> counts;
  for (uint32_t r : idx) {
    const auto& rec = records[r];
    if (level == EntityLevel::item) {
      counts[rec.item_id] += 1.0;
    } else if (const auto* primary = authors.find(rec.item_id)) {
      counts[primary->author_id] += 1.0;
    }
  }
  if (counts.empty()) return std::nullopt;
  std::vector<double> values;
  values.reserve(counts.size());
  for (const auto& [e, c] : counts) values.push_back(c);
  return gini(values);
}

Catalog make_item_catalog(const Records& records) {
  Catalog cat;
  cat.entities.reserve(records.size());
  for (const auto& rec : records) cat.entities.push_back(rec.item_id);
  std::sort(cat.entities.begin(), cat.entities.end());
  cat.entities.erase(std::unique(cat.entities.begin(), cat.entities.end()), cat.entities.end());
  cat.slot_of_item.reserve(cat.entities.size());
  for (uint32_t s = 0; s < cat.entities.size(); ++s) cat.slot_of_item.emplace(cat.entities[s], s);
  return cat;
}

Catalog make_author_catalog(const Records& records, const AuthorTable& authors) {
  Catalog cat;
  for (const auto& rec : records)
    if (const auto* primary = authors.find(rec.item_id)) cat.entities.push_back(primary->author_id);
  std::sort(cat.entities.begin(), cat.entities.end());
  cat.entities.erase(std::unique(cat.entities.begin(), cat.entities.end()), cat.entities.end());
  std::unordered_map<std::string, uint32_t> slot_of_author;
  slot_of_author.reserve(cat.entities.size());
  for (uint32_t s = 0; s < cat.entities.size(); ++s) slot_of_author.emplace(cat.entities[s], s);
  for (const auto& rec : records) {
    if (cat.slot_of_item.count(rec.item_id)) continue;
    if (const auto* primary = authors.find(rec.item_id))
      cat.slot_of_item.emplace(rec.item_id, slot_of_author.at(primary->author_id));
  }
  return cat;
}

double exposure_gini(std::span<const RankedList> lists, const Catalog& catalog,
                     const ExposureModel& model) {
  check_exposure_model(model);
  std::vector<double> exposure(catalog.entities.size(), 0.0);
  for (const auto& list : lists) {
    double w = 1.0;
    size_t len = effective_length(list, model.k);
    for (size_t i = 0; i < len; ++i) {
      auto it = catalog.slot_of_item.find(list.items[i]);
      if (it != catalog.slot_of_item.end()) exposure[it->second] += w;
      w *= model.gamma;
    }
  }
  return gini(exposure);
}

namespace {

struct ShareTally {
  double female = 0.0;
  double known = 0.0;

  void add(Gender g, double weight) {
    if (g == Gender::unknown) return;
    known += weight;
    if (g == Gender::female) female += weight;
  }

  std::optional<double> share() const {
    if (known <= 0.0) return std::nullopt;
    return female / known;
  }
};

}  // namespace

std::optional<double> female_author_share(const Records& records, std::span<const uint32_t> idx,
                                          const AuthorTable& authors) {
  ShareTally tally;
  for (uint32_t r : idx) tally.add(authors.item_gender(records[r].item_id), 1.0);
  return tally.share();
}

std::optional<double> female_author_share(std::span<const RankedList> lists,
                                          const AuthorTable& authors) {
  ShareTally tally;
  for (const auto& list : lists)
    for (const auto& item : list.items) tally.add(authors.item_gender(item), 1.0);
  return tally.share();
}

std::optional<double> female_author_share_weighted(std::span<const RankedList> lists,
                                                   const AuthorTable& authors,
                                                   const ExposureModel& model) {
  check_exposure_model(model);
  ShareTally tally;
  for (const auto& list : lists) {
    double w = 1.0;
    size_t len = effective_length(list, model.k);
    for (size_t i = 0; i < len; ++i) {
      tally.add(authors.item_gender(list.items[i]), w);
      w *= model.gamma;
    }
  }
  return tally.share();
}

namespace {

UniqueCounts count_sets(const std::unordered_set<std::string_view>& users,
                        const std::unordered_set<std::string_view>& items,
                        const AuthorTable& authors) {
  std::unordered_set<std::string_view> author_set;
  for (const auto& item : items)
    if (const auto* primary = authors.find(std::string(item)))
      author_set.insert(primary->author_id);
  return UniqueCounts{users.size(), items.size(), author_set.size()};
}

}  // namespace

UniqueCounts unique_counts(const Records& records, std::span<const uint32_t> idx,
                           const AuthorTable& authors) {
  std::unordered_set<std::string_view> users;
  std::unordered_set<std::string_view> items;
  for (uint32_t r : idx) {
    users.insert(records[r].user_id);
    items.insert(records[r].item_id);
  }
  return count_sets(users, items, authors);
}

UniqueCounts unique_counts(std::span<const RankedList> lists, const AuthorTable& authors) {
  std::unordered_set<std::string_view> users;
  std::unordered_set<std::string_view> items;
  for (const auto& list : lists) {
    users.insert(list.user_id);
    for (const auto& item : list.items) items.insert(item);
  }
  return count_sets(users, items, authors);
}

}  // namespace recaudit
