#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "recaudit/types.hpp"

namespace recaudit {

// Geometric position-discount model: position i (1-based) carries weight
// gamma^(i-1), truncated at k.
struct ExposureModel {
  double gamma = 0.85;
  int k = 100;
};

std::vector<double> exposure_weights(const ExposureModel& model);

using ItemSet = std::unordered_set<std::string>;

// Ranking quality against the set of test-window items. All three return 0
// when the list has no relevant item in the top k; ndcg also returns 0 for an
// empty relevant set, which callers are expected to track separately.
double ndcg(const RankedList& list, const ItemSet& relevant, int k);
double rbp(const RankedList& list, const ItemSet& relevant, const ExposureModel& model);
double mrr(const RankedList& list, const ItemSet& relevant, int k);

// Probabilities over genre indices, entries sorted by genre index, summing to
// one. An empty vector means no genre-covered input existed.
using GenreDistribution = std::vector<std::pair<uint32_t, double>>;

GenreDistribution list_genre_distribution(const RankedList& list, const GenreTable& genres,
                                          const ExposureModel& model);

std::optional<double> entropy_bits(const GenreDistribution& dist);

// Mean per-user entropy of the genre mass aggregated over each user's records
// in the bucket. Users with no genre-covered item contribute nothing; no
// covered user at all yields no value.
std::optional<double> user_profile_genre_entropy(const Records& records,
                                                 std::span<const uint32_t> idx,
                                                 const GenreTable& genres);

// Mean absolute difference normalized by twice the mean. Values must be
// non-negative; an all-zero vector is perfectly equal by convention.
double gini(std::span<const double> values);

enum class EntityLevel { item, author };

std::optional<double> interaction_gini(const Records& records, std::span<const uint32_t> idx,
                                       EntityLevel level, const AuthorTable& authors);

// Fixed entity universe for exposure concentration. slot_of_item maps an item
// id to the catalog slot its exposure accrues to; items absent from the map
// accrue nowhere (author level for items without a known primary author).
struct Catalog {
  std::vector<std::string> entities;
  std::unordered_map<std::string, uint32_t> slot_of_item;
};

Catalog make_item_catalog(const Records& records);
Catalog make_author_catalog(const Records& records, const AuthorTable& authors);

double exposure_gini(std::span<const RankedList> lists, const Catalog& catalog,
                     const ExposureModel& model);

// Share of female-authored entries among entries whose primary-author gender
// is known. Entries with unknown gender stay out of both numerator and
// denominator; an empty denominator yields no value.
std::optional<double> female_author_share(const Records& records, std::span<const uint32_t> idx,
                                          const AuthorTable& authors);
std::optional<double> female_author_share(std::span<const RankedList> lists,
                                          const AuthorTable& authors);
std::optional<double> female_author_share_weighted(std::span<const RankedList> lists,
                                                   const AuthorTable& authors,
                                                   const ExposureModel& model);

struct UniqueCounts {
  size_t n_users = 0;
  size_t n_items = 0;
  size_t n_authors = 0;
};

UniqueCounts unique_counts(const Records& records, std::span<const uint32_t> idx,
                           const AuthorTable& authors);
UniqueCounts unique_counts(std::span<const RankedList> lists, const AuthorTable& authors);

}  // namespace recaudit
