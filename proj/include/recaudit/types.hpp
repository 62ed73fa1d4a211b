#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace recaudit {

enum class Gender { female, male, unknown };

const char* to_string(Gender g);

// One shelving or rating action as it appears in the input log.
struct RawEvent {
  std::string user_id;
  std::string item_id;
  int64_t timestamp = 0;       // epoch seconds UTC, > 0
  std::optional<int> rating;   // 1..5 when present
};

// Deduplicated summary of all events between one user and one item; the atom
// of every downstream computation.
struct InteractionRecord {
  std::string user_id;
  std::string item_id;
  int64_t first_ts = 0;
  int64_t last_ts = 0;
  std::optional<int> last_rating;
};

using Records = std::vector<InteractionRecord>;

// Per-item normalized genre distribution over a vocabulary discovered at
// load time. Rows are sparse (genre index, probability) pairs sorted by
// genre index; each row sums to 1.
class GenreTable {
 public:
  using Row = std::vector<std::pair<uint32_t, double>>;

  GenreTable() = default;
  GenreTable(std::vector<std::string> vocabulary,
             std::unordered_map<std::string, Row> rows)
      : vocabulary_(std::move(vocabulary)), rows_(std::move(rows)) {}

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const Row* find(const std::string& item_id) const {
    auto it = rows_.find(item_id);
    return it == rows_.end() ? nullptr : &it->second;
  }
  size_t item_count() const { return rows_.size(); }

 private:
  std::vector<std::string> vocabulary_;  // sorted genre names
  std::unordered_map<std::string, Row> rows_;
};

// Primary author and gender label per item, plus the author-level index.
class AuthorTable {
 public:
  struct PrimaryAuthor {
    std::string author_id;
    Gender gender = Gender::unknown;
  };

  AuthorTable() = default;
  AuthorTable(std::unordered_map<std::string, PrimaryAuthor> by_item,
              std::unordered_map<std::string, Gender> by_author)
      : by_item_(std::move(by_item)), by_author_(std::move(by_author)) {}

  const PrimaryAuthor* find(const std::string& item_id) const {
    auto it = by_item_.find(item_id);
    return it == by_item_.end() ? nullptr : &it->second;
  }
  std::optional<Gender> author_gender(const std::string& author_id) const {
    auto it = by_author_.find(author_id);
    if (it == by_author_.end()) return std::nullopt;
    return it->second;
  }
  // Gender of the item's primary author; items without an author row count
  // as unknown.
  Gender item_gender(const std::string& item_id) const {
    const auto* primary = find(item_id);
    return primary ? primary->gender : Gender::unknown;
  }
  size_t item_count() const { return by_item_.size(); }
  size_t author_count() const { return by_author_.size(); }

 private:
  std::unordered_map<std::string, PrimaryAuthor> by_item_;
  std::unordered_map<std::string, Gender> by_author_;
};

// Ordered top-k recommendation for one user; position 1 is items.front().
struct RankedList {
  std::string user_id;
  std::vector<std::string> items;
};

}  // namespace recaudit
