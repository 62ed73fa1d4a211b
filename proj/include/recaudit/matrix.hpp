#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recaudit/types.hpp"
#include "recaudit/windowing.hpp"

namespace recaudit {

// Binary user-by-item interaction matrix for one train window, stored in
// both row-compressed and column-compressed form. Index maps are dense and
// assigned in ascending id order, so "ascending index" and "ascending id"
// rank identically. Users and items with no interaction in the window do not
// appear.
class InteractionMatrix {
 public:
  static InteractionMatrix build(const Records&, TimeWindow window);

  uint32_t n_users() const { return static_cast<uint32_t>(user_ids_.size()); }
  uint32_t n_items() const { return static_cast<uint32_t>(item_ids_.size()); }
  size_t nnz() const { return row_items_.size(); }

  std::span<const uint32_t> user_items(uint32_t u) const {
    return {row_items_.data() + row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]};
  }
  std::span<const uint32_t> item_users(uint32_t i) const {
    return {col_users_.data() + col_offsets_[i], col_offsets_[i + 1] - col_offsets_[i]};
  }

  bool has(uint32_t u, uint32_t i) const;

  // Maps a flat entry index in [0, nnz()) to its (user, item) index pair.
  // Entries are laid out user-major, items ascending within each user.
  void entry(size_t idx, uint32_t& user, uint32_t& item) const;

  const std::string& user_id(uint32_t u) const { return user_ids_[u]; }
  const std::string& item_id(uint32_t i) const { return item_ids_[i]; }
  std::optional<uint32_t> user_index(const std::string& id) const;
  std::optional<uint32_t> item_index(const std::string& id) const;

  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }

 private:
  std::vector<std::string> user_ids_;  // sorted
  std::vector<std::string> item_ids_;  // sorted
  std::vector<size_t> row_offsets_;
  std::vector<uint32_t> row_items_;   // per user, ascending item index
  std::vector<size_t> col_offsets_;
  std::vector<uint32_t> col_users_;   // per item, ascending user index
};

}  // namespace recaudit
