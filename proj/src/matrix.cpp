#include "recaudit/matrix.hpp"

#include <algorithm>

namespace recaudit {

namespace {

std::optional<uint32_t> index_of(const std::vector<std::string>& sorted, const std::string& id) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
  if (it == sorted.end() || *it != id) return std::nullopt;
  return static_cast<uint32_t>(it - sorted.begin());
}

}  // namespace

InteractionMatrix InteractionMatrix::build(const Records& records, TimeWindow window) {
  InteractionMatrix m;

  std::vector<const InteractionRecord*> in_window;
  for (const InteractionRecord& r : records)
    if (window.contains(r.last_ts)) in_window.push_back(&r);

  for (const InteractionRecord* r : in_window) {
    m.user_ids_.push_back(r->user_id);
    m.item_ids_.push_back(r->item_id);
  }
  auto dedupe_sort = [](std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedupe_sort(m.user_ids_);
  dedupe_sort(m.item_ids_);

  // Records are unique per (user, item); the unique pass below only guards
  // against callers feeding raw, un-deduplicated data.
  std::vector<std::pair<uint32_t, uint32_t>> entries;
  entries.reserve(in_window.size());
  for (const InteractionRecord* r : in_window)
    entries.emplace_back(*index_of(m.user_ids_, r->user_id), *index_of(m.item_ids_, r->item_id));
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

  m.row_offsets_.assign(m.user_ids_.size() + 1, 0);
  m.col_offsets_.assign(m.item_ids_.size() + 1, 0);
  for (auto [u, i] : entries) {
    ++m.row_offsets_[u + 1];
    ++m.col_offsets_[i + 1];
  }
  for (size_t k = 1; k < m.row_offsets_.size(); ++k) m.row_offsets_[k] += m.row_offsets_[k - 1];
  for (size_t k = 1; k < m.col_offsets_.size(); ++k) m.col_offsets_[k] += m.col_offsets_[k - 1];

  m.row_items_.resize(entries.size());
  m.col_users_.resize(entries.size());
  std::vector<size_t> rpos(m.row_offsets_.begin(), m.row_offsets_.end() - 1);
  std::vector<size_t> cpos(m.col_offsets_.begin(), m.col_offsets_.end() - 1);
  for (auto [u, i] : entries) {
    m.row_items_[rpos[u]++] = i;
    m.col_users_[cpos[i]++] = u;
  }
  return m;
}

bool InteractionMatrix::has(uint32_t u, uint32_t i) const {
  auto row = user_items(u);
  return std::binary_search(row.begin(), row.end(), i);
}

void InteractionMatrix::entry(size_t idx, uint32_t& user, uint32_t& item) const {
  auto it = std::upper_bound(row_offsets_.begin(), row_offsets_.end(), idx);
  user = static_cast<uint32_t>(it - row_offsets_.begin() - 1);
  item = row_items_[idx];
}

std::optional<uint32_t> InteractionMatrix::user_index(const std::string& id) const {
  return index_of(user_ids_, id);
}

std::optional<uint32_t> InteractionMatrix::item_index(const std::string& id) const {
  return index_of(item_ids_, id);
}

}  // namespace recaudit
