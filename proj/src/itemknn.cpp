#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "recaudit/errors.hpp"
#include "recaudit/models.hpp"

namespace recaudit {

// Item-item cosine over binary interaction columns. Row i of the model keeps
// the n_neighbors most similar items with similarity above min_sim, ordered
// by similarity descending and item index ascending on ties.
ItemKnnModel train_itemknn(const InteractionMatrix& m, const ItemKnnConfig& cfg) {
  if (cfg.n_neighbors < 1) throw ConfigError("itemknn: n_neighbors must be at least 1");
  if (cfg.min_sim < 0) throw ConfigError("itemknn: min_sim must be non-negative");
  if (m.n_users() == 0 || m.n_items() == 0)
    throw TrainError("itemknn: interaction matrix is empty");

  const uint32_t n_items = m.n_items();
  std::vector<double> inv_norm(n_items);
  for (uint32_t i = 0; i < n_items; ++i)
    inv_norm[i] = 1.0 / std::sqrt(static_cast<double>(m.item_users(i).size()));

  ItemKnnModel model;
  model.neighbors.resize(n_items);
  model.influence.resize(n_items);

  // Co-occurrence counts for one target item at a time, accumulated through
  // the profiles of its users. touched tracks which slots need resetting.
  std::vector<uint32_t> co(n_items, 0);
  std::vector<uint32_t> touched;
  std::vector<std::pair<uint32_t, double>> candidates;
  for (uint32_t i = 0; i < n_items; ++i) {
    touched.clear();
    for (uint32_t u : m.item_users(i)) {
      for (uint32_t j : m.user_items(u)) {
        if (j == i) continue;
        if (co[j]++ == 0) touched.push_back(j);
      }
    }
    candidates.clear();
    for (uint32_t j : touched) {
      double sim = static_cast<double>(co[j]) * inv_norm[i] * inv_norm[j];
      if (sim > cfg.min_sim) candidates.emplace_back(j, sim);
      co[j] = 0;
    }
    auto better = [](const std::pair<uint32_t, double>& a, const std::pair<uint32_t, double>& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    };
    size_t keep = std::min<size_t>(candidates.size(), static_cast<size_t>(cfg.n_neighbors));
    std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(), better);
    candidates.resize(keep);
    model.neighbors[i] = candidates;
  }

  // influence is the transpose: influence[j] lists (i, sim) for every item i
  // that keeps j as a neighbor. Built in ascending i, so each list is sorted.
  for (uint32_t i = 0; i < n_items; ++i)
    for (const auto& [j, sim] : model.neighbors[i]) model.influence[j].emplace_back(i, sim);

  return model;
}

}  // namespace recaudit
