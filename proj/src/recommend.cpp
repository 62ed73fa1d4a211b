#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "recaudit/models.hpp"

namespace recaudit {

namespace {

struct Scorer {
  const InteractionMatrix& m;
  uint32_t user;
  std::vector<double>& scores;
  std::vector<uint8_t>& valid;

  void operator()(const MostPopModel& model) {
    scores = model.scores;
    std::fill(valid.begin(), valid.end(), uint8_t{1});
  }

  // An item is scorable only when at least one profile item keeps it as a
  // neighbor; everything else stays outside the candidate set.
  void operator()(const ItemKnnModel& model) {
    for (uint32_t j : m.user_items(user))
      for (const auto& [i, sim] : model.influence[j]) scores[i] += sim;
    for (uint32_t i = 0; i < m.n_items(); ++i) valid[i] = scores[i] > 0 ? 1 : 0;
  }

  void operator()(const ImplicitMfModel& model) {
    Eigen::VectorXd s = model.item_factors * model.user_factors.row(user).transpose();
    for (uint32_t i = 0; i < m.n_items(); ++i) scores[i] = s(i);
    std::fill(valid.begin(), valid.end(), uint8_t{1});
  }

  void operator()(const BprModel& model) {
    Eigen::VectorXd s =
        model.item_factors * model.user_factors.row(user).transpose() + model.item_bias;
    for (uint32_t i = 0; i < m.n_items(); ++i) scores[i] = s(i);
    std::fill(valid.begin(), valid.end(), uint8_t{1});
  }
};

}  // namespace

void score_all(const TrainedModel& model, const InteractionMatrix& m, uint32_t user,
               std::vector<double>& scores, std::vector<uint8_t>& valid) {
  scores.assign(m.n_items(), 0.0);
  valid.assign(m.n_items(), 0);
  std::visit(Scorer{m, user, scores, valid}, model);
}

RankedList recommend(const TrainedModel& model, const InteractionMatrix& m,
                     const std::string& user_id, int k) {
  if (k < 1) throw std::invalid_argument("recommend: k must be at least 1");
  auto u = m.user_index(user_id);
  if (!u) throw std::invalid_argument("recommend: unknown user id: " + user_id);

  std::vector<double> scores;
  std::vector<uint8_t> valid;
  score_all(model, m, *u, scores, valid);
  for (uint32_t i : m.user_items(*u)) valid[i] = 0;

  std::vector<uint32_t> candidates;
  candidates.reserve(m.n_items());
  for (uint32_t i = 0; i < m.n_items(); ++i)
    if (valid[i]) candidates.push_back(i);

  auto better = [&](uint32_t a, uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  size_t keep = std::min<size_t>(candidates.size(), static_cast<size_t>(k));
  std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(), better);
  candidates.resize(keep);

  RankedList list;
  list.user_id = user_id;
  list.items.reserve(candidates.size());
  for (uint32_t i : candidates) list.items.push_back(m.item_id(i));
  return list;
}

}  // namespace recaudit
