#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "recaudit/matrix.hpp"
#include "recaudit/types.hpp"

namespace recaudit {

struct ItemKnnConfig {
  int n_neighbors = 20;
  double min_sim = 1e-6;
};

struct ImplicitMfConfig {
  int d = 50;
  double reg = 0.1;
  double alpha = 40.0;
  int iterations = 20;
  uint64_t seed = 0;
};

struct BprConfig {
  int d = 50;
  double learn_rate = 0.05;
  double reg = 0.01;
  int epochs = 10;
  uint64_t seed = 0;
};

// Non-personalized popularity ranking: score = distinct users in the window.
struct MostPopModel {
  std::vector<double> scores;  // per item index
};

// Truncated item-item cosine similarity over L2-normalized binary columns.
struct ItemKnnModel {
  // neighbors[i]: up to n_neighbors most similar items, similarity
  // descending with index ascending on ties.
  std::vector<std::vector<std::pair<uint32_t, double>>> neighbors;
  // influence[j]: (i, sim) for every i with j in neighbors[i]; this is the
  // transpose used when scoring a user's profile.
  std::vector<std::vector<std::pair<uint32_t, double>>> influence;
};

struct ImplicitMfModel {
  Eigen::MatrixXd user_factors;  // n_users x d
  Eigen::MatrixXd item_factors;  // n_items x d
  // Confidence-weighted objective after each half-sweep (2 per iteration).
  std::vector<double> objective;
};

struct BprModel {
  Eigen::MatrixXd user_factors;  // n_users x d
  Eigen::MatrixXd item_factors;  // n_items x d
  Eigen::VectorXd item_bias;     // n_items
};

using TrainedModel = std::variant<MostPopModel, ItemKnnModel, ImplicitMfModel, BprModel>;

// Regularized per-triple objective maximized by the BPR update:
//   ln sigmoid(u.(vi - vj) + bi - bj)
//   - (reg/2) (|u|^2 + |vi|^2 + |vj|^2 + bi^2 + bj^2)
double bpr_triple_objective(std::span<const double> u, std::span<const double> vi,
                            std::span<const double> vj, double bi, double bj, double reg);

// Gradient of bpr_triple_objective. The trainer steps learn_rate times this.
void bpr_triple_gradient(std::span<const double> u, std::span<const double> vi,
                         std::span<const double> vj, double bi, double bj, double reg,
                         std::span<double> gu, std::span<double> gvi, std::span<double> gvj,
                         double& gbi, double& gbj);

MostPopModel train_mostpop(const InteractionMatrix&);
ItemKnnModel train_itemknn(const InteractionMatrix&, const ItemKnnConfig& = {});
// workers parallelizes the per-row least-squares solves; results do not
// depend on the worker count.
ImplicitMfModel train_implicitmf(const InteractionMatrix&, const ImplicitMfConfig& = {},
                                 int workers = 1);
BprModel train_bpr(const InteractionMatrix&, const BprConfig& = {});

// Scores every item for the user; entries with no defined score (ItemKNN
// items sharing no neighbor with the profile) are marked invalid.
void score_all(const TrainedModel&, const InteractionMatrix&, uint32_t user,
               std::vector<double>& scores, std::vector<uint8_t>& valid);

// Top-k items by descending score, index ascending on ties, with the user's
// train-window profile removed before truncation. Throws
// std::invalid_argument for a user absent from the matrix.
RankedList recommend(const TrainedModel&, const InteractionMatrix&, const std::string& user_id,
                     int k = 100);

}  // namespace recaudit
