#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "recaudit/errors.hpp"
#include "recaudit/models.hpp"
#include "recaudit/rng.hpp"

namespace recaudit {

double bpr_triple_objective(std::span<const double> u, std::span<const double> vi,
                            std::span<const double> vj, double bi, double bj, double reg) {
  double xhat = bi - bj;
  for (size_t f = 0; f < u.size(); ++f) xhat += u[f] * (vi[f] - vj[f]);
  double sq = bi * bi + bj * bj;
  for (size_t f = 0; f < u.size(); ++f) sq += u[f] * u[f] + vi[f] * vi[f] + vj[f] * vj[f];
  // ln sigmoid(x) written as -ln(1 + e^-x) for numerical range.
  return -std::log1p(std::exp(-xhat)) - 0.5 * reg * sq;
}

void bpr_triple_gradient(std::span<const double> u, std::span<const double> vi,
                         std::span<const double> vj, double bi, double bj, double reg,
                         std::span<double> gu, std::span<double> gvi, std::span<double> gvj,
                         double& gbi, double& gbj) {
  double xhat = bi - bj;
  for (size_t f = 0; f < u.size(); ++f) xhat += u[f] * (vi[f] - vj[f]);
  double g = 1.0 / (1.0 + std::exp(xhat));  // sigmoid(-xhat)
  for (size_t f = 0; f < u.size(); ++f) {
    gu[f] = g * (vi[f] - vj[f]) - reg * u[f];
    gvi[f] = g * u[f] - reg * vi[f];
    gvj[f] = -g * u[f] - reg * vj[f];
  }
  gbi = g - reg * bi;
  gbj = -g - reg * bj;
}

// Stochastic gradient ascent on the pairwise objective, one sampled triple
// per observed interaction and epoch: (u, i) uniform over matrix entries,
// j rejection-sampled uniformly from the user's non-interacted items.
BprModel train_bpr(const InteractionMatrix& m, const BprConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("bpr: d must be at least 1");
  if (cfg.epochs < 1) throw ConfigError("bpr: epochs must be at least 1");
  if (cfg.learn_rate <= 0) throw ConfigError("bpr: learn_rate must be positive");
  if (cfg.reg < 0) throw ConfigError("bpr: reg must be non-negative");
  if (m.n_users() == 0 || m.n_items() == 0)
    throw TrainError("bpr: interaction matrix is empty");
  if (m.n_items() < 2)
    throw TrainError("bpr: need at least two items to sample negatives");

  const uint32_t n_users = m.n_users();
  const uint32_t n_items = m.n_items();
  const size_t nnz = m.nnz();
  const size_t d = static_cast<size_t>(cfg.d);

  std::vector<double> U(static_cast<size_t>(n_users) * d);
  std::vector<double> V(static_cast<size_t>(n_items) * d);
  std::vector<double> b(n_items, 0.0);

  Rng rng(cfg.seed);
  for (auto& x : U) x = 0.01 * rng.normal();
  for (auto& x : V) x = 0.01 * rng.normal();

  const double lr = cfg.learn_rate;
  std::vector<double> gu(d), gvi(d), gvj(d);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t step = 0; step < nnz; ++step) {
      uint32_t u, i;
      m.entry(rng.uniform_int(nnz), u, i);
      if (m.user_items(u).size() >= n_items) continue;
      uint32_t j;
      do {
        j = static_cast<uint32_t>(rng.uniform_int(n_items));
      } while (m.has(u, j));

      std::span<double> uu(U.data() + static_cast<size_t>(u) * d, d);
      std::span<double> vi(V.data() + static_cast<size_t>(i) * d, d);
      std::span<double> vj(V.data() + static_cast<size_t>(j) * d, d);
      double gbi, gbj;
      bpr_triple_gradient(uu, vi, vj, b[i], b[j], cfg.reg, gu, gvi, gvj, gbi, gbj);
      for (size_t f = 0; f < d; ++f) {
        uu[f] += lr * gu[f];
        vi[f] += lr * gvi[f];
        vj[f] += lr * gvj[f];
      }
      b[i] += lr * gbi;
      b[j] += lr * gbj;
    }
    for (double x : U)
      if (!std::isfinite(x))
        throw TrainError("bpr: user factors not finite after epoch " + std::to_string(epoch));
    for (double x : V)
      if (!std::isfinite(x))
        throw TrainError("bpr: item factors not finite after epoch " + std::to_string(epoch));
    for (double x : b)
      if (!std::isfinite(x))
        throw TrainError("bpr: item biases not finite after epoch " + std::to_string(epoch));
  }

  BprModel model;
  model.user_factors.resize(n_users, cfg.d);
  model.item_factors.resize(n_items, cfg.d);
  model.item_bias.resize(n_items);
  for (uint32_t r = 0; r < n_users; ++r)
    for (size_t f = 0; f < d; ++f)
      model.user_factors(r, static_cast<Eigen::Index>(f)) = U[static_cast<size_t>(r) * d + f];
  for (uint32_t r = 0; r < n_items; ++r)
    for (size_t f = 0; f < d; ++f)
      model.item_factors(r, static_cast<Eigen::Index>(f)) = V[static_cast<size_t>(r) * d + f];
  for (uint32_t r = 0; r < n_items; ++r) model.item_bias(r) = b[r];
  return model;
}

}  // namespace recaudit
