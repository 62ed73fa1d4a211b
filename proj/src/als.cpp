#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "recaudit/errors.hpp"
#include "recaudit/models.hpp"
#include "recaudit/rng.hpp"

namespace recaudit {

namespace {

// Confidence-weighted squared loss plus L2 on both factor matrices:
//   sum over all (u,i) of c_ui (p_ui - U_u . V_i)^2 + reg (|U|^2 + |V|^2)
// with c = 1 for unobserved cells and 1 + alpha for observed ones (p = 1).
// The dense part is evaluated through the Gram matrices, observed cells get
// the difference between weighted and unweighted terms.
double objective(const InteractionMatrix& m, const Eigen::MatrixXd& U,
                 const Eigen::MatrixXd& V, double alpha, double reg) {
  Eigen::MatrixXd gu = U.transpose() * U;
  Eigen::MatrixXd gv = V.transpose() * V;
  double total = gu.cwiseProduct(gv).sum();
  for (uint32_t u = 0; u < m.n_users(); ++u) {
    for (uint32_t i : m.user_items(u)) {
      double pred = U.row(u).dot(V.row(i));
      double r = 1.0 - pred;
      total += (1.0 + alpha) * r * r - pred * pred;
    }
  }
  total += reg * (U.squaredNorm() + V.squaredNorm());
  return total;
}

// Solves the ridge system for every row of out, holding other fixed.
// other_items(r) yields the observed column indices for row r.
template <typename Neighbors>
void solve_side(Eigen::MatrixXd& out, const Eigen::MatrixXd& other, Neighbors other_items,
                double alpha, double reg, int workers) {
  const int d = static_cast<int>(out.cols());
  const Eigen::MatrixXd gram = other.transpose() * other;
  parallel_for(static_cast<uint32_t>(out.rows()), workers, [&](uint32_t r) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += reg;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    for (uint32_t c : other_items(r)) {
      a.selfadjointView<Eigen::Lower>().rankUpdate(other.row(c).transpose(), alpha);
      b += other.row(c).transpose();
    }
    b *= 1.0 + alpha;
    Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(a);
    if (llt.info() == Eigen::Success) {
      out.row(r) = llt.solve(b).transpose();
    } else {
      out.row(r).setConstant(std::numeric_limits<double>::quiet_NaN());
    }
  });
}

}  // namespace

ImplicitMfModel train_implicitmf(const InteractionMatrix& m, const ImplicitMfConfig& cfg,
                                 int workers) {
  if (cfg.d < 1) throw ConfigError("implicitmf: d must be at least 1");
  if (cfg.iterations < 1) throw ConfigError("implicitmf: iterations must be at least 1");
  if (cfg.reg < 0) throw ConfigError("implicitmf: reg must be non-negative");
  if (cfg.alpha < 0) throw ConfigError("implicitmf: alpha must be non-negative");
  if (m.n_users() == 0 || m.n_items() == 0)
    throw TrainError("implicitmf: interaction matrix is empty");

  const uint32_t n_users = m.n_users();
  const uint32_t n_items = m.n_items();
  ImplicitMfModel model;
  model.user_factors.resize(n_users, cfg.d);
  model.item_factors.resize(n_items, cfg.d);

  // Factor entries drawn row by row so the layout is independent of Eigen's
  // storage order.
  Rng rng(cfg.seed);
  for (uint32_t u = 0; u < n_users; ++u)
    for (int f = 0; f < cfg.d; ++f) model.user_factors(u, f) = 0.01 * rng.normal();
  for (uint32_t i = 0; i < n_items; ++i)
    for (int f = 0; f < cfg.d; ++f) model.item_factors(i, f) = 0.01 * rng.normal();

  model.objective.reserve(static_cast<size_t>(cfg.iterations) * 2);
  for (int it = 0; it < cfg.iterations; ++it) {
    solve_side(
        model.user_factors, model.item_factors, [&](uint32_t u) { return m.user_items(u); },
        cfg.alpha, cfg.reg, workers);
    double after_users = objective(m, model.user_factors, model.item_factors, cfg.alpha, cfg.reg);
    model.objective.push_back(after_users);
    if (!std::isfinite(after_users))
      throw TrainError("implicitmf: objective is not finite after user update of iteration " +
                       std::to_string(it));

    solve_side(
        model.item_factors, model.user_factors, [&](uint32_t i) { return m.item_users(i); },
        cfg.alpha, cfg.reg, workers);
    double after_items = objective(m, model.user_factors, model.item_factors, cfg.alpha, cfg.reg);
    model.objective.push_back(after_items);
    if (!std::isfinite(after_items))
      throw TrainError("implicitmf: objective is not finite after item update of iteration " +
                       std::to_string(it));
  }
  return model;
}

}  // namespace recaudit
