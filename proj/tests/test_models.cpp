#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "recaudit/errors.hpp"
#include "recaudit/models.hpp"
#include "recaudit/rng.hpp"

using namespace recaudit;

namespace {

InteractionRecord rec(const std::string& u, const std::string& b) {
  return {u, b, 10, 10, std::nullopt};
}

InteractionMatrix matrix_from(const std::vector<std::pair<std::string, std::string>>& cells) {
  Records records;
  for (const auto& [u, b] : cells) records.push_back(rec(u, b));
  return InteractionMatrix::build(records, TimeWindow{0, 100});
}

// Random matrix where every user gets >= 1 item; grid is the dense mirror.
InteractionMatrix random_matrix(Rng& rng, int n_users, int n_items,
                                std::vector<std::vector<int>>* grid = nullptr) {
  std::vector<std::pair<std::string, std::string>> cells;
  std::vector<std::vector<int>> g(n_users, std::vector<int>(n_items, 0));
  for (int u = 0; u < n_users; ++u) {
    int count = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n_items)));
    for (int c = 0; c < count; ++c) {
      int i = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n_items)));
      if (g[u][i]) continue;
      g[u][i] = 1;
      // Zero-padded so id order matches numeric order.
      auto name = [](char prefix, int v) {
        std::string s = std::to_string(v);
        return prefix + std::string(3 - std::min<size_t>(3, s.size()), '0') + s;
      };
      cells.emplace_back(name('u', u), name('b', i));
    }
  }
  if (grid) *grid = g;
  return matrix_from(cells);
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("mostpop scores are distinct-user counts") {
    auto m = matrix_from({{"u1", "A"}, {"u2", "A"}, {"u3", "A"}, {"u1", "B"}, {"u2", "B"},
                          {"u4", "C"}});
    auto model = train_mostpop(m);
    CHECK(model.scores[*m.item_index("A")] == 3);
    CHECK(model.scores[*m.item_index("B")] == 2);
    CHECK(model.scores[*m.item_index("C")] == 1);
    auto list = recommend(TrainedModel{model}, m, "u4", 10);
    CHECK(list.items == std::vector<std::string>{"A", "B"});  // C is u4's profile
  }

  TEST_CASE("mostpop ties rank by ascending item id") {
    auto m = matrix_from({{"u1", "B"}, {"u2", "B"}, {"u1", "A"}, {"u2", "A"}, {"u3", "C"}});
    auto list = recommend(TrainedModel{train_mostpop(m)}, m, "u3", 10);
    CHECK(list.items == std::vector<std::string>{"A", "B"});
  }

  TEST_CASE("mostpop lists are identical up to profile exclusion") {
    auto m = matrix_from({{"u1", "A"}, {"u2", "A"}, {"u2", "B"}, {"u3", "C"}});
    TrainedModel model{train_mostpop(m)};
    auto l3 = recommend(model, m, "u3", 10);   // profile C
    auto l1 = recommend(model, m, "u1", 10);   // profile A
    CHECK(l3.items == std::vector<std::string>{"A", "B"});
    CHECK(l1.items == std::vector<std::string>{"B", "C"});
  }

  TEST_CASE("itemknn: identical user sets give similarity 1") {
    auto m = matrix_from({{"u1", "A"}, {"u1", "B"}, {"u2", "A"}, {"u2", "B"}, {"u3", "C"}});
    auto model = train_itemknn(m);
    uint32_t a = *m.item_index("A"), bix = *m.item_index("B");
    REQUIRE(!model.neighbors[a].empty());
    CHECK(model.neighbors[a][0].first == bix);
    CHECK(model.neighbors[a][0].second == doctest::Approx(1.0));
  }

  TEST_CASE("itemknn: disjoint user sets are not neighbors") {
    auto m = matrix_from({{"u1", "A"}, {"u2", "B"}});
    auto model = train_itemknn(m);
    CHECK(model.neighbors[*m.item_index("A")].empty());
    CHECK(model.neighbors[*m.item_index("B")].empty());
  }

  TEST_CASE("itemknn similarities match the dense cosine oracle") {
    Rng rng(505);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::vector<int>> grid;
      auto m = random_matrix(rng, 4 + static_cast<int>(rng.uniform_int(6)),
                             3 + static_cast<int>(rng.uniform_int(6)), &grid);
      // Dense oracle columns are keyed by item id order == index order.
      std::vector<std::vector<int>> cols(m.n_users(), std::vector<int>(m.n_items(), 0));
      for (uint32_t u = 0; u < m.n_users(); ++u)
        for (uint32_t i : m.user_items(u)) cols[u][i] = 1;
      auto want = oracle::item_cosine(cols);
      ItemKnnConfig cfg;
      cfg.n_neighbors = static_cast<int>(m.n_items());  // no truncation
      auto model = train_itemknn(m, cfg);
      for (uint32_t i = 0; i < m.n_items(); ++i) {
        std::vector<double> got(m.n_items(), 0.0);
        for (auto [j, s] : model.neighbors[i]) got[j] = s;
        for (uint32_t j = 0; j < m.n_items(); ++j) {
          double expect = want[i][j] > cfg.min_sim ? want[i][j] : 0.0;
          CHECK(got[j] == doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("itemknn similarity is symmetric before truncation") {
    Rng rng(606);
    std::vector<std::vector<int>> grid;
    auto m = random_matrix(rng, 8, 8, &grid);
    ItemKnnConfig cfg;
    cfg.n_neighbors = static_cast<int>(m.n_items());
    auto model = train_itemknn(m, cfg);
    std::vector<std::vector<double>> sim(m.n_items(), std::vector<double>(m.n_items(), 0.0));
    for (uint32_t i = 0; i < m.n_items(); ++i)
      for (auto [j, s] : model.neighbors[i]) sim[i][j] = s;
    for (uint32_t i = 0; i < m.n_items(); ++i)
      for (uint32_t j = 0; j < m.n_items(); ++j)
        CHECK(sim[i][j] == doctest::Approx(sim[j][i]).epsilon(1e-12));
  }

  TEST_CASE("itemknn truncation keeps the strongest neighbors") {
    auto m = matrix_from({
        {"u1", "A"}, {"u1", "B"}, {"u2", "A"}, {"u2", "B"},   // A~B strongly
        {"u3", "A"}, {"u3", "C"},                              // A~C weaker
        {"u4", "A"}, {"u4", "D"}, {"u5", "D"},                 // A~D weaker still
    });
    ItemKnnConfig cfg;
    cfg.n_neighbors = 1;
    auto model = train_itemknn(m, cfg);
    auto& na = model.neighbors[*m.item_index("A")];
    REQUIRE(na.size() == 1);
    CHECK(na[0].first == *m.item_index("B"));
  }

  TEST_CASE("itemknn ranking equals brute-force scoring on a toy matrix") {
    // 4 users x 3 items from the module contract.
    auto m = matrix_from({{"u1", "A"}, {"u1", "B"}, {"u2", "A"}, {"u2", "B"}, {"u3", "B"},
                          {"u3", "C"}, {"u4", "A"}});
    std::vector<std::vector<int>> cols(m.n_users(), std::vector<int>(m.n_items(), 0));
    for (uint32_t u = 0; u < m.n_users(); ++u)
      for (uint32_t i : m.user_items(u)) cols[u][i] = 1;
    auto sim = oracle::item_cosine(cols);
    auto model = train_itemknn(m);
    TrainedModel tm{model};
    for (uint32_t u = 0; u < m.n_users(); ++u) {
      // Oracle: score = sum of similarities to profile items, profile
      // excluded, sorted by (score desc, id asc), zero-score items dropped.
      std::vector<std::pair<double, uint32_t>> scored;
      for (uint32_t i = 0; i < m.n_items(); ++i) {
        if (m.has(u, i)) continue;
        double s = 0;
        for (uint32_t j : m.user_items(u))
          if (sim[i][j] > 1e-6) s += sim[i][j];
        if (s > 0) scored.emplace_back(-s, i);
      }
      std::sort(scored.begin(), scored.end());
      std::vector<std::string> want;
      for (auto& [negs, i] : scored) want.push_back(m.item_id(i));
      auto got = recommend(tm, m, m.user_id(u), 100);
      CHECK(got.items == want);
    }
  }

  TEST_CASE("als objective never increases across half-sweeps") {
    Rng rng(707);
    for (int trial = 0; trial < 5; ++trial) {
      auto m = random_matrix(rng, 6 + static_cast<int>(rng.uniform_int(10)),
                             5 + static_cast<int>(rng.uniform_int(10)));
      ImplicitMfConfig cfg;
      cfg.d = 4;
      cfg.iterations = 6;
      cfg.seed = 1000 + static_cast<uint64_t>(trial);
      auto model = train_implicitmf(m, cfg);
      REQUIRE(model.objective.size() == 12);
      for (size_t t = 1; t < model.objective.size(); ++t)
        CHECK(model.objective[t] <= model.objective[t - 1] * (1 + 1e-8) + 1e-12);
    }
  }

  TEST_CASE("als reconstructs a small high-confidence pattern") {
    auto m = matrix_from({{"u1", "A"}, {"u2", "B"}, {"u3", "C"}});
    ImplicitMfConfig cfg;
    cfg.d = 3;
    cfg.reg = 1e-3;
    cfg.alpha = 40;
    cfg.iterations = 100;
    cfg.seed = 5;
    auto model = train_implicitmf(m, cfg);
    for (uint32_t u = 0; u < 3; ++u)
      for (uint32_t i : m.user_items(u)) {
        double pred = model.user_factors.row(u).dot(model.item_factors.row(i));
        CHECK(std::abs(pred - 1.0) < 0.1);
      }
  }

  TEST_CASE("als is bitwise deterministic given the seed") {
    Rng rng(808);
    auto m = random_matrix(rng, 8, 8);
    ImplicitMfConfig cfg;
    cfg.d = 4;
    cfg.iterations = 3;
    cfg.seed = 99;
    auto a = train_implicitmf(m, cfg);
    auto b = train_implicitmf(m, cfg);
    CHECK((a.user_factors.array() == b.user_factors.array()).all());
    CHECK((a.item_factors.array() == b.item_factors.array()).all());
    CHECK(a.objective == b.objective);
    cfg.seed = 100;
    auto c = train_implicitmf(m, cfg);
    CHECK_FALSE((a.user_factors.array() == c.user_factors.array()).all());
  }

  TEST_CASE("als worker count never changes the result") {
    Rng rng(809);
    auto m = random_matrix(rng, 12, 9);
    ImplicitMfConfig cfg;
    cfg.d = 4;
    cfg.iterations = 3;
    cfg.seed = 7;
    auto a = train_implicitmf(m, cfg, 1);
    auto b = train_implicitmf(m, cfg, 4);
    CHECK((a.user_factors.array() == b.user_factors.array()).all());
    CHECK((a.item_factors.array() == b.item_factors.array()).all());
  }

  TEST_CASE("bpr gradient matches central finite differences") {
    Rng rng(909);
    const size_t d = 5;
    const double eps = 1e-6;
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
      std::vector<double> u(d), vi(d), vj(d);
      for (auto& x : u) x = rng.normal();
      for (auto& x : vi) x = rng.normal();
      for (auto& x : vj) x = rng.normal();
      double bi = rng.normal(), bj = rng.normal();
      double reg = trial % 2 == 0 ? 0.0 : 0.03;

      std::vector<double> gu(d), gvi(d), gvj(d);
      double gbi, gbj;
      bpr_triple_gradient(u, vi, vj, bi, bj, reg, gu, gvi, gvj, gbi, gbj);

      auto check = [&](double* slot, double analytic) {
        double keep = *slot;
        *slot = keep + eps;
        double hi = bpr_triple_objective(u, vi, vj, bi, bj, reg);
        *slot = keep - eps;
        double lo = bpr_triple_objective(u, vi, vj, bi, bj, reg);
        *slot = keep;
        double numeric = (hi - lo) / (2 * eps);
        double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
        CHECK(std::abs(numeric - analytic) / scale < 1e-4);
        ++checked;
      };
      for (size_t f = 0; f < d; ++f) {
        check(&u[f], gu[f]);
        check(&vi[f], gvi[f]);
        check(&vj[f], gvj[f]);
      }
      check(&bi, gbi);
      check(&bj, gbj);
    }
    CHECK(checked >= 100);
  }

  TEST_CASE("bpr separates the seen item from the unseen one") {
    // Items exist only through interactions, so the unseen item enters the
    // catalog via a second user.
    auto two = matrix_from({{"solo", "SEEN"}, {"other", "OTHER"}});
    BprConfig cfg;
    cfg.d = 4;
    cfg.epochs = 400;
    cfg.learn_rate = 0.05;
    cfg.reg = 0.001;
    cfg.seed = 3;
    auto model = train_bpr(two, cfg);
    uint32_t solo = *two.user_index("solo");
    uint32_t seen = *two.item_index("SEEN");
    uint32_t other = *two.item_index("OTHER");
    double s_seen = model.user_factors.row(solo).dot(model.item_factors.row(seen)) +
                    model.item_bias(seen);
    double s_other = model.user_factors.row(solo).dot(model.item_factors.row(other)) +
                     model.item_bias(other);
    CHECK(s_seen > s_other);
  }

  TEST_CASE("bpr is deterministic given the seed") {
    Rng rng(111);
    auto m = random_matrix(rng, 10, 8);
    BprConfig cfg;
    cfg.d = 4;
    cfg.epochs = 5;
    cfg.seed = 17;
    auto a = train_bpr(m, cfg);
    auto b = train_bpr(m, cfg);
    CHECK((a.user_factors.array() == b.user_factors.array()).all());
    CHECK((a.item_factors.array() == b.item_factors.array()).all());
    CHECK((a.item_bias.array() == b.item_bias.array()).all());
    cfg.seed = 18;
    auto c = train_bpr(m, cfg);
    CHECK_FALSE((a.user_factors.array() == c.user_factors.array()).all());
  }

  TEST_CASE("bpr training replay through the public gradient reproduces it") {
    Rng data_rng(222);
    auto m = random_matrix(data_rng, 6, 5);
    BprConfig cfg;
    cfg.d = 3;
    cfg.epochs = 2;
    cfg.seed = 55;
    auto model = train_bpr(m, cfg);

    const size_t d = 3;
    std::vector<double> U(m.n_users() * d), V(m.n_items() * d), b(m.n_items(), 0.0);
    Rng rng(cfg.seed);
    for (auto& x : U) x = 0.01 * rng.normal();
    for (auto& x : V) x = 0.01 * rng.normal();
    std::vector<double> gu(d), gvi(d), gvj(d);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch)
      for (size_t step = 0; step < m.nnz(); ++step) {
        uint32_t u, i;
        m.entry(rng.uniform_int(m.nnz()), u, i);
        if (m.user_items(u).size() >= m.n_items()) continue;
        uint32_t j;
        do {
          j = static_cast<uint32_t>(rng.uniform_int(m.n_items()));
        } while (m.has(u, j));
        std::span<double> uu(U.data() + u * d, d), vi(V.data() + i * d, d),
            vj(V.data() + j * d, d);
        double gbi, gbj;
        bpr_triple_gradient(uu, vi, vj, b[i], b[j], cfg.reg, gu, gvi, gvj, gbi, gbj);
        for (size_t f = 0; f < d; ++f) {
          uu[f] += cfg.learn_rate * gu[f];
          vi[f] += cfg.learn_rate * gvi[f];
          vj[f] += cfg.learn_rate * gvj[f];
        }
        b[i] += cfg.learn_rate * gbi;
        b[j] += cfg.learn_rate * gbj;
      }
    for (uint32_t r = 0; r < m.n_users(); ++r)
      for (size_t f = 0; f < d; ++f)
        CHECK(model.user_factors(r, static_cast<int>(f)) == U[r * d + f]);
    for (uint32_t r = 0; r < m.n_items(); ++r) {
      for (size_t f = 0; f < d; ++f)
        CHECK(model.item_factors(r, static_cast<int>(f)) == V[r * d + f]);
      CHECK(model.item_bias(r) == b[r]);
    }
  }

  TEST_CASE("recommend respects k and never returns profile items or duplicates") {
    Rng rng(333);
    auto m = random_matrix(rng, 10, 12);
    std::vector<TrainedModel> models;
    models.emplace_back(train_mostpop(m));
    models.emplace_back(train_itemknn(m));
    ImplicitMfConfig mf;
    mf.d = 4;
    mf.iterations = 3;
    models.emplace_back(train_implicitmf(m, mf));
    BprConfig bp;
    bp.d = 4;
    bp.epochs = 3;
    models.emplace_back(train_bpr(m, bp));
    for (const auto& model : models) {
      for (uint32_t u = 0; u < m.n_users(); ++u) {
        for (int k : {1, 3, 100}) {
          auto list = recommend(model, m, m.user_id(u), k);
          CHECK(list.items.size() <= static_cast<size_t>(k));
          std::set<std::string> seen;
          for (const auto& item : list.items) {
            CHECK(seen.insert(item).second);
            CHECK_FALSE(m.has(u, *m.item_index(item)));
          }
          auto again = recommend(model, m, m.user_id(u), k);
          CHECK(again.items == list.items);
        }
      }
    }
  }

  TEST_CASE("recommend rejects unknown users and bad k") {
    auto m = matrix_from({{"u1", "A"}, {"u2", "B"}});
    TrainedModel model{train_mostpop(m)};
    CHECK_THROWS_AS(recommend(model, m, "ghost", 5), std::invalid_argument);
    CHECK_THROWS_AS(recommend(model, m, "u1", 0), std::invalid_argument);
  }

  TEST_CASE("training on an empty matrix fails cleanly") {
    auto m = InteractionMatrix::build({}, TimeWindow{0, 100});
    CHECK_THROWS_AS(train_mostpop(m), TrainError);
    CHECK_THROWS_AS(train_itemknn(m), TrainError);
    CHECK_THROWS_AS(train_implicitmf(m), TrainError);
    CHECK_THROWS_AS(train_bpr(m), TrainError);
  }

  TEST_CASE("bpr needs a second item to sample negatives") {
    auto m = matrix_from({{"u1", "A"}});
    CHECK_THROWS_AS(train_bpr(m), TrainError);
  }

  TEST_CASE("model config validation") {
    auto m = matrix_from({{"u1", "A"}, {"u2", "B"}});
    ItemKnnConfig knn;
    knn.n_neighbors = 0;
    CHECK_THROWS_AS(train_itemknn(m, knn), ConfigError);
    ImplicitMfConfig mf;
    mf.d = 0;
    CHECK_THROWS_AS(train_implicitmf(m, mf), ConfigError);
    BprConfig bp;
    bp.learn_rate = 0;
    CHECK_THROWS_AS(train_bpr(m, bp), ConfigError);
  }
}
