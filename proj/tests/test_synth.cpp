#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "recaudit/calendar.hpp"
#include "recaudit/errors.hpp"
#include "recaudit/ingest.hpp"
#include "recaudit/synth.hpp"

using namespace recaudit;

namespace {

std::vector<RawEvent> events_of(const SynthOutput& out) {
  std::istringstream in(out.interactions_csv);
  return parse_interactions(in);
}

// author_id -> gender token, one entry per distinct author in the file.
std::map<std::string, std::string> author_genders(const SynthOutput& out) {
  std::map<std::string, std::string> genders;
  std::istringstream in(out.authors_csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    genders[line.substr(a + 1, b - a - 1)] = line.substr(c + 1);
  }
  return genders;
}

std::map<std::string, std::string> item_gender_tokens(const SynthOutput& out) {
  std::map<std::string, std::string> by_item;
  std::istringstream in(out.authors_csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
    (void)b;
    by_item[line.substr(0, a)] = line.substr(c + 1);
  }
  return by_item;
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("same params and seed reproduce bytes; a new seed does not") {
    SynthParams p;
    p.n_users = 40;
    p.n_items = 30;
    p.n_authors = 15;
    p.n_genres = 4;
    p.months = 5;
    p.seed = 11;
    auto a = generate(p);
    auto b = generate(p);
    CHECK(a.interactions_csv == b.interactions_csv);
    CHECK(a.genres_csv == b.genres_csv);
    CHECK(a.authors_csv == b.authors_csv);
    p.seed = 12;
    auto c = generate(p);
    CHECK(a.interactions_csv != c.interactions_csv);
  }

  TEST_CASE("generated tables pass ingestion end to end") {
    SynthParams p;
    p.n_users = 60;
    p.n_items = 40;
    p.n_authors = 20;
    p.n_genres = 5;
    p.months = 6;
    p.seed = 21;
    auto out = generate(p);

    auto events = events_of(out);
    CHECK(!events.empty());
    auto records = deduplicate(events);
    CHECK(!records.empty());
    CHECK(records.size() <= events.size());

    std::istringstream gin(out.genres_csv);
    auto genres = load_genres(gin);
    CHECK(genres.vocabulary().size() == 5);
    CHECK(genres.item_count() == 40);  // every item gets at least one genre

    std::istringstream ain(out.authors_csv);
    auto authors = load_authors(ain);
    CHECK(authors.item_count() == 40);
    CHECK(authors.author_count() <= 20);

    // Interactions only reference known users and items within range.
    int64_t lo = cal::month_start(p.start_month);
    int64_t hi = cal::month_start(cal::add_months(p.start_month, static_cast<int>(p.months)));
    for (const auto& e : events) {
      CHECK(e.timestamp >= lo);
      CHECK(e.timestamp < hi);
      CHECK(genres.find(e.item_id) != nullptr);
      CHECK(authors.find(e.item_id) != nullptr);
      if (e.rating) {
        CHECK(*e.rating >= 1);
        CHECK(*e.rating <= 5);
      }
    }
  }

  TEST_CASE("popularity exponent controls event concentration") {
    SynthParams p;
    p.n_users = 400;
    p.n_items = 200;
    p.n_authors = 80;
    p.n_genres = 4;
    p.months = 6;
    p.interactions_per_user_per_month = 4.0;
    p.seed = 31;

    auto gini_of_events = [](const SynthOutput& out) {
      std::map<std::string, double> counts;
      for (const auto& e : events_of(out)) counts[e.item_id] += 1.0;
      std::vector<double> values;
      for (const auto& [i, c] : counts) values.push_back(c);
      return oracle::gini(values);
    };

    p.popularity_exponent = 0.0;
    double flat = gini_of_events(generate(p));
    p.popularity_exponent = 1.2;
    double skewed = gini_of_events(generate(p));
    CHECK(flat < 0.15);
    CHECK(skewed > 0.6);
    CHECK(skewed > flat);
  }

  TEST_CASE("female fraction sets the share of author genders") {
    SynthParams p;
    p.n_users = 10;
    p.n_items = 1500;
    p.n_authors = 1200;
    p.n_genres = 3;
    p.months = 1;
    p.interactions_per_user_per_month = 1.0;
    p.female_fraction = 0.5;
    p.seed = 41;
    auto genders = author_genders(generate(p));
    REQUIRE(genders.size() > 800);
    double female = 0, total = 0;
    for (const auto& [a, g] : genders) {
      total += 1;
      if (g == "female") female += 1;
      else CHECK(g == "male");
    }
    double share = female / total;
    CHECK(share > 0.45);
    CHECK(share < 0.55);

    p.female_fraction = 0.0;
    for (const auto& [a, g] : author_genders(generate(p))) CHECK(g == "male");
  }

  TEST_CASE("activity drift scales monthly event volume") {
    SynthParams p;
    p.n_users = 800;
    p.n_items = 100;
    p.n_authors = 40;
    p.n_genres = 3;
    p.months = 2;
    p.interactions_per_user_per_month = 2.0;
    p.drift.activity = {1.0, 3.0};
    p.seed = 51;
    auto out = generate(p);
    int64_t split = cal::month_start(cal::add_months(p.start_month, 1));
    double m1 = 0, m2 = 0;
    for (const auto& e : events_of(out)) (e.timestamp < split ? m1 : m2) += 1;
    REQUIRE(m1 > 1000);
    double ratio = m2 / m1;
    CHECK(ratio > 2.4);
    CHECK(ratio < 3.6);
  }

  TEST_CASE("female share drift steers event mass toward female authors") {
    SynthParams p;
    p.n_users = 1500;
    p.n_items = 300;
    p.n_authors = 120;
    p.n_genres = 3;
    p.months = 2;
    p.interactions_per_user_per_month = 3.0;
    p.female_fraction = 0.25;
    p.drift.female_share = {1.0, 2.0};
    p.seed = 61;
    auto out = generate(p);
    auto by_item = item_gender_tokens(out);
    int64_t split = cal::month_start(cal::add_months(p.start_month, 1));
    double f1 = 0, n1 = 0, f2 = 0, n2 = 0;
    for (const auto& e : events_of(out)) {
      bool female = by_item.at(e.item_id) == "female";
      if (e.timestamp < split) {
        n1 += 1;
        if (female) f1 += 1;
      } else {
        n2 += 1;
        if (female) f2 += 1;
      }
    }
    REQUIRE(n1 > 1000);
    REQUIRE(n2 > 1000);
    // Targets are fraction x multiplier: 0.25, then 0.5.
    CHECK(f1 / n1 == doctest::Approx(0.25).epsilon(0.2));
    CHECK(f2 / n2 == doctest::Approx(0.50).epsilon(0.2));
  }

  TEST_CASE("taste groups leave marginal popularity recognizable") {
    SynthParams p;
    p.n_users = 300;
    p.n_items = 60;
    p.n_authors = 30;
    p.n_genres = 3;
    p.months = 3;
    p.taste_groups = 6;
    p.taste_alpha = 0.1;
    p.seed = 71;
    auto out = generate(p);
    CHECK(!events_of(out).empty());
    // Grouping must not invent items outside the catalog.
    std::istringstream gin(out.genres_csv);
    auto genres = load_genres(gin);
    for (const auto& e : events_of(out)) CHECK(genres.find(e.item_id) != nullptr);
  }

  TEST_CASE("generate_files writes the same bytes generate returns") {
    namespace fs = std::filesystem;
    SynthParams p;
    p.n_users = 20;
    p.n_items = 15;
    p.n_authors = 8;
    p.n_genres = 3;
    p.months = 2;
    p.seed = 81;
    auto dir = fs::temp_directory_path() / "recaudit_synth_test";
    fs::remove_all(dir);
    generate_files(p, dir.string());
    auto slurp = [](const fs::path& path) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      return buf.str();
    };
    auto out = generate(p);
    CHECK(slurp(dir / "interactions.csv") == out.interactions_csv);
    CHECK(slurp(dir / "genres.csv") == out.genres_csv);
    CHECK(slurp(dir / "authors.csv") == out.authors_csv);
    fs::remove_all(dir);
  }

  TEST_CASE("parameter validation") {
    SynthParams p;
    p.n_users = 0;
    CHECK_THROWS_AS(generate(p), ConfigError);
    p = {};
    p.popularity_exponent = -0.1;
    CHECK_THROWS_AS(generate(p), ConfigError);
    p = {};
    p.female_fraction = 1.5;
    CHECK_THROWS_AS(generate(p), ConfigError);
    p = {};
    p.genre_concentration = 0.0;
    CHECK_THROWS_AS(generate(p), ConfigError);
    p = {};
    p.taste_groups = 0;
    CHECK_THROWS_AS(generate(p), ConfigError);
    p = {};
    p.months = 3;
    p.drift.activity = {1.0, 2.0};  // wrong length
    CHECK_THROWS_AS(generate(p), ConfigError);
    p = {};
    p.months = 2;
    p.drift.female_share = {1.0, -1.0};
    CHECK_THROWS_AS(generate(p), ConfigError);
  }
}
