#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "recaudit/calendar.hpp"

namespace recaudit {

// Per-month multipliers applied on top of the base rates. Empty means flat;
// otherwise the vector length must equal the number of generated months.
struct DriftSpec {
  std::vector<double> activity;
  std::vector<double> female_share;
};

struct SynthParams {
  uint32_t n_users = 1000;
  uint32_t n_items = 500;
  uint32_t n_authors = 300;
  uint32_t n_genres = 12;
  uint32_t months = 24;
  double interactions_per_user_per_month = 3.0;
  double popularity_exponent = 1.1;   // item choice proportional to rank^-s
  double female_fraction = 0.4;
  double genre_concentration = 0.3;   // symmetric Dirichlet over genres
  // Optional latent interest structure: items are spread round-robin over
  // taste_groups pools and each user draws a Dirichlet(taste_alpha)
  // preference over pools. One pool reduces to pure global popularity.
  uint32_t taste_groups = 1;
  double taste_alpha = 0.2;
  cal::Month start_month = std::chrono::year{2007} / std::chrono::January;
  DriftSpec drift;
  uint64_t seed = 0;
};

struct SynthOutput {
  std::string interactions_csv;
  std::string genres_csv;
  std::string authors_csv;
};

SynthOutput generate(const SynthParams& params);

// Writes interactions.csv, genres.csv, authors.csv under dir.
void generate_files(const SynthParams& params, const std::string& dir);

}  // namespace recaudit
