#include "recaudit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "recaudit/errors.hpp"
#include "recaudit/rng.hpp"
#include "recaudit/types.hpp"

namespace recaudit {

namespace {

void validate(const SynthParams& p) {
  if (p.n_users < 1 || p.n_items < 1 || p.n_authors < 1 || p.n_genres < 1 || p.months < 1)
    throw ConfigError("synth: all counts must be at least 1");
  if (p.interactions_per_user_per_month < 0)
    throw ConfigError("synth: interactions_per_user_per_month must be non-negative");
  if (p.popularity_exponent < 0) throw ConfigError("synth: popularity_exponent must be >= 0");
  if (p.female_fraction < 0 || p.female_fraction > 1)
    throw ConfigError("synth: female_fraction must lie in [0,1]");
  if (p.genre_concentration <= 0) throw ConfigError("synth: genre_concentration must be positive");
  if (p.taste_groups < 1) throw ConfigError("synth: taste_groups must be at least 1");
  if (p.taste_alpha <= 0) throw ConfigError("synth: taste_alpha must be positive");
  auto check_drift = [&](const std::vector<double>& v, const char* name) {
    if (v.empty()) return;
    if (v.size() != p.months)
      throw ConfigError(std::string("synth: drift.") + name + " must have one entry per month");
    for (double m : v)
      if (!(m >= 0)) throw ConfigError(std::string("synth: drift.") + name + " must be >= 0");
  };
  check_drift(p.drift.activity, "activity");
  check_drift(p.drift.female_share, "female_share");
}

std::string make_label(char prefix, uint32_t index, size_t width) {
  std::string digits = std::to_string(index);
  std::string out(1, prefix);
  out.append(width - digits.size(), '0');
  out += digits;
  return out;
}

size_t label_width(uint32_t n) { return std::to_string(n - 1).size(); }

// Cumulative-mass sampler over a fixed subset of items.
struct Pool {
  std::vector<uint32_t> items;
  std::vector<double> cum;

  void add(uint32_t item, double weight) {
    items.push_back(item);
    cum.push_back((cum.empty() ? 0.0 : cum.back()) + weight);
  }
  double mass() const { return cum.empty() ? 0.0 : cum.back(); }
  bool empty() const { return items.empty(); }

  uint32_t draw(Rng& rng) const {
    double u = rng.uniform() * mass();
    size_t idx = std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
    if (idx >= items.size()) idx = items.size() - 1;
    return items[idx];
  }
};

// One taste group's item universe split by primary-author gender, so drift
// targets can be hit by occasionally forcing one side.
struct GroupSampler {
  Pool all;
  Pool female;
  Pool other;

  double female_mass_share() const {
    double m = all.mass();
    return m > 0 ? female.mass() / m : 0.0;
  }

  uint32_t draw_with_target(Rng& rng, double target) const {
    double p0 = female_mass_share();
    double u = rng.uniform();
    if (target > p0 && p0 < 1.0 && !female.empty()) {
      if (u < (target - p0) / (1.0 - p0)) return female.draw(rng);
    } else if (target < p0 && p0 > 0.0 && !other.empty()) {
      if (u < (p0 - target) / p0) return other.draw(rng);
    }
    return all.draw(rng);
  }
};

int draw_rating(Rng& rng) {
  double u = rng.uniform();
  if (u < 0.05) return 1;
  if (u < 0.15) return 2;
  if (u < 0.35) return 3;
  if (u < 0.70) return 4;
  return 5;
}

}  // namespace

SynthOutput generate(const SynthParams& p) {
  validate(p);
  Rng rng(p.seed);

  const size_t uw = label_width(p.n_users);
  const size_t iw = label_width(p.n_items);
  const size_t aw = label_width(p.n_authors);
  const size_t gw = label_width(p.n_genres);

  // Draw order is fixed: author assignment, author genders, genre rows,
  // user tastes, then events month by month. Changing it would silently
  // reshuffle every downstream draw.
  std::vector<uint32_t> item_author(p.n_items);
  for (auto& a : item_author) a = static_cast<uint32_t>(rng.uniform_int(p.n_authors));

  std::vector<Gender> author_gender(p.n_authors);
  for (auto& g : author_gender)
    g = rng.uniform() < p.female_fraction ? Gender::female : Gender::male;

  SynthOutput out;
  out.genres_csv = "item_id,genre,count\n";
  {
    const int genre_draws = 50;
    std::vector<double> theta(p.n_genres);
    std::vector<uint32_t> counts(p.n_genres);
    for (uint32_t i = 0; i < p.n_items; ++i) {
      rng.dirichlet(p.genre_concentration, theta);
      std::fill(counts.begin(), counts.end(), 0u);
      for (int d = 0; d < genre_draws; ++d) {
        double u = rng.uniform();
        double acc = 0.0;
        uint32_t g = p.n_genres - 1;
        for (uint32_t c = 0; c < p.n_genres; ++c) {
          acc += theta[c];
          if (u < acc) {
            g = c;
            break;
          }
        }
        ++counts[g];
      }
      for (uint32_t g = 0; g < p.n_genres; ++g) {
        if (counts[g] == 0) continue;
        out.genres_csv += make_label('i', i, iw);
        out.genres_csv += ',';
        out.genres_csv += make_label('g', g, gw);
        out.genres_csv += ',';
        out.genres_csv += std::to_string(counts[g]);
        out.genres_csv += '\n';
      }
    }
  }

  const uint32_t n_groups = p.taste_groups;
  std::vector<std::vector<double>> taste_cum;
  if (n_groups > 1) {
    taste_cum.resize(p.n_users);
    std::vector<double> pref(n_groups);
    for (uint32_t u = 0; u < p.n_users; ++u) {
      rng.dirichlet(p.taste_alpha, pref);
      taste_cum[u].resize(n_groups);
      double acc = 0.0;
      for (uint32_t g = 0; g < n_groups; ++g) {
        acc += pref[g];
        taste_cum[u][g] = acc;
      }
    }
  }

  // Item index equals popularity rank: weight (i+1)^-s.
  std::vector<GroupSampler> groups(n_groups);
  for (uint32_t i = 0; i < p.n_items; ++i) {
    double w = std::pow(static_cast<double>(i) + 1.0, -p.popularity_exponent);
    GroupSampler& g = groups[i % n_groups];
    g.all.add(i, w);
    if (author_gender[item_author[i]] == Gender::female)
      g.female.add(i, w);
    else
      g.other.add(i, w);
  }

  const bool drift_female = !p.drift.female_share.empty();
  out.interactions_csv = "user_id,item_id,timestamp,rating\n";
  for (uint32_t m = 0; m < p.months; ++m) {
    cal::Month month = cal::add_months(p.start_month, static_cast<int>(m));
    int64_t t0 = cal::month_start(month);
    int64_t span = cal::month_start(cal::add_months(month, 1)) - t0;
    double act = p.drift.activity.empty() ? 1.0 : p.drift.activity[m];
    double target = p.female_fraction * (drift_female ? p.drift.female_share[m] : 1.0);
    target = std::clamp(target, 0.0, 1.0);
    for (uint32_t u = 0; u < p.n_users; ++u) {
      int n_events = rng.poisson(p.interactions_per_user_per_month * act);
      for (int e = 0; e < n_events; ++e) {
        uint32_t grp = 0;
        if (n_groups > 1) {
          double v = rng.uniform();
          const auto& cum = taste_cum[u];
          grp = static_cast<uint32_t>(std::upper_bound(cum.begin(), cum.end(), v) - cum.begin());
          if (grp >= n_groups) grp = n_groups - 1;
        }
        uint32_t item = drift_female ? groups[grp].draw_with_target(rng, target)
                                     : groups[grp].all.draw(rng);
        int64_t ts = t0 + static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(span)));
        out.interactions_csv += make_label('u', u, uw);
        out.interactions_csv += ',';
        out.interactions_csv += make_label('i', item, iw);
        out.interactions_csv += ',';
        out.interactions_csv += std::to_string(ts);
        out.interactions_csv += ',';
        if (rng.uniform() < 0.5) out.interactions_csv += std::to_string(draw_rating(rng));
        out.interactions_csv += '\n';
      }
    }
  }

  out.authors_csv = "item_id,author_id,position,gender\n";
  for (uint32_t i = 0; i < p.n_items; ++i) {
    out.authors_csv += make_label('i', i, iw);
    out.authors_csv += ',';
    out.authors_csv += make_label('a', item_author[i], aw);
    out.authors_csv += ",1,";
    out.authors_csv += to_string(author_gender[item_author[i]]);
    out.authors_csv += '\n';
  }
  return out;
}

void generate_files(const SynthParams& params, const std::string& dir) {
  SynthOutput out = generate(params);
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& content) {
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    if (!f) throw Error(std::string("synth: cannot write ") + name + " under " + dir);
    f << content;
  };
  write("interactions.csv", out.interactions_csv);
  write("genres.csv", out.genres_csv);
  write("authors.csv", out.authors_csv);
}

}  // namespace recaudit
