#include "recaudit/config.hpp"

#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "recaudit/errors.hpp"

namespace recaudit {

namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw ConfigError("config: key '" + key + "': " + why);
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) bad_key(key, "expected a number");
  return v.get<double>();
}

int64_t as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) bad_key(key, "expected an integer");
  return v.get<int64_t>();
}

std::string as_str(const json& v, const std::string& key) {
  if (!v.is_string()) bad_key(key, "expected a string");
  return v.get<std::string>();
}

int64_t as_date(const json& v, const std::string& key) {
  try {
    return cal::parse_date(as_str(v, key));
  } catch (const ConfigError& e) {
    bad_key(key, e.what());
  }
}

void parse_itemknn(const json& j, ItemKnnConfig& cfg) {
  for (const auto& [key, v] : j.items()) {
    if (key == "n_neighbors")
      cfg.n_neighbors = static_cast<int>(as_int(v, "itemknn.n_neighbors"));
    else if (key == "min_sim")
      cfg.min_sim = as_double(v, "itemknn.min_sim");
    else
      bad_key("itemknn." + key, "unknown key");
  }
}

void parse_implicitmf(const json& j, ImplicitMfConfig& cfg) {
  for (const auto& [key, v] : j.items()) {
    if (key == "d")
      cfg.d = static_cast<int>(as_int(v, "implicitmf.d"));
    else if (key == "reg")
      cfg.reg = as_double(v, "implicitmf.reg");
    else if (key == "alpha")
      cfg.alpha = as_double(v, "implicitmf.alpha");
    else if (key == "iterations")
      cfg.iterations = static_cast<int>(as_int(v, "implicitmf.iterations"));
    else
      bad_key("implicitmf." + key, "unknown key");
  }
}

void parse_bpr(const json& j, BprConfig& cfg) {
  for (const auto& [key, v] : j.items()) {
    if (key == "d")
      cfg.d = static_cast<int>(as_int(v, "bpr.d"));
    else if (key == "learn_rate")
      cfg.learn_rate = as_double(v, "bpr.learn_rate");
    else if (key == "reg")
      cfg.reg = as_double(v, "bpr.reg");
    else if (key == "epochs")
      cfg.epochs = static_cast<int>(as_int(v, "bpr.epochs"));
    else
      bad_key("bpr." + key, "unknown key");
  }
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, v] : j.items()) {
    if (key == "interactions")
      cfg.interactions = as_str(v, key);
    else if (key == "genres")
      cfg.genres = as_str(v, key);
    else if (key == "authors")
      cfg.authors = as_str(v, key);
    else if (key == "out")
      cfg.out = as_str(v, key);
    else if (key == "seed")
      cfg.seed = static_cast<uint64_t>(as_int(v, key));
    else if (key == "workers")
      cfg.workers = static_cast<int>(as_int(v, key));
    else if (key == "k")
      cfg.exposure.k = static_cast<int>(as_int(v, key));
    else if (key == "gamma")
      cfg.exposure.gamma = as_double(v, key);
    else if (key == "algos") {
      if (!v.is_array()) bad_key(key, "expected an array of strings");
      cfg.algos.clear();
      for (const auto& a : v) cfg.algos.push_back(as_str(a, key));
    } else if (key == "first_test_start")
      cfg.first_test_start = as_date(v, key);
    else if (key == "test_months")
      cfg.test_months = static_cast<int>(as_int(v, key));
    else if (key == "train_months")
      cfg.train_months = static_cast<int>(as_int(v, key));
    else if (key == "horizon_end")
      cfg.horizon_end = as_date(v, key);
    else if (key == "profile_start")
      cfg.profile_start = as_date(v, key);
    else if (key == "profile_end")
      cfg.profile_end = as_date(v, key);
    else if (key == "itemknn")
      parse_itemknn(v, cfg.itemknn);
    else if (key == "implicitmf")
      parse_implicitmf(v, cfg.implicitmf);
    else if (key == "bpr")
      parse_bpr(v, cfg.bpr);
    else
      bad_key(key, "unknown key");
  }
  return cfg;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

namespace {

std::vector<double> as_double_vec(const json& v, const std::string& key) {
  if (!v.is_array()) bad_key(key, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(as_double(x, key));
  return out;
}

SynthParams synth_params_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("synth params: top level must be a JSON object");
  SynthParams p;
  for (const auto& [key, v] : j.items()) {
    if (key == "n_users")
      p.n_users = static_cast<uint32_t>(as_int(v, key));
    else if (key == "n_items")
      p.n_items = static_cast<uint32_t>(as_int(v, key));
    else if (key == "n_authors")
      p.n_authors = static_cast<uint32_t>(as_int(v, key));
    else if (key == "n_genres")
      p.n_genres = static_cast<uint32_t>(as_int(v, key));
    else if (key == "months")
      p.months = static_cast<uint32_t>(as_int(v, key));
    else if (key == "interactions_per_user_per_month")
      p.interactions_per_user_per_month = as_double(v, key);
    else if (key == "popularity_exponent")
      p.popularity_exponent = as_double(v, key);
    else if (key == "female_fraction")
      p.female_fraction = as_double(v, key);
    else if (key == "genre_concentration")
      p.genre_concentration = as_double(v, key);
    else if (key == "taste_groups")
      p.taste_groups = static_cast<uint32_t>(as_int(v, key));
    else if (key == "taste_alpha")
      p.taste_alpha = as_double(v, key);
    else if (key == "start_month") {
      try {
        p.start_month = cal::parse_month(as_str(v, key));
      } catch (const ConfigError& e) {
        bad_key(key, e.what());
      }
    } else if (key == "seed")
      p.seed = static_cast<uint64_t>(as_int(v, key));
    else if (key == "drift") {
      if (!v.is_object()) bad_key(key, "expected an object");
      for (const auto& [dkey, dv] : v.items()) {
        if (dkey == "activity")
          p.drift.activity = as_double_vec(dv, "drift.activity");
        else if (dkey == "female_share")
          p.drift.female_share = as_double_vec(dv, "drift.female_share");
        else
          bad_key("drift." + dkey, "unknown key");
      }
    } else
      bad_key(key, "unknown key");
  }
  return p;
}

}  // namespace

SynthParams load_synth_params(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("synth params: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError("synth params: " + path + ": " + e.what());
  }
  return synth_params_from_json(j);
}

SynthParams synth_params_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("synth params: ") + e.what());
  }
  return synth_params_from_json(j);
}

void validate_config(const RunConfig& cfg) {
  if (cfg.interactions.empty()) throw ConfigError("config: interactions path is required");
  if (cfg.exposure.k < 1) throw ConfigError("config: k must be at least 1");
  if (!(cfg.exposure.gamma > 0.0 && cfg.exposure.gamma < 1.0))
    throw ConfigError("config: gamma must lie in (0,1)");
  if (cfg.workers < 1) throw ConfigError("config: workers must be at least 1");
  if (cfg.test_months < 1 || cfg.train_months < 1)
    throw ConfigError("config: test_months and train_months must be at least 1");
  if (cfg.algos.empty()) throw ConfigError("config: algos must not be empty");
  const std::unordered_set<std::string> known{"mostpop", "itemknn", "implicitmf", "bpr"};
  std::unordered_set<std::string> seen;
  for (const auto& a : cfg.algos) {
    if (!known.count(a)) throw ConfigError("config: unknown algorithm '" + a + "'");
    if (!seen.insert(a).second) throw ConfigError("config: duplicate algorithm '" + a + "'");
  }
}

}  // namespace recaudit
