#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recaudit/calendar.hpp"
#include "recaudit/metrics.hpp"
#include "recaudit/models.hpp"
#include "recaudit/synth.hpp"

namespace recaudit {

// One run's complete description. Loaded from a JSON document; individual
// keys can then be overridden from the command line. Dates in the JSON are
// "YYYY-MM-DD" strings; horizon_end and profile_end name inclusive last days.
struct RunConfig {
  std::string interactions;
  std::string genres;     // empty = no genre table
  std::string authors;    // empty = no author table
  std::string out = "out";
  uint64_t seed = 42;
  int workers = 1;
  std::vector<std::string> algos{"mostpop", "itemknn", "implicitmf", "bpr"};
  ExposureModel exposure;
  ItemKnnConfig itemknn;
  ImplicitMfConfig implicitmf;  // seed is derived per window at run time
  BprConfig bpr;
  int64_t first_test_start = cal::parse_date("2009-01-01");
  int test_months = 2;
  int train_months = 24;
  std::optional<int64_t> horizon_end;    // default: last day bearing data
  std::optional<int64_t> profile_start;  // default: first month bearing data
  std::optional<int64_t> profile_end;    // default: last month bearing data
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);

// Throws ConfigError on out-of-range fields or unknown algorithm names.
void validate_config(const RunConfig& cfg);

// Generator parameters as a JSON document; start_month is "YYYY-MM" and
// drift is {"activity": [...], "female_share": [...]}.
SynthParams load_synth_params(const std::string& path);
SynthParams synth_params_from_json_text(const std::string& text);

}  // namespace recaudit
