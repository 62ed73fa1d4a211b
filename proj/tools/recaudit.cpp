#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recaudit/calendar.hpp"
#include "recaudit/config.hpp"
#include "recaudit/pipeline.hpp"
#include "recaudit/synth.hpp"

namespace {

using namespace recaudit;

// Flags shared by profile and experiment. Each flag overrides the matching
// config key only when it was actually passed.
struct CommonFlags {
  std::string config_path;
  std::string interactions, genres, authors;
  std::string out;
  std::string algos;
  uint64_t seed = 0;
  int workers = 0;
  int k = 0;
  double gamma = 0;

  CLI::Option* o_interactions = nullptr;
  CLI::Option* o_genres = nullptr;
  CLI::Option* o_authors = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_algos = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_workers = nullptr;
  CLI::Option* o_k = nullptr;
  CLI::Option* o_gamma = nullptr;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON run configuration");
  f.o_interactions = sub->add_option("--interactions", f.interactions, "interaction CSV path");
  f.o_genres = sub->add_option("--genres", f.genres, "genre CSV path");
  f.o_authors = sub->add_option("--authors", f.authors, "author CSV path");
  f.o_out = sub->add_option("--out", f.out, "output directory");
  f.o_algos = sub->add_option("--algos", f.algos, "comma-separated algorithm list");
  f.o_seed = sub->add_option("--seed", f.seed, "master seed");
  f.o_workers = sub->add_option("--workers", f.workers, "parallel worker count");
  f.o_k = sub->add_option("--k", f.k, "recommendation list length");
  f.o_gamma = sub->add_option("--gamma", f.gamma, "exposure patience in (0,1)");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t pos = s.find(',', start);
    if (pos == std::string::npos) {
      if (start < s.size()) out.push_back(s.substr(start));
      break;
    }
    if (pos > start) out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

RunConfig make_config(const CommonFlags& f) {
  RunConfig cfg = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  if (*f.o_interactions) cfg.interactions = f.interactions;
  if (*f.o_genres) cfg.genres = f.genres;
  if (*f.o_authors) cfg.authors = f.authors;
  if (*f.o_out) cfg.out = f.out;
  if (*f.o_algos) cfg.algos = split_list(f.algos);
  if (*f.o_seed) cfg.seed = f.seed;
  if (*f.o_workers) cfg.workers = f.workers;
  if (*f.o_k) cfg.exposure.k = f.k;
  if (*f.o_gamma) cfg.exposure.gamma = f.gamma;
  return cfg;
}

int cmd_profile(const CommonFlags& f) {
  RunConfig cfg = make_config(f);
  validate_config(cfg);
  Dataset data = load_dataset(cfg);
  MetricTable table = run_profile(data, cfg);
  std::string csv_path = (std::filesystem::path(cfg.out) / "profile_metrics.csv").string();
  emit_csv(table, csv_path);
  emit_charts(table, (std::filesystem::path(cfg.out) / "charts").string());
  std::cout << "wrote " << csv_path << " (" << table.size() << " rows)\n";
  return 0;
}

int cmd_experiment(const CommonFlags& f) {
  RunConfig cfg = make_config(f);
  validate_config(cfg);
  Dataset data = load_dataset(cfg);
  ExperimentResult result = run_experiment(data, cfg);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::string csv_path = (std::filesystem::path(cfg.out) / "experiment_metrics.csv").string();
  emit_csv(result.table, csv_path);
  if (!result.table.empty())
    emit_charts(result.table, (std::filesystem::path(cfg.out) / "charts").string());
  std::cout << "wrote " << csv_path << " (" << result.table.size() << " rows, "
            << result.n_splits << " splits)\n";
  return result.partial ? 2 : 0;
}

int cmd_compare(const std::string& in, const std::string& date, const std::string& out) {
  MetricTable table = load_metrics_csv(in);
  CompareResult result = compare(table, cal::parse_date(date));
  for (const auto& note : result.skipped) std::cerr << "note: skipped " << note << "\n";
  std::string csv_path = (std::filesystem::path(out) / "compare.csv").string();
  emit_compare_csv(result, csv_path);
  std::cout << "wrote " << csv_path << " (" << result.rows.size() << " rows)\n";
  return 0;
}

int cmd_synth(const std::string& params_path, const std::string& out, CLI::Option* o_seed,
              uint64_t seed) {
  SynthParams params = load_synth_params(params_path);
  if (*o_seed) params.seed = seed;
  generate_files(params, out);
  std::cout << "wrote " << out << "/interactions.csv, genres.csv, authors.csv\n";
  return 0;
}

int cmd_report(const std::string& in, const std::string& out) {
  MetricTable table = load_metrics_csv(in);
  emit_charts(table, out);
  std::cout << "wrote charts for " << table.size() << " rows to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"longitudinal audit toolkit for recommender-system interaction datasets"};
  app.require_subcommand(1);

  CommonFlags pf, ef;
  CLI::App* profile = app.add_subcommand("profile", "monthly data-side metrics");
  add_common(profile, pf);
  CLI::App* experiment =
      app.add_subcommand("experiment", "rolling-window training and evaluation");
  add_common(experiment, ef);

  std::string cmp_in, cmp_date, cmp_out = "out";
  CLI::App* cmp = app.add_subcommand("compare", "before/after summary around a date");
  cmp->add_option("--in", cmp_in, "metrics CSV from profile or experiment")->required();
  cmp->add_option("--date", cmp_date, "intervention date YYYY-MM-DD")->required();
  cmp->add_option("--out", cmp_out, "output directory");

  std::string syn_params, syn_out;
  uint64_t syn_seed = 0;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--params", syn_params, "JSON generator parameters")->required();
  synth->add_option("--out", syn_out, "output directory")->required();
  CLI::Option* o_syn_seed = synth->add_option("--seed", syn_seed, "seed override");

  std::string rep_in, rep_out = "out/charts";
  CLI::App* report = app.add_subcommand("report", "render charts from a metrics CSV");
  report->add_option("--in", rep_in, "metrics CSV path")->required();
  report->add_option("--out", rep_out, "chart output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (profile->parsed()) return cmd_profile(pf);
    if (experiment->parsed()) return cmd_experiment(ef);
    if (cmp->parsed()) return cmd_compare(cmp_in, cmp_date, cmp_out);
    if (synth->parsed()) return cmd_synth(syn_params, syn_out, o_syn_seed, syn_seed);
    if (report->parsed()) return cmd_report(rep_in, rep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
