#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evoflow/cli_io.hpp"
#include "evoflow/dataset_io.hpp"
#include "evoflow/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int fail(const std::string& type, const std::string& message) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
  return 1;
}

evoflow::Grammar load_grammar(const std::string& path) {
  if (path.empty()) return evoflow::Grammar::parse(evoflow::default_grammar_text());
  return evoflow::Grammar::parse_file(path);
}

struct LoadedData {
  evoflow::Dataset train, test;
};

// With no test file the train CSV is split; the split stream is one of the
// run-level seeds so it is stable per (data, seed) across modes.
LoadedData prepare_data(const evoflow::RunSetup& s) {
  evoflow::Dataset full = evoflow::load_csv(s.paths.train, s.paths.label);
  LoadedData out;
  if (!s.paths.test.empty()) {
    out.test = evoflow::load_csv_as(s.paths.test, s.paths.label, full.class_names);
    out.train = std::move(full);
  } else {
    auto split =
        evoflow::holdout_split(full, s.paths.holdout, evoflow::derive_seed(s.engine.seed, 0, 3));
    out.train = std::move(split.first);
    out.test = std::move(split.second);
  }
  return out;
}

json ensemble_metadata(const evoflow::RunSetup& s, const evoflow::Dataset& train,
                       std::uint64_t grammar_hash) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(grammar_hash));
  return {{"seed", s.engine.seed},
          {"grammar_hash", hash},
          {"mode", evoflow::mode_name(s.engine.mode)},
          {"class_names", train.class_names},
          {"n_features", train.features.cols},
          {"config", evoflow::engine_config_json(s.engine)}};
}

struct RunScore {
  double test_bacc = -1.0;  // -1 = no ensemble produced
  double best_fitness = 0.0;
  double wall_clock_s = 0.0;
  int n_evaluations = 0;
};

RunScore run_once(const evoflow::RunSetup& s, const evoflow::Grammar& g,
                  const LoadedData& data, evoflow::RunOutput* keep_output,
                  std::string* keep_ensemble, std::vector<std::string>* warnings) {
  auto out = evoflow::run_search(s.engine, g, data.train);
  RunScore score;
  score.best_fitness = out.report.best_fitness;
  score.wall_clock_s = out.report.wall_clock_s;
  score.n_evaluations = out.report.n_evaluations;
  if (!out.archive.empty()) {
    evoflow::Ensemble e = evoflow::finalize_ensemble(out.archive, s.engine, data.train, warnings);
    e.metadata = ensemble_metadata(s, data.train, out.report.grammar_hash);
    auto preds = e.predict(data.test.features);
    score.test_bacc = evoflow::balanced_accuracy(data.test.labels, preds);
    if (keep_ensemble) *keep_ensemble = e.to_json().dump(2) + "\n";
  } else if (warnings) {
    warnings->push_back("archive is empty: no ensemble produced");
  }
  if (keep_output) *keep_output = std::move(out);
  return score;
}

int cmd_optimize(evoflow::RunSetup s) {
  s.finalize();
  evoflow::Grammar g = load_grammar(s.paths.grammar);
  LoadedData data = prepare_data(s);

  evoflow::RunOutput out{evoflow::Archive(1, 0.0), evoflow::RunReport{}};
  std::string ensemble_text;
  std::vector<std::string> warnings;
  RunScore score = run_once(s, g, data, &out, &ensemble_text, &warnings);

  json report = evoflow::report_json(out.report, s, out.archive);
  if (score.test_bacc >= 0.0)
    report["holdout"] = {{"metric", "balanced_accuracy"},
                        {"value", score.test_bacc},
                        {"n_test", data.test.labels.size()}};
  else
    report["holdout"] = nullptr;
  report["warnings"] = warnings;

  fs::create_directories(s.paths.output);
  fs::path dir(s.paths.output);
  evoflow::write_text_file((dir / "report.json").string(), report.dump(2) + "\n");
  evoflow::write_text_file((dir / "generations.csv").string(),
                           evoflow::generations_csv(out.report.generations));
  if (!ensemble_text.empty())
    evoflow::write_text_file((dir / "ensemble.json").string(), ensemble_text);

  json summary = {{"output", s.paths.output},
                  {"termination_reason", out.report.termination_reason},
                  {"best_fitness", out.report.best_fitness},
                  {"wall_clock_s", out.report.wall_clock_s}};
  if (score.test_bacc >= 0.0) summary["test_balanced_accuracy"] = score.test_bacc;
  std::cout << summary.dump() << "\n";
  return 0;
}

int cmd_evaluate(const std::string& ensemble_path, const std::string& data_path,
                 const std::string& label, const std::string& metric) {
  auto e = evoflow::Ensemble::from_json(json::parse(evoflow::read_text_file(ensemble_path)));
  auto class_names = e.metadata.at("class_names").get<std::vector<std::string>>();
  evoflow::Dataset d = evoflow::load_csv_as(data_path, label, class_names);
  auto preds = e.predict(d.features);
  double value = metric == "macro_f1" ? evoflow::macro_f1(d.labels, preds)
                                      : evoflow::balanced_accuracy(d.labels, preds);
  std::cout << json{{"metric", metric}, {"value", value}, {"n", d.labels.size()}}.dump()
            << "\n";
  return 0;
}

int cmd_validate_grammar(const std::string& path) {
  auto issues = evoflow::Grammar::lint(evoflow::read_text_file(path));
  json out = {{"grammar", path}, {"ok", issues.empty()}, {"issues", json::array()}};
  for (const auto& issue : issues)
    out["issues"].push_back({{"line", issue.line}, {"message", issue.message}});
  std::cout << out.dump(2) << "\n";
  return issues.empty() ? 0 : 1;
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> out;
  auto range = spec.find("..");
  try {
    if (range != std::string::npos) {
      std::uint64_t lo = std::stoull(spec.substr(0, range));
      std::uint64_t hi = std::stoull(spec.substr(range + 2));
      if (hi < lo) throw evoflow::ConfigError("seed range '" + spec + "' is descending");
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      std::stringstream ss(spec);
      std::string part;
      while (std::getline(ss, part, ',')) out.push_back(std::stoull(part));
    }
  } catch (const std::logic_error&) {
    throw evoflow::ConfigError("cannot parse seeds '" + spec + "'");
  }
  if (out.empty()) throw evoflow::ConfigError("no seeds given");
  return out;
}

int cmd_ablate(evoflow::RunSetup base, const std::string& modes_csv,
               const std::string& seeds_spec) {
  std::vector<evoflow::Mode> modes;
  std::stringstream ss(modes_csv);
  std::string part;
  while (std::getline(ss, part, ',')) modes.push_back(evoflow::mode_from_name(part));
  if (modes.empty()) throw evoflow::ConfigError("no modes given");
  auto seeds = parse_seeds(seeds_spec);

  evoflow::Grammar g = load_grammar(base.paths.grammar);
  std::ostringstream csv;
  csv << "mode,seed,test_balanced_accuracy,best_fitness,wall_clock_s,n_evaluations\n";
  std::map<std::string, std::vector<double>> per_mode;
  for (std::uint64_t seed : seeds) {
    // All modes at one seed share the same holdout split and fold layout.
    for (evoflow::Mode mode : modes) {
      evoflow::RunSetup s = base;
      s.engine.seed = seed;
      s.engine.mode = mode;
      s.finalize();
      LoadedData data = prepare_data(s);
      RunScore score = run_once(s, g, data, nullptr, nullptr, nullptr);
      char row[160];
      std::snprintf(row, sizeof row, "%s,%llu,%.17g,%.17g,%.3f,%d\n",
                    evoflow::mode_name(mode).c_str(),
                    static_cast<unsigned long long>(seed), score.test_bacc,
                    score.best_fitness, score.wall_clock_s, score.n_evaluations);
      csv << row;
      if (score.test_bacc >= 0.0) per_mode[evoflow::mode_name(mode)].push_back(score.test_bacc);
    }
  }

  fs::create_directories(base.paths.output);
  fs::path out_path = fs::path(base.paths.output) / "ablation.csv";
  evoflow::write_text_file(out_path.string(), csv.str());

  json means = json::object();
  for (const auto& [mode, scores] : per_mode) {
    double sum = 0.0;
    for (double v : scores) sum += v;
    means[mode] = {{"mean_test_balanced_accuracy", sum / scores.size()},
                   {"runs", scores.size()}};
  }
  std::cout << json{{"ablation_csv", out_path.string()}, {"modes", means}}.dump(2) << "\n";
  return 0;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const evoflow::GrammarError& e) {
    return fail("grammar_error", e.what());
  } catch (const evoflow::ConfigError& e) {
    return fail("config_error", e.what());
  } catch (const evoflow::DataError& e) {
    return fail("data_error", e.what());
  } catch (const evoflow::Error& e) {
    return fail("error", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-guided evolutionary search over machine-learning workflows"};
  app.require_subcommand(1);

  std::string config_path, grammar_path, ensemble_path, data_path;
  std::string label = "label";
  std::string metric = "balanced_accuracy";
  std::string modes = "full,basic,op_only,ens_only,top10,top10w";
  std::string seeds = "1..5";
  std::uint64_t seed_override = 0;
  std::string mode_override;
  double budget_override = 0.0;
  int threads_override = 0;

  auto* optimize = app.add_subcommand("optimize", "Run the evolutionary search");
  optimize->add_option("--config", config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  auto* seed_opt = optimize->add_option("--seed", seed_override, "Override the run seed");
  auto* mode_opt = optimize->add_option("--mode", mode_override, "Override the run mode")
                       ->check(CLI::IsMember(evoflow::mode_names()));
  auto* budget_opt =
      optimize->add_option("--budget", budget_override, "Override the budget (seconds)");
  auto* threads_opt =
      optimize->add_option("--threads", threads_override, "Parallel evaluation threads");

  auto* evaluate = app.add_subcommand("evaluate", "Score a saved ensemble on a CSV dataset");
  evaluate->add_option("--ensemble", ensemble_path, "ensemble.json path")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--data", data_path, "CSV dataset")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--label", label, "Label column name");
  evaluate->add_option("--metric", metric, "Scoring metric")
      ->check(CLI::IsMember({"balanced_accuracy", "macro_f1"}));

  auto* validate = app.add_subcommand("validate-grammar", "Report grammar issues");
  validate->add_option("--grammar", grammar_path, "Grammar file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* ablate = app.add_subcommand("ablate", "Run a mode-comparison matrix");
  ablate->add_option("--config", config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  ablate->add_option("--modes", modes, "Comma-separated mode list");
  ablate->add_option("--seeds", seeds, "Seed list: 1..5 or 1,2,3");
  auto* ablate_threads =
      ablate->add_option("--threads", threads_override, "Parallel evaluation threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
    std::cerr << json{{"error", {{"type", "usage_error"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  }

  return guarded([&]() -> int {
    if (optimize->parsed()) {
      evoflow::RunSetup s = evoflow::load_run_config(config_path);
      if (seed_opt->count() > 0) s.engine.seed = seed_override;
      if (mode_opt->count() > 0) s.engine.mode = evoflow::mode_from_name(mode_override);
      if (budget_opt->count() > 0) {
        s.engine.budget_s = budget_override;
        // evalBudget follows the budget/10 rule unless pinned explicitly.
      }
      if (threads_opt->count() > 0) s.engine.threads = threads_override;
      return cmd_optimize(std::move(s));
    }
    if (evaluate->parsed()) return cmd_evaluate(ensemble_path, data_path, label, metric);
    if (validate->parsed()) return cmd_validate_grammar(grammar_path);
    if (ablate->parsed()) {
      evoflow::RunSetup s = evoflow::load_run_config(config_path);
      if (ablate_threads->count() > 0) s.engine.threads = threads_override;
      return cmd_ablate(std::move(s), modes, seeds);
    }
    return fail("usage_error", "no subcommand given");
  });
}
