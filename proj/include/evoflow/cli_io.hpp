#pragma once

#include <string>

#include <json.hpp>

#include "evoflow/archive.hpp"
#include "evoflow/engine.hpp"

namespace evoflow {

struct RunPaths {
  std::string grammar;  // empty = the built-in grammar
  std::string train;
  std::string test;  // empty = carve a holdout from train
  std::string output = ".";
  std::string label = "label";
  double holdout = 1.0 / 3.0;
};

struct RunSetup {
  EngineConfig engine;
  RunPaths paths;
  bool eval_budget_set = false;  // explicit in file/flags vs. budget/10 default

  // Applies the evalBudget default and validates; call after all overrides.
  void finalize();
};

// JSON config file; engine keys carry their conventional names verbatim
// (maxGen, popSize, cxProb, stMutProb, maxDer, archSize, divWeight, budget,
// evalBudget, k, seed, mode, threads) plus grammar/train/test/output/label/
// holdout paths. Unknown keys are errors.
RunSetup load_run_config(const std::string& path);

nlohmann::json engine_config_json(const EngineConfig& cfg);
nlohmann::json run_setup_json(const RunSetup& setup);

// generations.csv content. elapsed_s is floored to 10-second resolution so
// repeated runs of the same seed produce byte-identical artifacts; exact
// timings live in report.json.
std::string generations_csv(const std::vector<GenerationRecord>& generations);

nlohmann::json report_json(const RunReport& report, const RunSetup& setup,
                           const Archive& archive);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace evoflow
