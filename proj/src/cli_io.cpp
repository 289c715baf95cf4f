#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evoflow/cli_io.hpp"
#include "evoflow/errors.hpp"

namespace evoflow {

void RunSetup::finalize() {
  if (!eval_budget_set) engine.eval_budget_s = engine.budget_s / 10.0;
  if (!(paths.holdout > 0.0 && paths.holdout <= 0.5))
    throw ConfigError("holdout fraction must lie in (0, 0.5]");
  engine.validate();
}

namespace {

void require_exists(const std::string& path, const std::string& what) {
  if (!path.empty() && !std::filesystem::exists(path))
    throw ConfigError(what + " '" + path + "' does not exist");
}

template <typename T>
T typed(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

RunSetup load_run_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config '" + path + "' must be a JSON object");

  RunSetup s;
  for (const auto& [key, v] : j.items()) {
    if (key == "maxGen")
      s.engine.max_gen = typed<int>(v, key);
    else if (key == "popSize")
      s.engine.pop_size = typed<int>(v, key);
    else if (key == "cxProb")
      s.engine.cx_prob = typed<double>(v, key);
    else if (key == "stMutProb")
      s.engine.st_mut_prob = typed<double>(v, key);
    else if (key == "maxDer")
      s.engine.max_der = typed<int>(v, key);
    else if (key == "archSize")
      s.engine.arch_size = typed<int>(v, key);
    else if (key == "divWeight")
      s.engine.div_weight = typed<double>(v, key);
    else if (key == "budget")
      s.engine.budget_s = typed<double>(v, key);
    else if (key == "evalBudget") {
      s.engine.eval_budget_s = typed<double>(v, key);
      s.eval_budget_set = true;
    } else if (key == "k")
      s.engine.k_folds = typed<int>(v, key);
    else if (key == "seed")
      s.engine.seed = typed<std::uint64_t>(v, key);
    else if (key == "mode")
      s.engine.mode = mode_from_name(typed<std::string>(v, key));
    else if (key == "threads")
      s.engine.threads = typed<int>(v, key);
    else if (key == "grammar")
      s.paths.grammar = typed<std::string>(v, key);
    else if (key == "train")
      s.paths.train = typed<std::string>(v, key);
    else if (key == "test")
      s.paths.test = typed<std::string>(v, key);
    else if (key == "output")
      s.paths.output = typed<std::string>(v, key);
    else if (key == "label")
      s.paths.label = typed<std::string>(v, key);
    else if (key == "holdout")
      s.paths.holdout = typed<double>(v, key);
    else
      throw ConfigError("unknown config key '" + key + "'");
  }
  require_exists(s.paths.grammar, "grammar file");
  require_exists(s.paths.train, "train file");
  require_exists(s.paths.test, "test file");
  return s;
}

nlohmann::json engine_config_json(const EngineConfig& cfg) {
  return {{"maxGen", cfg.max_gen},
          {"popSize", cfg.pop_size},
          {"cxProb", cfg.cx_prob},
          {"stMutProb", cfg.st_mut_prob},
          {"maxDer", cfg.max_der},
          {"archSize", cfg.arch_size},
          {"divWeight", cfg.div_weight},
          {"budget", cfg.budget_s},
          {"evalBudget", cfg.eval_budget_s},
          {"k", cfg.k_folds},
          {"seed", cfg.seed},
          {"mode", mode_name(cfg.mode)},
          {"threads", cfg.threads}};
}

nlohmann::json run_setup_json(const RunSetup& setup) {
  nlohmann::json out = engine_config_json(setup.engine);
  out["grammar"] = setup.paths.grammar;
  out["train"] = setup.paths.train;
  out["test"] = setup.paths.test;
  out["output"] = setup.paths.output;
  out["label"] = setup.paths.label;
  out["holdout"] = setup.paths.holdout;
  return out;
}

std::string generations_csv(const std::vector<GenerationRecord>& generations) {
  std::ostringstream out;
  out << "gen,best_fit,mean_fit,archive_min_divfit,elapsed_s\n";
  char buf[160];
  for (const auto& g : generations) {
    double coarse = std::floor(g.elapsed_s / 10.0) * 10.0;
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", g.gen, g.best_fit,
                  g.mean_fit, g.archive_min_divfit, coarse);
    out << buf;
  }
  return out.str();
}

nlohmann::json report_json(const RunReport& report, const RunSetup& setup,
                           const Archive& archive) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : report.generations)
    gens.push_back({{"gen", g.gen},
                    {"best_fit", g.best_fit},
                    {"mean_fit", g.mean_fit},
                    {"archive_min_divfit", g.archive_min_divfit},
                    {"elapsed_s", g.elapsed_s}});
  nlohmann::json arch = nlohmann::json::array();
  for (const auto& member : archive.members())
    arch.push_back({{"id", member.ind.id},
                    {"fitness", *member.ind.fitness},
                    {"div", member.div},
                    {"divfit", member.divfit},
                    {"workflow", render_workflow(member.ind.phenotype)}});
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(report.grammar_hash));
  return {{"schema_version", 1},
          {"config", run_setup_json(setup)},
          {"termination_reason", report.termination_reason},
          {"wall_clock_s", report.wall_clock_s},
          {"n_evaluations", report.n_evaluations},
          {"best_fitness", report.best_fitness},
          {"best_workflow", report.best_workflow},
          {"grammar_hash", hash},
          {"generations", gens},
          {"archive", arch}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

}  // namespace evoflow
