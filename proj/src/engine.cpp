#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "evoflow/engine.hpp"
#include "evoflow/errors.hpp"
#include "evoflow/rng.hpp"

namespace evoflow {

namespace {
constexpr const char* kModeNames[] = {"full",   "basic", "op_only",    "ens_only",
                                      "top10",  "top10w", "best_single"};
}

std::string mode_name(Mode m) { return kModeNames[static_cast<int>(m)]; }

Mode mode_from_name(const std::string& s) {
  for (int i = 0; i < 7; ++i)
    if (s == kModeNames[i]) return static_cast<Mode>(i);
  throw ConfigError("unknown mode '" + s + "'");
}

std::vector<std::string> mode_names() { return {kModeNames, kModeNames + 7}; }

void EngineConfig::validate() const {
  if (pop_size < 2) throw ConfigError("popSize must be at least 2");
  if (pop_size % 2 != 0) throw ConfigError("popSize must be even (crossover pairs)");
  if (max_gen < 0) throw ConfigError("maxGen must be non-negative");
  if (cx_prob < 0.0 || cx_prob > 1.0) throw ConfigError("cxProb outside [0,1]");
  if (st_mut_prob < 0.0 || st_mut_prob > 1.0) throw ConfigError("stMutProb outside [0,1]");
  if (div_weight < 0.0 || div_weight > 1.0) throw ConfigError("divWeight outside [0,1]");
  if (max_der < 1) throw ConfigError("maxDer must be positive");
  if (arch_size < 1) throw ConfigError("archSize must be at least 1");
  if (budget_s <= 0.0) throw ConfigError("budget must be positive");
  if (eval_budget_s <= 0.0) throw ConfigError("evalBudget must be positive");
  if (eval_budget_s > budget_s) throw ConfigError("evalBudget exceeds budget");
  if (k_folds < 2) throw ConfigError("k must be at least 2");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

bool EngineConfig::specific_operators() const {
  return mode == Mode::Full || mode == Mode::OpOnly || mode == Mode::BestSingle;
}

double EngineConfig::effective_div_weight() const {
  bool plain = mode == Mode::Basic || mode == Mode::OpOnly || mode == Mode::Top10 ||
               mode == Mode::Top10W;
  return plain ? 0.0 : div_weight;
}

bool EngineConfig::best_single_output() const {
  return mode == Mode::Basic || mode == Mode::OpOnly || mode == Mode::BestSingle;
}

EnsembleWeighting EngineConfig::weighting() const {
  return mode == Mode::Top10 ? EnsembleWeighting::Uniform : EnsembleWeighting::FitnessRatio;
}

namespace {

// Run-level random streams: tag pair (0, n) is reserved for them, individual
// evaluation streams use derive_seed(seed, id) with ids starting at 1.
std::uint64_t fold_seed(std::uint64_t seed) { return derive_seed(seed, 0, 1); }
std::uint64_t master_seed(std::uint64_t seed) { return derive_seed(seed, 0, 2); }

struct Evaluator {
  const EngineConfig& cfg;
  const Dataset& train;
  const std::vector<std::vector<int>>& folds;
  const Deadline& run_deadline;
  int n_evaluations = 0;

  // Fills in fitness for every unevaluated individual, stopping at the run
  // budget. Returns false when the budget cut evaluation short. Parallel
  // execution merges by index and matches the sequential result.
  bool evaluate(std::vector<Individual>& pop) {
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < pop.size(); ++i)
      if (!pop[i].evaluated()) todo.push_back(i);
    if (todo.empty()) return true;

    std::vector<EvalResult> results(todo.size());
    std::vector<char> done(todo.size(), 0);
    auto eval_one = [&](std::size_t t) {
      const Individual& ind = pop[todo[t]];
      results[t] = evaluate_workflow(ind.phenotype, train, folds,
                                     derive_seed(cfg.seed, ind.id), cfg.eval_budget_s);
      done[t] = 1;
    };

    if (cfg.threads <= 1 || todo.size() == 1) {
      for (std::size_t t = 0; t < todo.size(); ++t) {
        if (run_deadline.passed()) break;
        eval_one(t);
      }
    } else {
      std::atomic<std::size_t> cursor{0};
      auto worker = [&] {
        for (;;) {
          std::size_t t = cursor.fetch_add(1);
          if (t >= todo.size() || run_deadline.passed()) return;
          eval_one(t);
        }
      };
      std::vector<std::thread> threads;
      std::size_t n = std::min<std::size_t>(cfg.threads, todo.size());
      for (std::size_t i = 0; i < n; ++i) threads.emplace_back(worker);
      for (auto& th : threads) th.join();
    }

    bool completed = true;
    for (std::size_t t = 0; t < todo.size(); ++t) {
      if (!done[t]) {
        completed = false;
        continue;
      }
      Individual& ind = pop[todo[t]];
      ind.fitness = results[t].fitness;
      if (!results[t].predictions.empty())
        ind.predictions = std::move(results[t].predictions);
      else
        ind.predictions.reset();
      ++n_evaluations;
    }
    return completed;
  }
};

void track_best(RunReport& report, const std::vector<Individual>& pop) {
  for (const auto& ind : pop) {
    if (!ind.evaluated()) continue;
    if (*ind.fitness > report.best_fitness) {
      report.best_fitness = *ind.fitness;
      report.best_workflow = render_workflow(ind.phenotype);
    }
  }
}

}  // namespace

RunOutput run_search(const EngineConfig& cfg, const Grammar& g, const Dataset& train) {
  cfg.validate();
  train.validate();

  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  Deadline run_deadline = Deadline::after(cfg.budget_s);

  auto folds = stratified_kfold(train.labels, cfg.k_folds, fold_seed(cfg.seed));
  RandomStream master(master_seed(cfg.seed));

  RunOutput out{Archive(static_cast<std::size_t>(cfg.arch_size), cfg.effective_div_weight()),
                RunReport{}};
  out.report.grammar_hash = g.content_hash();
  Evaluator evaluator{cfg, train, folds, run_deadline};

  std::uint64_t next_id = 1;
  std::vector<Individual> pop;
  pop.reserve(cfg.pop_size);
  for (int i = 0; i < cfg.pop_size; ++i)
    pop.push_back(make_individual(g, random_derivation(g, cfg.max_der, master), next_id++));

  bool completed = evaluator.evaluate(pop);
  track_best(out.report, pop);
  out.archive.update(pop);
  out.report.termination_reason = completed ? "generations" : "budget";

  for (int gen = 1; completed && gen <= cfg.max_gen; ++gen) {
    if (run_deadline.passed()) {
      out.report.termination_reason = "budget";
      break;
    }

    auto offspring = select_tournament(pop, pop.size(), master);
    std::vector<DerivationTree> before;
    before.reserve(offspring.size());
    for (const auto& ind : offspring) before.push_back(ind.genotype);

    for (std::size_t i = 0; i + 1 < offspring.size(); i += 2) {
      if (!flip(master, cfg.cx_prob)) continue;
      bool swap_values =
          cfg.specific_operators() &&
          common_hparams(g, offspring[i].genotype, offspring[i + 1].genotype).size() >= 2;
      CrossoverOutcome oc =
          swap_values
              ? cx_hparams(g, offspring[i].genotype, offspring[i + 1].genotype, master)
              : cx_struct(g, offspring[i].genotype, offspring[i + 1].genotype, cfg.max_der,
                          master);
      offspring[i].genotype = std::move(oc.first);
      offspring[i + 1].genotype = std::move(oc.second);
    }

    for (auto& ind : offspring) {
      if (flip(master, cfg.st_mut_prob))
        ind.genotype = mut_struct(g, ind.genotype, cfg.max_der, master);
      else if (cfg.specific_operators())
        ind.genotype = mut_hparams(g, ind.genotype, master);
    }

    // Unchanged trees keep their identity and cached fitness; anything the
    // operators touched becomes a fresh individual.
    for (std::size_t i = 0; i < offspring.size(); ++i)
      if (!(offspring[i].genotype == before[i]))
        offspring[i] = make_individual(g, std::move(offspring[i].genotype), next_id++);

    pop = std::move(offspring);
    completed = evaluator.evaluate(pop);
    track_best(out.report, pop);
    out.archive.update(pop);
    if (!completed) {
      out.report.termination_reason = "budget";
      break;
    }

    GenerationRecord rec;
    rec.gen = gen;
    double sum = 0.0;
    for (const auto& ind : pop) {
      sum += *ind.fitness;
      rec.best_fit = std::max(rec.best_fit, *ind.fitness);
    }
    rec.mean_fit = sum / static_cast<double>(pop.size());
    if (!out.archive.empty()) {
      rec.archive_min_divfit = out.archive.members().back().divfit;
      for (const auto& member : out.archive.members())
        rec.archive_min_divfit = std::min(rec.archive_min_divfit, member.divfit);
    }
    rec.elapsed_s = elapsed();
    out.report.generations.push_back(rec);
  }

  out.report.n_evaluations = evaluator.n_evaluations;
  out.report.wall_clock_s = elapsed();
  return out;
}

Ensemble finalize_ensemble(const Archive& arch, const EngineConfig& cfg, const Dataset& train,
                           std::vector<std::string>* warnings) {
  if (arch.empty()) throw Error("ensemble: archive is empty");
  std::vector<const Individual*> selected;
  if (cfg.best_single_output()) {
    const ArchiveMember* best = &arch.members().front();
    for (const auto& member : arch.members()) {
      if (*member.ind.fitness > *best->ind.fitness ||
          (*member.ind.fitness == *best->ind.fitness && member.ind.id < best->ind.id))
        best = &member;
    }
    selected.push_back(&best->ind);
  } else {
    for (const auto& member : arch.members()) selected.push_back(&member.ind);
  }
  return build_ensemble(selected, train, cfg.seed, cfg.weighting(), warnings);
}

}  // namespace evoflow
