// Acceptance gate: one pass/fail line per criterion. Criterion 8 compares
// search modes statistically; it is reported but does not gate the exit code.
// argv[1] is the path to the evoflow CLI binary (used by criteria 5 and 8).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "evoflow/archive.hpp"
#include "evoflow/cli_io.hpp"
#include "evoflow/dataset_io.hpp"
#include "evoflow/engine.hpp"
#include "synth.hpp"

using namespace evoflow;
namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the evoflow binary
fs::path g_dir;     // scratch directory

double now_minus(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (ok && detail.empty()) detail = what;
  }
};

// ---------------------------------------------------------------- criterion 1

void metric_oracle(const std::vector<int>& yt, const std::vector<int>& yp, double& ba,
                   double& f1) {
  int k = 0;
  for (int v : yt) k = std::max(k, v + 1);
  for (int v : yp) k = std::max(k, v + 1);
  std::vector<std::vector<double>> c(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < yt.size(); ++i) c[yt[i]][yp[i]] += 1.0;
  double recall_sum = 0.0, f1_sum = 0.0;
  int present = 0;
  for (int t = 0; t < k; ++t) {
    double row = 0.0, col = 0.0;
    for (int p = 0; p < k; ++p) {
      row += c[t][p];
      col += c[p][t];
    }
    if (row == 0.0) continue;
    ++present;
    double recall = c[t][t] / row;
    double precision = col > 0.0 ? c[t][t] / col : 0.0;
    recall_sum += recall;
    f1_sum += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  ba = recall_sum / present;
  f1 = f1_sum / present;
}

Check criterion_metrics() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  RandomStream rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    int k = 2 + static_cast<int>(uniform_index(rng, 9));
    std::size_t n = 1 + uniform_index(rng, 200);
    std::vector<int> yt(n), yp(n);
    for (std::size_t i = 0; i < n; ++i) {
      yt[i] = static_cast<int>(uniform_index(rng, k));
      yp[i] = static_cast<int>(uniform_index(rng, k));
    }
    double ba = 0.0, f1 = 0.0;
    metric_oracle(yt, yp, ba, f1);
    worst = std::max(worst, std::abs(ba - balanced_accuracy(yt, yp)));
    worst = std::max(worst, std::abs(f1 - macro_f1(yt, yp)));
  }
  if (worst > 1e-12) c.fail("max deviation " + std::to_string(worst));
  double secs = now_minus(t0);
  if (secs >= 5.0) c.fail("took " + std::to_string(secs) + "s (limit 5)");
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 trials, max |delta| = %.3g in %.2fs", worst, secs);
  c.note(buf);
  return c;
}

// ---------------------------------------------------------------- criterion 2

Individual pred_only(std::uint64_t id, double fitness, std::vector<int> preds,
                     const std::string& tag) {
  Individual ind;
  ind.id = id;
  ind.fitness = fitness;
  ind.predictions = std::move(preds);
  ind.phenotype.steps.push_back({tag, StepRole::Classifier, {}});
  return ind;
}

Check criterion_diversity() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();

  // The worked example: disagreements 0.25 / 0.5 between the first vector
  // and the other two give it diversity 0.375.
  std::vector<ArchiveMember> trio;
  trio.push_back({pred_only(1, 0.8, {0, 0, 1, 1}, "a"), 0, 0});
  trio.push_back({pred_only(2, 0.7, {0, 1, 1, 1}, "b"), 0, 0});
  trio.push_back({pred_only(3, 0.6, {1, 1, 1, 1}, "c"), 0, 0});
  if (div_member(trio, 0) != 0.375) c.fail("worked example: div != 0.375");

  struct ModelMember {
    Individual ind;
    double div = 0.0, divfit = 0.0;
  };
  RandomStream rng(202);
  int mismatches = 0;
  for (int trial = 0; trial < 500 && mismatches == 0; ++trial) {
    std::size_t cap = 1 + uniform_index(rng, 10);
    double w = 0.25 * static_cast<double>(uniform_index(rng, 5));
    std::size_t n_preds = 1 + uniform_index(rng, 200);
    int k = 2 + static_cast<int>(uniform_index(rng, 4));
    Archive arch(cap, w);
    std::vector<ModelMember> model;
    std::uint64_t next_id = 1;

    for (int round = 0; round < 3; ++round) {
      std::vector<Individual> batch;
      std::size_t batch_n = 1 + uniform_index(rng, 8);
      for (std::size_t i = 0; i < batch_n; ++i) {
        double fit = 0.125 * static_cast<double>(uniform_index(rng, 9));
        std::vector<int> preds(n_preds);
        for (auto& p : preds) p = static_cast<int>(uniform_index(rng, k));
        batch.push_back(pred_only(next_id++, fit, std::move(preds),
                                  "t" + std::to_string(uniform_index(rng, 3))));
      }
      arch.update(batch);

      std::vector<const Individual*> order;
      for (const auto& cd : batch)
        if (cd.evaluated() && *cd.fitness > 0.0 && cd.predictions) order.push_back(&cd);
      std::sort(order.begin(), order.end(), [](const Individual* x, const Individual* y) {
        if (*x->fitness != *y->fitness) return *x->fitness > *y->fitness;
        return x->id < y->id;
      });
      auto is_dup = [&](const Individual& cd) {
        for (const auto& m : model)
          if (m.ind.phenotype == cd.phenotype && *m.ind.predictions == *cd.predictions)
            return true;
        return false;
      };
      auto brute_disagree = [](const std::vector<int>& x, const std::vector<int>& y) {
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i] ? 1.0 : 0.0;
        return d / static_cast<double>(x.size());
      };
      auto sort_model = [&] {
        std::sort(model.begin(), model.end(), [](const ModelMember& x, const ModelMember& y) {
          if (x.divfit != y.divfit) return x.divfit > y.divfit;
          if (*x.ind.fitness != *y.ind.fitness) return *x.ind.fitness > *y.ind.fitness;
          return x.ind.id < y.ind.id;
        });
      };
      if (model.empty()) {
        for (const Individual* cd : order) {
          if (model.size() >= cap) break;
          if (!is_dup(*cd)) model.push_back({*cd, 0.0, 0.0});
        }
        for (std::size_t i = 0; i < model.size(); ++i) {
          double sum = 0.0;
          for (std::size_t j = 0; j < model.size(); ++j)
            if (j != i)
              sum += brute_disagree(*model[i].ind.predictions, *model[j].ind.predictions);
          model[i].div =
              model.size() < 2 ? 0.0 : sum / static_cast<double>(model.size() - 1);
          model[i].divfit = w * model[i].div + (1.0 - w) * *model[i].ind.fitness;
        }
        sort_model();
      } else {
        std::vector<ModelMember> snapshot = model;
        for (const Individual* cd : order) {
          if (is_dup(*cd)) continue;
          double sum = 0.0;
          for (const auto& s : snapshot)
            sum += brute_disagree(*cd->predictions, *s.ind.predictions);
          double div = sum / static_cast<double>(snapshot.size());
          model.push_back({*cd, div, w * div + (1.0 - w) * *cd->fitness});
        }
        sort_model();
        if (model.size() > cap) model.resize(cap);
      }

      if (arch.size() != model.size()) ++mismatches;
      for (std::size_t i = 0; i < model.size() && mismatches == 0; ++i)
        if (arch.members()[i].ind.id != model[i].ind.id ||
            arch.members()[i].div != model[i].div ||
            arch.members()[i].divfit != model[i].divfit)
          ++mismatches;
    }
  }
  if (mismatches > 0) c.fail("archive diverged from the brute-force model");
  double secs = now_minus(t0);
  if (secs >= 5.0) c.fail("took " + std::to_string(secs) + "s (limit 5)");
  char buf[96];
  std::snprintf(buf, sizeof buf, "500 random archives matched exactly in %.2fs", secs);
  c.note(buf);
  return c;
}

// ---------------------------------------------------------------- criterion 3

bool check_individual(const Grammar& g, const DerivationTree& t, std::string& why) {
  int count = structural_derivation_count(g, t);
  if (count > 13) {
    why = "structural count " + std::to_string(count) + " > 13";
    return false;
  }
  WorkflowSpec wf = to_phenotype(g, t);
  int n_prep = static_cast<int>(wf.steps.size()) - 1;
  if (n_prep < 0 || n_prep > 5) {
    why = "preprocessor count " + std::to_string(n_prep) + " outside 0..5";
    return false;
  }
  if (count != 2 * n_prep + 2) {
    why = "structural count " + std::to_string(count) + " != 2n+2";
    return false;
  }
  for (std::size_t s = 0; s < wf.steps.size(); ++s) {
    const StepSpec& step = wf.steps[s];
    StepRole want = s + 1 == wf.steps.size() ? StepRole::Classifier : StepRole::Preprocessing;
    if (step.role != want) {
      why = step.algorithm + " has the wrong role";
      return false;
    }
    for (const auto& [name, value] : step.hparams) {
      if (!g.has_domain(step.algorithm, name)) {
        why = step.algorithm + "." + name + " has no domain";
        return false;
      }
      const HParamDomain& d = g.domain(step.algorithm, name);
      bool fits = true;
      switch (d.kind) {
        case DomainKind::Integer: {
          long long v = std::get<long long>(value);
          fits = v >= d.int_lo && v <= d.int_hi;
          break;
        }
        case DomainKind::Real: {
          double v = std::get<double>(value);
          fits = v >= d.real_lo && v <= d.real_hi;
          break;
        }
        case DomainKind::Categorical:
          fits = std::find(d.categories.begin(), d.categories.end(),
                           std::get<std::string>(value)) != d.categories.end();
          break;
        case DomainKind::Boolean:
          fits = std::holds_alternative<bool>(value);
          break;
      }
      if (!fits) {
        why = step.algorithm + "." + name + " outside its domain";
        return false;
      }
    }
  }
  return true;
}

Check criterion_closure() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  Grammar g = Grammar::parse(default_grammar_text());
  RandomStream rng(303);
  std::string why;

  std::vector<DerivationTree> pool;
  for (int i = 0; i < 10000; ++i) {
    DerivationTree t = random_derivation(g, 13, rng);
    if (!check_individual(g, t, why)) {
      c.fail("derivation " + std::to_string(i) + ": " + why);
      return c;
    }
    if (pool.size() < 400) pool.push_back(t);
  }
  auto pick = [&]() -> const DerivationTree& { return pool[uniform_index(rng, pool.size())]; };

  for (int i = 0; i < 10000; ++i) {
    CrossoverOutcome oc = cx_struct(g, pick(), pick(), 13, rng);
    if (!check_individual(g, oc.first, why) || !check_individual(g, oc.second, why)) {
      c.fail("cx_struct: " + why);
      return c;
    }
  }
  int done = 0;
  for (int attempt = 0; attempt < 100000 && done < 10000; ++attempt) {
    DerivationTree a = pick(), b = pick();
    if (common_hparams(g, a, b).size() < 2) continue;
    CrossoverOutcome oc = cx_hparams(g, a, b, rng);
    ++done;
    if (!check_individual(g, oc.first, why) || !check_individual(g, oc.second, why)) {
      c.fail("cx_hparams: " + why);
      return c;
    }
  }
  if (done < 10000) c.fail("only " + std::to_string(done) + " cx_hparams applications");
  for (int i = 0; i < 10000; ++i) {
    DerivationTree t = mut_struct(g, pick(), 13, rng);
    if (!check_individual(g, t, why)) {
      c.fail("mut_struct: " + why);
      return c;
    }
  }
  for (int i = 0; i < 10000; ++i) {
    DerivationTree t = mut_hparams(g, pick(), rng);
    if (!check_individual(g, t, why)) {
      c.fail("mut_hparams: " + why);
      return c;
    }
  }
  double secs = now_minus(t0);
  if (secs >= 60.0) c.fail("took " + std::to_string(secs) + "s (limit 60)");
  char buf[96];
  std::snprintf(buf, sizeof buf, "50000 individuals closed over the grammar in %.1fs", secs);
  c.note(buf);
  return c;
}

// ---------------------------------------------------------------- criterion 4

Dataset small_blobs(std::uint64_t seed) {
  return synth::make_blobs({{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}}, 30, 2, 0.8, seed);
}

Check criterion_loop() {
  Check c;
  Grammar g = Grammar::parse(default_grammar_text());
  Dataset train = small_blobs(17);

  EngineConfig cfg;
  cfg.pop_size = 10;
  cfg.max_gen = 0;
  cfg.arch_size = 4;
  cfg.k_folds = 3;
  cfg.seed = 5;
  cfg.mode = Mode::Top10;  // diversity weight 0
  RunOutput out = run_search(cfg, g, train);

  // Replay the initial population from the documented seed layout and rank it
  // by fitness with the archive's duplicate rule.
  auto folds = stratified_kfold(train.labels, cfg.k_folds, derive_seed(cfg.seed, 0, 1));
  RandomStream master(derive_seed(cfg.seed, 0, 2));
  std::vector<Individual> pop;
  for (int i = 0; i < cfg.pop_size; ++i)
    pop.push_back(make_individual(g, random_derivation(g, cfg.max_der, master),
                                  static_cast<std::uint64_t>(i + 1)));
  for (auto& ind : pop) {
    EvalResult r = evaluate_workflow(ind.phenotype, train, folds, derive_seed(cfg.seed, ind.id),
                                     cfg.eval_budget_s);
    ind.fitness = r.fitness;
    if (!r.predictions.empty()) ind.predictions = r.predictions;
  }
  std::vector<const Individual*> ranked;
  for (const auto& ind : pop)
    if (*ind.fitness > 0.0 && ind.predictions) ranked.push_back(&ind);
  std::sort(ranked.begin(), ranked.end(), [](const Individual* x, const Individual* y) {
    if (*x->fitness != *y->fitness) return *x->fitness > *y->fitness;
    return x->id < y->id;
  });
  std::vector<std::uint64_t> expect;
  std::vector<const Individual*> kept;
  for (const Individual* ind : ranked) {
    if (expect.size() >= static_cast<std::size_t>(cfg.arch_size)) break;
    bool dup = false;
    for (const Individual* seen : kept)
      dup = dup || (seen->phenotype == ind->phenotype && *seen->predictions == *ind->predictions);
    if (dup) continue;
    kept.push_back(ind);
    expect.push_back(ind->id);
  }
  std::vector<std::uint64_t> got;
  for (const auto& m : out.archive.members()) got.push_back(m.ind.id);
  if (got != expect) c.fail("maxGen=0 archive is not the fitness top-" +
                            std::to_string(cfg.arch_size) + " of the initial population");

  // divWeight=0: the best fitness ever seen stays in the final archive.
  cfg.max_gen = 3;
  RunOutput evolved = run_search(cfg, g, train);
  bool best_present = false;
  for (const auto& m : evolved.archive.members())
    best_present = best_present || *m.ind.fitness == evolved.report.best_fitness;
  if (!best_present) c.fail("best-ever fitness missing from the divWeight=0 archive");

  // A spent budget terminates cleanly with a well-formed archive.
  EngineConfig broke = cfg;
  broke.budget_s = 1e-6;
  broke.eval_budget_s = 1e-6;
  RunOutput cut = run_search(broke, g, train);
  if (cut.report.termination_reason != "budget") c.fail("near-zero budget did not report budget");
  if (cut.archive.size() > static_cast<std::size_t>(broke.arch_size))
    c.fail("archive exceeded its capacity");
  for (std::size_t i = 0; i + 1 < cut.archive.size(); ++i)
    if (cut.archive.members()[i].divfit < cut.archive.members()[i + 1].divfit)
      c.fail("archive out of order after budget stop");
  c.note("init-only, evolved, and budget-cut runs all conform");
  return c;
}

// ---------------------------------------------------------------- criterion 5

int run_cmd(const std::string& cmd, const fs::path& out_file) {
  std::string full =
      cmd + " > " + out_file.string() + " 2> " + out_file.string() + ".err";
  return std::system(full.c_str());
}

std::string log_tail(const fs::path& out_file) {
  std::string text = read_text_file(out_file.string() + ".err");
  if (text.empty()) text = read_text_file(out_file.string());
  return text.size() > 300 ? text.substr(text.size() - 300) : text;
}

Check criterion_determinism() {
  Check c;
  Dataset d = small_blobs(23);
  fs::path train_csv = g_dir / "det_train.csv";
  save_csv(d, train_csv.string(), "label");

  for (const std::string variant : {"a", "b"}) {
    nlohmann::json cfg = {{"popSize", 8},   {"maxGen", 2},
                          {"k", 3},         {"archSize", 5},
                          {"seed", 7},      {"mode", "full"},
                          {"threads", 1},   {"budget", 600.0},
                          {"evalBudget", 30.0}, {"train", train_csv.string()},
                          {"output", (g_dir / ("det_" + variant)).string()}};
    write_text_file((g_dir / ("det_" + variant + ".json")).string(), cfg.dump(2));
    int rc = run_cmd(g_cli + " optimize --config " + (g_dir / ("det_" + variant + ".json")).string(),
                     g_dir / ("det_" + variant + ".log"));
    if (rc != 0) {
      c.fail("optimize run " + variant + " exited with " + std::to_string(rc) + ": " +
             log_tail(g_dir / ("det_" + variant + ".log")));
      return c;
    }
  }
  for (const std::string name : {"ensemble.json", "generations.csv"}) {
    std::string a = read_text_file((g_dir / "det_a" / name).string());
    std::string b = read_text_file((g_dir / "det_b" / name).string());
    if (a != b)
      c.fail(name + " differs between identical runs");
    else if (a.empty())
      c.fail(name + " is empty");
  }
  c.note("two seeded optimize runs produced byte-identical artifacts");
  return c;
}

// ---------------------------------------------------------------- criterion 6

struct StallStep : StepModel {
  std::string name() const override { return "stallStep"; }
  StepRole role() const override { return StepRole::Preprocessing; }
  void fit(const Matrix&, const std::vector<int>&) override {
    std::this_thread::sleep_for(std::chrono::milliseconds(80));
  }
  Matrix transform(const Matrix& X) const override { return X; }
  nlohmann::json save_state() const override { return nlohmann::json::object(); }
  void load_state(const nlohmann::json&) override {}
};

Check criterion_timeout() {
  Check c;
  auto& reg = StepRegistry::global();
  if (!reg.contains("stallStep"))
    reg.add("stallStep", StepRole::Preprocessing,
            [](const StepSpec&, std::uint64_t) { return std::make_unique<StallStep>(); });

  Dataset train = small_blobs(29);
  auto folds = stratified_kfold(train.labels, 3, 9);
  WorkflowSpec slow;
  slow.steps.push_back({"stallStep", StepRole::Preprocessing, {}});
  slow.steps.push_back({"gaussianNB", StepRole::Classifier, {{"varSmoothing", HParamValue(1e-9)}}});
  EvalResult r = evaluate_workflow(slow, train, folds, 1, 0.05);
  if (r.fitness != 0.0) c.fail("timed-out workflow kept fitness " + std::to_string(r.fitness));
  if (!r.timed_out) c.fail("timed_out flag not set");
  if (!r.predictions.empty()) c.fail("timed-out workflow kept predictions");

  // The same evaluator keeps working afterwards: the run proceeds.
  WorkflowSpec fine;
  fine.steps.push_back({"gaussianNB", StepRole::Classifier, {{"varSmoothing", HParamValue(1e-9)}}});
  EvalResult ok = evaluate_workflow(fine, train, folds, 1, 30.0);
  if (!(ok.fitness > 0.0)) c.fail("follow-up evaluation failed after a timeout");
  c.note("slow step scored 0 with timed_out=true; the next evaluation ran normally");
  return c;
}

// ---------------------------------------------------------------- criterion 7

Check criterion_desk_run() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  Grammar g = Grammar::parse(default_grammar_text());
  Dataset train = synth::three_class(1);
  Dataset test = synth::three_class(2);

  EngineConfig cfg;
  cfg.pop_size = 20;
  cfg.max_gen = 10;
  cfg.k_folds = 5;
  cfg.seed = 3;
  cfg.mode = Mode::Full;
  cfg.budget_s = 480.0;
  cfg.eval_budget_s = 10.0;
  cfg.threads = 4;
  RunOutput out = run_search(cfg, g, train);
  Ensemble e = finalize_ensemble(out.archive, cfg, train);
  double bacc = balanced_accuracy(test.labels, e.predict(test.features));
  double secs = now_minus(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "test balanced accuracy %.4f in %.0fs (%d evaluations)",
                bacc, secs, out.report.n_evaluations);
  if (bacc < 0.90) c.fail(buf);
  if (secs >= 600.0) c.fail("took " + std::to_string(secs) + "s (limit 600)");
  c.note(buf);
  return c;
}

// ---------------------------------------------------------------- criterion 8

Check criterion_ablation() {
  Check c;
  std::map<std::string, std::vector<double>> means;  // mode -> per-dataset means
  struct Spec {
    const char* tag;
    Dataset data;
  };
  std::vector<Spec> specs;
  specs.push_back({"three", synth::three_class(101)});
  specs.push_back({"ten", synth::ten_class(102)});

  for (const auto& spec : specs) {
    fs::path csv = g_dir / (std::string("abl_") + spec.tag + ".csv");
    save_csv(spec.data, csv.string(), "label");
    nlohmann::json cfg = {{"popSize", 8},       {"maxGen", 3},
                          {"k", 3},             {"archSize", 10},
                          {"budget", 20.0},     {"evalBudget", 4.0},
                          {"train", csv.string()},
                          {"output", (g_dir / (std::string("abl_") + spec.tag)).string()}};
    fs::path cfg_path = g_dir / (std::string("abl_") + spec.tag + ".json");
    write_text_file(cfg_path.string(), cfg.dump(2));
    fs::path log = g_dir / (std::string("abl_") + spec.tag + ".log");
    int rc = run_cmd(g_cli + " ablate --config " + cfg_path.string() +
                         " --modes full,basic,ens_only,top10 --seeds 1..5 --threads 4",
                     log);
    if (rc != 0) {
      c.fail(std::string("ablate failed on the ") + spec.tag + "-class data: " + log_tail(log));
      return c;
    }
    nlohmann::json report = nlohmann::json::parse(read_text_file(log.string()));
    for (const auto& [mode, stats] : report.at("modes").items())
      means[mode].push_back(stats.at("mean_test_balanced_accuracy").get<double>());
  }

  auto pooled = [&](const std::string& mode) {
    double sum = 0.0;
    for (double v : means.at(mode)) sum += v;
    return sum / means.at(mode).size();
  };
  double full = pooled("full"), basic = pooled("basic");
  double ens = pooled("ens_only"), top = pooled("top10");
  char buf[160];
  std::snprintf(buf, sizeof buf, "full %.4f vs basic %.4f; ens_only %.4f vs top10 %.4f",
                full, basic, ens, top);
  if (full < basic - 0.02) c.fail(std::string("full fell behind basic: ") + buf);
  if (ens < top - 0.02) c.fail(std::string("ens_only fell behind top10: ") + buf);
  c.note(buf);
  return c;
}

// ---------------------------------------------------------------- criterion 9

DerivationTree tree_for_seed(const Grammar& g, std::uint64_t seed) {
  RandomStream rng(seed);
  return random_derivation(g, 13, rng);
}

Check criterion_mutation_stats() {
  Check c;
  Grammar g = Grammar::parse(default_grammar_text());
  RandomStream rng(909);
  struct Case {
    std::uint64_t tree_seed;
    std::size_t slot;
    const char* hparam;
    double rate;  // 1/P for preprocessing slots, 1/C for classifier slots
  };
  // Probed trees: rbfSampler|kNN (P=2), pca|rbfSampler|gaussianNB (P=4, C=1),
  // varianceThreshold|normalizer|bernouilliNB (C=2). All probed slots are
  // real-valued, so a resample never reproduces the old value.
  const Case cases[] = {{56, 0, "gamma", 0.5},
                        {53, 2, "gamma", 0.25},
                        {53, 4, "varSmoothing", 1.0},
                        {11, 2, "alpha", 0.5}};
  const int n = 10000;
  for (const Case& cs : cases) {
    DerivationTree original = tree_for_seed(g, cs.tree_seed);
    auto slots = collect_slots(g, original);
    if (cs.slot >= slots.size() || slots[cs.slot].hparam != cs.hparam) {
      c.fail("probe tree for seed " + std::to_string(cs.tree_seed) + " changed shape");
      return c;
    }
    int changed = 0;
    for (int i = 0; i < n; ++i) {
      DerivationTree mutated = mut_hparams(g, original, rng);
      auto mslots = collect_slots(g, mutated);
      if (!(mslots[cs.slot].leaf->value == slots[cs.slot].leaf->value)) ++changed;
    }
    double observed = static_cast<double>(changed) / n;
    double sigma = std::sqrt(cs.rate * (1.0 - cs.rate) / n);
    if (std::abs(observed - cs.rate) > 3.0 * sigma + 1e-12) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s rate %.4f, expected %.4f +/- %.4f", cs.hparam,
                    observed, cs.rate, 3.0 * sigma);
      c.fail(buf);
    }
  }
  c.note("per-slot rates 1/2, 1/4, 1/1, and 1/2 all within 3 sigma of 10000 trials");
  return c;
}

// --------------------------------------------------------------- criterion 10

Check criterion_vote_oracle() {
  Check c;
  RandomStream rng(1010);
  auto memorizer = [](int label_at_0, int label_at_1) {
    EnsembleMember m;
    m.workflow.steps.push_back({"kNN",
                                StepRole::Classifier,
                                {{"nNeighbors", HParamValue(1LL)},
                                 {"weights", HParamValue(std::string("uniform"))},
                                 {"p", HParamValue(2LL)}}});
    auto model = make_step(m.workflow.steps[0], 1);
    Matrix X(2, 1);
    X.at(0, 0) = 0.0;
    X.at(1, 0) = 1.0;
    model->fit(X, {label_at_0, label_at_1});
    m.models.push_back(std::move(model));
    return m;
  };

  int mismatches = 0;
  for (int trial = 0; trial < 1000 && mismatches == 0; ++trial) {
    int k = 2 + static_cast<int>(uniform_index(rng, 4));
    std::size_t n_members = 1 + uniform_index(rng, 5);
    Ensemble e;
    for (std::size_t m = 0; m < n_members; ++m) {
      e.members.push_back(memorizer(static_cast<int>(uniform_index(rng, k)),
                                    static_cast<int>(uniform_index(rng, k))));
      // Dyadic weights make exact vote ties common.
      e.members.back().weight = static_cast<double>(1 + uniform_index(rng, 8)) / 8.0;
    }
    std::size_t rows = 1 + uniform_index(rng, 5);
    Matrix X(rows, 1);
    for (std::size_t r = 0; r < rows; ++r) X.at(r, 0) = static_cast<double>(uniform_index(rng, 2));

    // Brute-force oracle: weighted votes over each member's own predictions,
    // ties to the lowest class id.
    std::vector<std::vector<int>> member_preds;
    for (const auto& m : e.members) member_preds.push_back(m.models[0]->predict(X));
    std::vector<int> expect(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      std::map<int, double> votes;
      for (std::size_t m = 0; m < e.members.size(); ++m)
        votes[member_preds[m][r]] += e.members[m].weight;
      int best = -1;
      double best_votes = -1.0;
      for (const auto& [cls, v] : votes)
        if (v > best_votes) {
          best = cls;
          best_votes = v;
        }
      expect[r] = best;
    }
    if (e.predict(X) != expect) ++mismatches;
  }
  if (mismatches > 0) c.fail("weighted vote diverged from the oracle");

  // An engineered exact tie resolves to the lower class id.
  Ensemble tie;
  tie.members.push_back(memorizer(2, 2));
  tie.members.push_back(memorizer(0, 0));
  Matrix probe(1, 1);
  probe.at(0, 0) = 0.0;
  if (tie.predict(probe) != std::vector<int>{0}) c.fail("exact tie did not pick the lower class");
  c.note("1000 random ensembles and the engineered tie matched the oracle");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  g_dir = fs::temp_directory_path() / "evoflow_acceptance";
  fs::create_directories(g_dir);

  struct Entry {
    const char* title;
    std::function<Check()> run;
    bool gates = true;
  };
  const Entry entries[] = {
      {"metric oracles", criterion_metrics},
      {"diversity oracles", criterion_diversity},
      {"grammar and operator closure", criterion_closure},
      {"search-loop conformance", criterion_loop},
      {"seeded determinism", criterion_determinism},
      {"timeout semantics", criterion_timeout},
      {"desk-scale end-to-end accuracy", criterion_desk_run},
      {"ablation direction (soft)", criterion_ablation, false},
      {"hyper-parameter mutation statistics", criterion_mutation_stats},
      {"ensemble vote oracle", criterion_vote_oracle},
  };

  bool missing_cli = g_cli.empty();
  int failures = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    Check result;
    if (missing_cli && (i == 4 || i == 7)) {
      result.fail("no CLI binary path given (argv[1])");
    } else {
      try {
        result = entries[i].run();
      } catch (const std::exception& e) {
        result.fail(std::string("exception: ") + e.what());
      }
    }
    std::printf("[%s] %zu. %s%s%s%s\n", result.ok ? "PASS" : "FAIL", i + 1, entries[i].title,
                result.detail.empty() ? "" : " - ", result.detail.c_str(),
                !result.ok && !entries[i].gates ? " (soft: does not gate the exit code)" : "");
    std::fflush(stdout);
    if (!result.ok && entries[i].gates) ++failures;
  }
  if (failures > 0) std::printf("%d gating criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
