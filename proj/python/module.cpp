#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evoflow/archive.hpp"
#include "evoflow/cli_io.hpp"
#include "evoflow/engine.hpp"
#include "evoflow/rng.hpp"

namespace py = pybind11;
using namespace evoflow;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows[0].size();
  m.values.reserve(m.rows * m.cols);
  for (const auto& row : rows) {
    if (row.size() != m.cols) throw DataError("X must be rectangular");
    m.values.insert(m.values.end(), row.begin(), row.end());
  }
  return m;
}

Dataset to_dataset(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                   std::vector<std::string> class_names) {
  Dataset d;
  d.features = to_matrix(X);
  d.labels = y;
  int k = 0;
  for (int v : y) k = std::max(k, v + 1);
  if (class_names.empty())
    for (int c = 0; c < std::max(k, 2); ++c) class_names.push_back(std::to_string(c));
  d.class_names = std::move(class_names);
  for (std::size_t c = 0; c < d.features.cols; ++c)
    d.feature_names.push_back("f" + std::to_string(c));
  d.validate();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Grammar-guided evolutionary search over machine-learning workflows";

  py::register_exception<GrammarError>(m, "GrammarError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DataError>(m, "DataError");

  m.def("default_grammar", [] { return default_grammar_text(); },
        "The built-in workflow grammar, in the shipped BNF dialect");

  m.def("lint_grammar",
        [](const std::string& text) {
          std::vector<std::pair<int, std::string>> out;
          for (const auto& issue : Grammar::lint(text)) out.push_back({issue.line, issue.message});
          return out;
        },
        py::arg("text"), "Issues as (line, message) pairs; empty means valid");

  m.def("sample_workflow",
        [](const std::string& grammar_text, int max_der, std::uint64_t seed) {
          Grammar g = Grammar::parse(grammar_text);
          RandomStream rng(seed);
          auto tree = random_derivation(g, max_der, rng);
          return render_workflow(to_phenotype(g, tree));
        },
        py::arg("grammar_text"), py::arg("max_der") = 13, py::arg("seed") = 1,
        "One random workflow rendered as text");

  m.def("balanced_accuracy", &balanced_accuracy, py::arg("y_true"), py::arg("y_pred"));
  m.def("macro_f1", &macro_f1, py::arg("y_true"), py::arg("y_pred"));
  m.def("stratified_kfold", &stratified_kfold, py::arg("labels"), py::arg("k"),
        py::arg("seed") = 1, "Deterministic stratified fold index lists");

  py::class_<EngineConfig>(m, "EngineConfig")
      .def(py::init<>())
      .def_readwrite("max_gen", &EngineConfig::max_gen)
      .def_readwrite("pop_size", &EngineConfig::pop_size)
      .def_readwrite("cx_prob", &EngineConfig::cx_prob)
      .def_readwrite("st_mut_prob", &EngineConfig::st_mut_prob)
      .def_readwrite("max_der", &EngineConfig::max_der)
      .def_readwrite("arch_size", &EngineConfig::arch_size)
      .def_readwrite("div_weight", &EngineConfig::div_weight)
      .def_readwrite("budget_s", &EngineConfig::budget_s)
      .def_readwrite("eval_budget_s", &EngineConfig::eval_budget_s)
      .def_readwrite("k_folds", &EngineConfig::k_folds)
      .def_readwrite("seed", &EngineConfig::seed)
      .def_readwrite("threads", &EngineConfig::threads)
      .def_property(
          "mode", [](const EngineConfig& c) { return mode_name(c.mode); },
          [](EngineConfig& c, const std::string& name) { c.mode = mode_from_name(name); });

  m.def("run_search",
        [](const std::vector<std::vector<double>>& X, const std::vector<int>& y,
           const EngineConfig& cfg, const std::string& grammar_text,
           std::vector<std::string> class_names) {
          Grammar g = grammar_text.empty() ? Grammar::parse(default_grammar_text())
                                           : Grammar::parse(grammar_text);
          Dataset train = to_dataset(X, y, std::move(class_names));
          RunOutput out = run_search(cfg, g, train);
          RunSetup setup;
          setup.engine = cfg;
          std::string report = report_json(out.report, setup, out.archive).dump();
          std::string ensemble;
          if (!out.archive.empty()) {
            Ensemble e = finalize_ensemble(out.archive, cfg, train);
            e.metadata = {{"seed", cfg.seed},
                          {"mode", mode_name(cfg.mode)},
                          {"class_names", train.class_names},
                          {"n_features", train.features.cols},
                          {"config", engine_config_json(cfg)}};
            ensemble = e.to_json().dump();
          }
          return py::make_tuple(report, ensemble);
        },
        py::arg("X"), py::arg("y"), py::arg("cfg"), py::arg("grammar_text") = "",
        py::arg("class_names") = std::vector<std::string>{},
        "Full search on in-memory data; returns (report_json, ensemble_json)");

  m.def("ensemble_predict",
        [](const std::string& ensemble_json, const std::vector<std::vector<double>>& X) {
          Ensemble e = Ensemble::from_json(nlohmann::json::parse(ensemble_json));
          return e.predict(to_matrix(X));
        },
        py::arg("ensemble_json"), py::arg("X"),
        "Class ids predicted by a serialized ensemble");
}
