#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "evoflow/encoding.hpp"
#include "evoflow/errors.hpp"
#include "evoflow/matrix.hpp"

namespace evoflow {

// One fitted pipeline step. Preprocessing steps implement transform();
// classifiers implement predict(). Labels are global class ids and are never
// altered by transforms.
class StepModel {
 public:
  virtual ~StepModel() = default;
  virtual std::string name() const = 0;
  virtual StepRole role() const = 0;
  virtual void fit(const Matrix& X, const std::vector<int>& y) = 0;
  virtual Matrix transform(const Matrix& X) const {
    throw StepFailure(name() + " does not transform");
  }
  virtual std::vector<int> predict(const Matrix& X) const {
    throw StepFailure(name() + " does not predict");
  }
  // Fitted parameters only; hyper-parameters live in the WorkflowSpec.
  virtual nlohmann::json save_state() const = 0;
  virtual void load_state(const nlohmann::json& state) = 0;
};

using StepFactory =
    std::function<std::unique_ptr<StepModel>(const StepSpec&, std::uint64_t seed)>;

class StepRegistry {
 public:
  static StepRegistry& global();

  void add(const std::string& name, StepRole role, StepFactory factory);
  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  StepRole role_of(const std::string& name) const;
  std::unique_ptr<StepModel> create(const StepSpec& spec, std::uint64_t seed) const;
  std::vector<std::string> names() const;

 private:
  struct Entry {
    StepRole role;
    StepFactory factory;
  };
  std::map<std::string, Entry> entries_;
};

// Builds a step from the global registry; the seed feeds stochastic steps.
std::unique_ptr<StepModel> make_step(const StepSpec& spec, std::uint64_t seed);

// Typed hyper-parameter access; throws ConfigError when missing/mistyped.
long long hp_int(const StepSpec& spec, const std::string& name);
double hp_real(const StepSpec& spec, const std::string& name);
bool hp_bool(const StepSpec& spec, const std::string& name);
std::string hp_cat(const StepSpec& spec, const std::string& name);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

// Majority vote with ties resolved toward the lower class id.
int argmax_class(const std::vector<double>& scores);

}  // namespace evoflow
