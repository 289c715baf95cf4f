#include "evoflow/mlkit.hpp"
#include "evoflow/mlkit_models.hpp"

namespace evoflow {

StepRegistry& StepRegistry::global() {
  static StepRegistry* reg = [] {
    auto* r = new StepRegistry();
    r->add("minMaxScaler", StepRole::Preprocessing,
           [](const StepSpec&, std::uint64_t) { return std::make_unique<MinMaxScaler>(); });
    r->add("varianceThreshold", StepRole::Preprocessing,
           [](const StepSpec& s, std::uint64_t) {
             return std::make_unique<VarianceThreshold>(hp_real(s, "threshold"));
           });
    r->add("normalizer", StepRole::Preprocessing, [](const StepSpec& s, std::uint64_t) {
      return std::make_unique<Normalizer>(hp_cat(s, "norm"));
    });
    r->add("selectPercentile", StepRole::Preprocessing,
           [](const StepSpec& s, std::uint64_t) {
             return std::make_unique<SelectPercentile>(hp_int(s, "percentile"));
           });
    r->add("pca", StepRole::Preprocessing, [](const StepSpec& s, std::uint64_t) {
      return std::make_unique<Pca>(hp_bool(s, "whiten"), hp_int(s, "nComponents"));
    });
    r->add("rbfSampler", StepRole::Preprocessing, [](const StepSpec& s, std::uint64_t seed) {
      return std::make_unique<RbfSampler>(hp_real(s, "gamma"), hp_int(s, "nComponents"),
                                          seed);
    });
    r->add("kNN", StepRole::Classifier, [](const StepSpec& s, std::uint64_t) {
      return std::make_unique<Knn>(hp_int(s, "nNeighbors"), hp_cat(s, "weights"),
                                   hp_int(s, "p"));
    });
    r->add("gaussianNB", StepRole::Classifier, [](const StepSpec& s, std::uint64_t) {
      return std::make_unique<GaussianNb>(hp_real(s, "varSmoothing"));
    });
    r->add("bernouilliNB", StepRole::Classifier, [](const StepSpec& s, std::uint64_t) {
      return std::make_unique<BernoulliNb>(hp_real(s, "alpha"), hp_bool(s, "fitPrior"));
    });
    r->add("decisionTree", StepRole::Classifier, [](const StepSpec& s, std::uint64_t seed) {
      TreeHParams hp{hp_cat(s, "criterion"), hp_int(s, "maxDepth"),
                     hp_cat(s, "maxFeatures")};
      return std::make_unique<DecisionTree>(hp, seed);
    });
    r->add("randomForest", StepRole::Classifier, [](const StepSpec& s, std::uint64_t seed) {
      TreeHParams hp{hp_cat(s, "criterion"), hp_int(s, "maxDepth"),
                     hp_cat(s, "maxFeatures")};
      return std::make_unique<RandomForest>(hp_int(s, "nEstimators"), hp, seed);
    });
    return r;
  }();
  return *reg;
}

void StepRegistry::add(const std::string& name, StepRole role, StepFactory factory) {
  if (entries_.count(name)) throw ConfigError("step '" + name + "' already registered");
  entries_[name] = {role, std::move(factory)};
}

StepRole StepRegistry::role_of(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw ConfigError("unknown algorithm '" + name + "'");
  return it->second.role;
}

std::unique_ptr<StepModel> StepRegistry::create(const StepSpec& spec,
                                                std::uint64_t seed) const {
  auto it = entries_.find(spec.algorithm);
  if (it == entries_.end())
    throw ConfigError("unknown algorithm '" + spec.algorithm + "'");
  if (it->second.role != spec.role)
    throw ConfigError("algorithm '" + spec.algorithm + "' used in the wrong role");
  return it->second.factory(spec, seed);
}

std::vector<std::string> StepRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

std::unique_ptr<StepModel> make_step(const StepSpec& spec, std::uint64_t seed) {
  return StepRegistry::global().create(spec, seed);
}

namespace {
const HParamValue& need(const StepSpec& spec, const std::string& name) {
  const HParamValue* v = spec.find(name);
  if (!v)
    throw ConfigError(spec.algorithm + " is missing hyper-parameter '" + name + "'");
  return *v;
}
}  // namespace

long long hp_int(const StepSpec& spec, const std::string& name) {
  const auto& v = need(spec, name);
  if (!std::holds_alternative<long long>(v))
    throw ConfigError(spec.algorithm + "." + name + " is not an integer");
  return std::get<long long>(v);
}

double hp_real(const StepSpec& spec, const std::string& name) {
  const auto& v = need(spec, name);
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  if (std::holds_alternative<long long>(v))
    return static_cast<double>(std::get<long long>(v));
  throw ConfigError(spec.algorithm + "." + name + " is not a number");
}

bool hp_bool(const StepSpec& spec, const std::string& name) {
  const auto& v = need(spec, name);
  if (!std::holds_alternative<bool>(v))
    throw ConfigError(spec.algorithm + "." + name + " is not a boolean");
  return std::get<bool>(v);
}

std::string hp_cat(const StepSpec& spec, const std::string& name) {
  const auto& v = need(spec, name);
  if (!std::holds_alternative<std::string>(v))
    throw ConfigError(spec.algorithm + "." + name + " is not categorical");
  return std::get<std::string>(v);
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", rows}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& rows = j.at("data");
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c)
      m.at(r, c) = rows.at(r).at(c).get<double>();
  return m;
}

int argmax_class(const std::vector<double>& scores) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(scores.size()); ++c)
    if (scores[c] > scores[best]) best = c;  // strict: ties keep the lower id
  return best;
}

}  // namespace evoflow
