#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "evoflow/encoding.hpp"
#include "evoflow/grammar.hpp"

using namespace evoflow;

namespace {
Grammar& grammar() {
  static Grammar g = Grammar::parse(default_grammar_text());
  return g;
}

DerivationTree tree_for_seed(std::uint64_t seed, int max_der = 13) {
  RandomStream rng(seed);
  return random_derivation(grammar(), max_der, rng);
}

std::vector<std::string> algorithms(const WorkflowSpec& wf) {
  std::vector<std::string> names;
  for (const auto& s : wf.steps) names.push_back(s.algorithm);
  return names;
}
}  // namespace

TEST_CASE("phenotypes keep tree order and assign roles") {
  // Frozen shapes for the bundled grammar at maxDer=13.
  WorkflowSpec a = to_phenotype(grammar(), tree_for_seed(1));
  CHECK(algorithms(a) == std::vector<std::string>{"pca", "randomForest"});
  CHECK(a.steps[0].role == StepRole::Preprocessing);
  CHECK(a.steps[1].role == StepRole::Classifier);
  CHECK(&a.classifier() == &a.steps.back());

  WorkflowSpec b = to_phenotype(grammar(), tree_for_seed(8));
  CHECK(algorithms(b) == std::vector<std::string>{"minMaxScaler", "rbfSampler", "minMaxScaler",
                                                  "normalizer", "randomForest"});

  WorkflowSpec c = to_phenotype(grammar(), tree_for_seed(2));
  CHECK(algorithms(c) == std::vector<std::string>{"bernouilliNB"});
}

TEST_CASE("rendering is algorithm(name=value,...) joined by arrows") {
  WorkflowSpec wf;
  wf.steps.push_back({"minMaxScaler", StepRole::Preprocessing, {}});
  wf.steps.push_back({"kNN",
                      StepRole::Classifier,
                      {{"nNeighbors", HParamValue(7LL)},
                       {"weights", HParamValue(std::string("uniform"))},
                       {"p", HParamValue(2LL)}}});
  CHECK(render_workflow(wf) == "minMaxScaler() -> kNN(nNeighbors=7,weights=uniform,p=2)");
}

TEST_CASE("hyper-parameter values survive json round-trips bit-exactly") {
  std::vector<HParamValue> values = {
      HParamValue(true),
      HParamValue(false),
      HParamValue(42LL),
      HParamValue(-3LL),
      HParamValue(0.1 + 0.2),  // 0.30000000000000004
      HParamValue(1.2345678901234567e-9),
      HParamValue(std::string("entropy")),
  };
  for (const auto& v : values) {
    HParamValue back = value_from_json(value_to_json(v));
    CHECK(back == v);
  }
}

TEST_CASE("workflows survive json round-trips") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    WorkflowSpec wf = to_phenotype(grammar(), tree_for_seed(seed));
    WorkflowSpec back = workflow_from_json(workflow_to_json(wf));
    CHECK(back == wf);
  }
}

TEST_CASE("format_value round trips through render text") {
  CHECK(format_value(HParamValue(true)) == "true");
  CHECK(format_value(HParamValue(false)) == "false");
  CHECK(format_value(HParamValue(17LL)) == "17");
  CHECK(format_value(HParamValue(std::string("l2"))) == "l2");
  // Doubles print with enough digits to re-read exactly.
  double x = 0.1 + 0.2;
  CHECK(std::stod(format_value(HParamValue(x))) == x);
}

TEST_CASE("collect_slots walks the tree in workflow order") {
  DerivationTree t = tree_for_seed(56);  // rbfSampler -> kNN
  WorkflowSpec wf = to_phenotype(grammar(), t);
  REQUIRE(algorithms(wf) == std::vector<std::string>{"rbfSampler", "kNN"});
  auto slots = collect_slots(grammar(), t);
  REQUIRE(slots.size() == 5);
  CHECK(slots[0].algorithm == "rbfSampler");
  CHECK(slots[0].hparam == "gamma");
  CHECK(slots[0].step_index == 0);
  CHECK(slots[1].hparam == "nComponents");
  CHECK(slots[2].algorithm == "kNN");
  CHECK(slots[2].hparam == "nNeighbors");
  CHECK(slots[2].step_index == 1);
  CHECK(slots[3].hparam == "weights");
  CHECK(slots[4].hparam == "p");
  // The bound leaf values are the phenotype's hyper-parameter values.
  CHECK(slots[0].leaf->value == wf.steps[0].hparams[0].second);
  CHECK(slots[4].leaf->value == wf.steps[1].hparams[2].second);
}

TEST_CASE("common_hparams pairs matching algorithms slot by slot") {
  SUBCASE("same shape pairs every slot") {
    DerivationTree a = tree_for_seed(31);  // pca -> decisionTree
    DerivationTree b = tree_for_seed(55);  // pca -> decisionTree
    REQUIRE(algorithms(to_phenotype(grammar(), a)) ==
            std::vector<std::string>{"pca", "decisionTree"});
    REQUIRE(algorithms(to_phenotype(grammar(), b)) ==
            std::vector<std::string>{"pca", "decisionTree"});
    auto pairs = common_hparams(grammar(), a, b);
    REQUIRE(pairs.size() == 5);  // pca: whiten,nComponents; decisionTree: 3 slots
    for (const auto& [pa, pb] : pairs) {
      CHECK(pa.algorithm == pb.algorithm);
      CHECK(pa.hparam == pb.hparam);
    }
    CHECK(pairs[0].first.hparam == "whiten");
    CHECK(pairs[1].first.hparam == "nComponents");
    CHECK(pairs[2].first.hparam == "criterion");
  }
  SUBCASE("repeated algorithms pair by occurrence order") {
    DerivationTree a = tree_for_seed(40);  // pca -> pca -> normalizer -> kNN
    REQUIRE(algorithms(to_phenotype(grammar(), a)) ==
            std::vector<std::string>{"pca", "pca", "normalizer", "kNN"});
    DerivationTree b = tree_for_seed(1);  // pca -> randomForest
    auto pairs = common_hparams(grammar(), a, b);
    // Only the first pca of `a` can pair with the single pca of `b`.
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].first.algorithm == "pca");
    CHECK(pairs[0].first.step_index == 0);
    CHECK(pairs[1].first.step_index == 0);
    CHECK(pairs[0].second.step_index == 0);
  }
  SUBCASE("identical trees pair positionally") {
    DerivationTree a = tree_for_seed(40);
    DerivationTree b = tree_for_seed(40);
    auto pairs = common_hparams(grammar(), a, b);
    auto slots_a = collect_slots(grammar(), a);
    REQUIRE(pairs.size() == slots_a.size());  // 2 + 2 + 1 + 3
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      CHECK(pairs[i].first.step_index == pairs[i].second.step_index);
      CHECK(pairs[i].first.hparam == slots_a[i].hparam);
    }
  }
  SUBCASE("disjoint algorithm sets share nothing") {
    DerivationTree a = tree_for_seed(37);  // bare kNN
    DerivationTree b = tree_for_seed(24);  // bare gaussianNB
    REQUIRE(algorithms(to_phenotype(grammar(), a)) == std::vector<std::string>{"kNN"});
    REQUIRE(algorithms(to_phenotype(grammar(), b)) == std::vector<std::string>{"gaussianNB"});
    CHECK(common_hparams(grammar(), a, b).empty());
  }
}

TEST_CASE("step roles have stable names") {
  CHECK(role_name(StepRole::Preprocessing) == "preprocessing");
  CHECK(role_name(StepRole::Classifier) == "classifier");
  CHECK(role_from_name("preprocessing") == StepRole::Preprocessing);
  CHECK(role_from_name("classifier") == StepRole::Classifier);
  CHECK_THROWS_AS(role_from_name("other"), Error);
}

TEST_CASE("StepSpec::find locates hyper-parameters by name") {
  StepSpec s{"kNN", StepRole::Classifier, {{"nNeighbors", HParamValue(3LL)}}};
  REQUIRE(s.find("nNeighbors") != nullptr);
  CHECK(std::get<long long>(*s.find("nNeighbors")) == 3);
  CHECK(s.find("missing") == nullptr);
}
