#include <doctest.h>

#include <cmath>

#include "lexrel/error.hpp"
#include "lexrel/pipeline.hpp"
#include "support.hpp"

using namespace lexrel;

namespace {

// A model whose output is the same fixed distribution for every pair.
ModelParams constant_model(const std::vector<std::string>& label_set, const std::vector<double>& probs,
                           const lexrel::testing::TinyWorld& w) {
  Rng rng(1);
  std::vector<PairRecord> records;
  for (const PairRecord& p : w.pairs) records.push_back({p.x, p.y, label_set[0]});
  ModelParams m = init_model(label_set, records, lexrel::testing::tiny_config(0, false), w.index, w.table, rng);
  m.w1.zero();
  for (std::size_t i = 0; i < probs.size(); ++i) m.b1(i, 0) = std::log(probs[i]);
  return m;
}

}  // namespace

TEST_CASE("syn heuristic examples") {
  PipelineConfig cfg;
  const auto& ls = labels::related_labels();
  ClassDistribution close{{0.35, 0.05, 0.14, 0.46}};
  CHECK(syn_heuristic(close, ls, 5, cfg) == "ANT");
  CHECK(syn_heuristic(close, ls, 3, cfg) == "ANT");
  CHECK(syn_heuristic(close, ls, 2, cfg) == "SYN");
  CHECK(syn_heuristic(ClassDistribution{{0.30, 0.05, 0.10, 0.55}}, ls, 100, cfg) == "SYN");
  CHECK(syn_heuristic(ClassDistribution{{0.1, 0.7, 0.1, 0.1}}, ls, 100, cfg) == "HYPER");
  CHECK(syn_heuristic(ClassDistribution{{0.05, 0.46, 0.14, 0.35}}, ls, 0, cfg) == "HYPER");
  CHECK_THROWS_AS(syn_heuristic(ClassDistribution{{0.5, 0.5}}, ls, 1, cfg), ContractError);
}

TEST_CASE("syn heuristic truth table") {
  PipelineConfig cfg;
  for (int mask = 0; mask < 8; ++mask) {
    auto c = lexrel::testing::syn_case(mask & 1, mask & 2, mask & 4);
    CAPTURE(mask);
    CHECK(syn_heuristic(c.dist, labels::related_labels(), c.paths, cfg) == c.expected);
  }
}

TEST_CASE("syn_margin zero disables the heuristic") {
  PipelineConfig cfg;
  cfg.syn_margin = 0.0;
  Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    Vector p(4);
    double sum = 0;
    for (double& v : p) sum += (v = uniform01(rng));
    for (double& v : p) v /= sum;
    ClassDistribution d{p};
    CHECK(syn_heuristic(d, labels::related_labels(), 1000, cfg) == labels::related_labels()[predict(d)]);
  }
}

TEST_CASE("heuristic never keeps SYN for a low-margin many-path pair") {
  PipelineConfig cfg;
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    Vector p(4);
    double sum = 0;
    for (double& v : p) sum += (v = uniform01(rng));
    for (double& v : p) v /= sum;
    ClassDistribution d{p};
    const long long paths = static_cast<long long>(uniform_index(rng, 8));
    const std::string out = syn_heuristic(d, labels::related_labels(), paths, cfg);
    std::vector<double> sorted = p;
    std::sort(sorted.rbegin(), sorted.rend());
    if (paths >= 3 && sorted[0] - sorted[1] < 0.2) CHECK(out != "SYN");
  }
}

TEST_CASE("classify_relation gates and then applies the heuristic") {
  Rng rng(4);
  auto w = lexrel::testing::tiny_world(rng, 2, 6);
  const std::string x = "alpha", y = "beta";
  DependencyPath p = path_from_string("X/NOUN/nsubj/<::Y/VERB/root/^");
  w.index.add({x, y}, p, 5);

  ModelParams gate_low = constant_model(labels::relatedness_classes(), {0.1, 0.9}, w);
  ModelParams gate_high = constant_model(labels::relatedness_classes(), {0.9, 0.1}, w);
  ModelParams hyper = constant_model(labels::related_labels(), {0.1, 0.7, 0.1, 0.1}, w);
  ModelParams close = constant_model(labels::related_labels(), {0.35, 0.05, 0.14, 0.46}, w);

  PipelineConfig cfg;
  cfg.combiner = CombinerConfig{0.0, 1.0, 0.29};
  CHECK(relatedness_inputs(x, y, gate_low, w.table, w.table, w.index).related == doctest::Approx(0.1));
  CHECK(classify_relation(x, y, cfg, {gate_low, hyper, w.table, w.table, w.index}) == labels::kRandom);
  CHECK(classify_relation(x, y, cfg, {gate_low, close, w.table, w.table, w.index}) == labels::kRandom);
  CHECK(classify_relation(x, y, cfg, {gate_high, hyper, w.table, w.table, w.index}) == "HYPER");
  CHECK(classify_relation(x, y, cfg, {gate_high, close, w.table, w.table, w.index}) == "ANT");

  CHECK(path_count(w.index, x, y, PathCountMode::occurrences) == 5);
  CHECK(path_count(w.index, x, y, PathCountMode::distinct) == 1);
  cfg.path_count = PathCountMode::distinct;
  CHECK(classify_relation(x, y, cfg, {gate_high, close, w.table, w.table, w.index}) == "SYN");

  ModelParams with_random = constant_model(labels::relation_labels(), {0.2, 0.2, 0.2, 0.2, 0.2}, w);
  CHECK_THROWS_AS(classify_relations({{x, y}}, cfg, {gate_high, with_random, w.table, w.table, w.index}),
                  ContractError);
}

TEST_CASE("parallel relation predictions equal the serial ones") {
  Rng rng(5);
  auto w = lexrel::testing::tiny_world(rng, 4, 60);
  std::vector<PairRecord> gate_data;
  for (const auto& p : w.pairs) gate_data.push_back({p.x, p.y, p.label == "ANT" ? labels::kUnrelated : labels::kRelated});
  auto cfg_model = lexrel::testing::tiny_config(0, false);
  TrainResult gate = train(gate_data, {}, labels::relatedness_classes(), cfg_model, w.index, w.table);
  TrainResult rel = train(w.pairs, {}, labels::related_labels(), cfg_model, w.index, w.table);
  PipelineConfig cfg;
  RelationModels models{gate.model, rel.model, w.table, w.table, w.index};
  auto pairs = term_pairs(w.pairs);
  CHECK(classify_relations(pairs, cfg, models) == classify_relations_serial(pairs, cfg, models));
  auto truth = classify_relatedness(pairs, cfg.combiner, gate.model, w.table, w.table, w.index);
  auto rels = classify_relations(pairs, cfg, models);
  for (std::size_t i = 0; i < pairs.size(); ++i) CHECK((truth[i] == labels::kFalse) == (rels[i] == labels::kRandom));
}
