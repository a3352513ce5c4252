#include <benchmark/benchmark.h>

#include <memory>

#include "lexrel/corpus.hpp"
#include "lexrel/pipeline.hpp"
#include "lexrel/relatedness.hpp"
#include "lexrel/relation_model.hpp"
#include "lexrel/synthetic.hpp"

using namespace lexrel;

namespace {

struct Fixture {
  SyntheticData data;
  std::vector<TermPair> pairs;
  PathIndex index;
  ModelParams gate;
  ModelParams relations;
  std::vector<RelatednessInputs> inputs;
  std::vector<bool> related;
};

const Fixture& fixture() {
  static const std::unique_ptr<Fixture> f = [] {
    auto f = std::make_unique<Fixture>();
    f->data = generate_synthetic(SyntheticConfig{});
    f->pairs = term_pairs(f->data.relations);
    f->index = build_path_index(f->data.corpus, f->pairs);

    TrainConfig cfg;
    cfg.epochs = 1;
    std::vector<PairRecord> gate_data, rel_data;
    for (const PairRecord& r : f->data.relations) {
      const bool rel = r.label != labels::kRandom;
      gate_data.push_back({r.x, r.y, rel ? labels::kRelated : labels::kUnrelated});
      if (rel) rel_data.push_back(r);
      f->related.push_back(rel);
    }
    f->gate = train(gate_data, {}, labels::relatedness_classes(), cfg, f->index, f->data.embeddings).model;
    f->relations = train(rel_data, {}, labels::related_labels(), cfg, f->index, f->data.embeddings).model;
    f->inputs = relatedness_inputs_all(f->pairs, f->gate, f->data.embeddings, f->data.embeddings, f->index);
    return f;
  }();
  return *f;
}

void BM_PathIndexSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(build_path_index_serial(f.data.corpus, f.pairs));
}

void BM_PathIndexParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(build_path_index(f.data.corpus, f.pairs));
}

void BM_ClassifySerial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(classify_all_serial(f.gate, f.pairs, f.index, f.data.embeddings));
}

void BM_ClassifyParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(classify_all(f.gate, f.pairs, f.index, f.data.embeddings));
}

void BM_RelatednessInputsSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        relatedness_inputs_all_serial(f.pairs, f.gate, f.data.embeddings, f.data.embeddings, f.index));
  }
}

void BM_RelatednessInputsParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(relatedness_inputs_all(f.pairs, f.gate, f.data.embeddings, f.data.embeddings, f.index));
  }
}

void BM_RelationsSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  PipelineConfig cfg;
  RelationModels models{f.gate, f.relations, f.data.embeddings, f.data.embeddings, f.index};
  for (auto _ : state) benchmark::DoNotOptimize(classify_relations_serial(f.pairs, cfg, models));
}

void BM_RelationsParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  PipelineConfig cfg;
  RelationModels models{f.gate, f.relations, f.data.embeddings, f.data.embeddings, f.index};
  for (auto _ : state) benchmark::DoNotOptimize(classify_relations(f.pairs, cfg, models));
}

void BM_TuneSerial(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(tune_combiner_serial(f.inputs, f.related));
}

void BM_TuneParallel(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(tune_combiner(f.inputs, f.related));
}

}  // namespace

BENCHMARK(BM_PathIndexSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PathIndexParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelatednessInputsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelatednessInputsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelationsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelationsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TuneSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TuneParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
