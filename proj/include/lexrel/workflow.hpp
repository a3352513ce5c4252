#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexrel/baselines.hpp"
#include "lexrel/corpus.hpp"
#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/evaluation.hpp"
#include "lexrel/pipeline.hpp"
#include "lexrel/relation_model.hpp"

namespace lexrel {

// Derives an independent sub-seed from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct ExperimentConfig {
  std::uint64_t seed = 1;
  double val_fraction = 0.2;  // held out for scoring
  double dev_fraction = 0.15;  // of the rest, for combiner tuning
  int max_edges = kDefaultMaxEdges;
  TrainConfig relatedness = relatedness_preset();
  TrainConfig relations = relations_preset();
  PipelineConfig pipeline;
  Combination baseline_method = Combination::concat;
  LinearTrainConfig baseline;
};

struct ExperimentResult {
  std::size_t train_size = 0;
  std::size_t dev_size = 0;
  std::size_t val_size = 0;
  CombinerConfig combiner;
  double dev_relatedness_f1 = 0.0;
  std::string relatedness_model;  // serialized model files
  std::string relations_model;
  std::string baseline_model;
  ConfusionMatrix confusion;
  ScoreReport integrated;
  ScoreReport baseline;
  std::string integrated_report;  // TSV
  std::string baseline_report;
};

// Lexical split -> index -> train gate and relation models -> tune combiner
// on dev -> predict and score the held-out pairs, plus the distributional
// baseline on the same split. `dataset` carries relation labels.
ExperimentResult run_experiment(const std::vector<SentenceGraph>& corpus, const EmbeddingTable& table,
                                const std::vector<PairRecord>& dataset, const ExperimentConfig& config);

}  // namespace lexrel
