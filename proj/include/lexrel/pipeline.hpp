#pragma once

#include <string>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/relatedness.hpp"
#include "lexrel/relation_model.hpp"

namespace lexrel {

enum class PathCountMode { occurrences, distinct };

struct PipelineConfig {
  CombinerConfig combiner;
  double syn_margin = 0.2;
  long long syn_max_paths = 3;
  PathCountMode path_count = PathCountMode::occurrences;
  std::vector<std::string> related_labels = labels::related_labels();

  void validate() const;
};

// Demotes SYN to the runner-up class when the top-two margin is below
// syn_margin and the pair has at least syn_max_paths paths.
std::string syn_heuristic(const ClassDistribution& dist, const std::vector<std::string>& label_set,
                          long long path_count, const PipelineConfig& cfg);

struct RelationModels {
  const ModelParams& relatedness;  // RELATED / UNRELATED
  const ModelParams& relations;    // related classes only
  const EmbeddingTable& cosine_table;
  const EmbeddingTable& model_table;
  const PathIndex& index;
};

long long path_count(const PathIndex& index, const std::string& x, const std::string& y, PathCountMode mode);

std::string classify_relation(const std::string& x, const std::string& y, const PipelineConfig& cfg,
                              const RelationModels& models);

// Predictions in input order. Parallel over pairs; equal to the serial variant.
std::vector<std::string> classify_relations(const std::vector<TermPair>& pairs, const PipelineConfig& cfg,
                                            const RelationModels& models);
std::vector<std::string> classify_relations_serial(const std::vector<TermPair>& pairs, const PipelineConfig& cfg,
                                                   const RelationModels& models);

// Subtask-1 decisions (TRUE / FALSE) in input order.
std::vector<std::string> classify_relatedness(const std::vector<TermPair>& pairs, const CombinerConfig& cfg,
                                              const ModelParams& relatedness, const EmbeddingTable& cosine_table,
                                              const EmbeddingTable& model_table, const PathIndex& index);

}  // namespace lexrel
