#include "lexrel/pipeline.hpp"

#include <omp.h>

#include "lexrel/error.hpp"

namespace lexrel {

void PipelineConfig::validate() const {
  combiner.validate();
  if (syn_margin < 0.0) throw ContractError("syn_margin must be non-negative");
  if (syn_max_paths < 0) throw ContractError("syn_max_paths must be non-negative");
}

std::string syn_heuristic(const ClassDistribution& dist, const std::vector<std::string>& label_set,
                          long long path_count, const PipelineConfig& cfg) {
  if (dist.size() != label_set.size() || dist.size() == 0) throw ContractError("distribution and labels differ in size");
  const std::size_t top = predict(dist);
  if (dist.size() < 2 || label_set[top] != labels::kSyn) return label_set[top];
  std::size_t second = top == 0 ? 1 : 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (i != top && dist[i] > dist[second]) second = i;
  }
  const double margin = dist[top] - dist[second];
  if (margin < cfg.syn_margin && path_count >= cfg.syn_max_paths) return label_set[second];
  return label_set[top];
}

long long path_count(const PathIndex& index, const std::string& x, const std::string& y, PathCountMode mode) {
  return mode == PathCountMode::occurrences ? index.total_count(x, y)
                                            : static_cast<long long>(index.distinct_count(x, y));
}

std::string classify_relation(const std::string& x, const std::string& y, const PipelineConfig& cfg,
                              const RelationModels& m) {
  const RelatednessInputs in = relatedness_inputs(x, y, m.relatedness, m.cosine_table, m.model_table, m.index);
  if (!classify_related(combine(in, cfg.combiner), cfg.combiner.threshold)) return labels::kRandom;
  const ClassDistribution dist = classify(m.relations, x, y, m.index, m.model_table);
  return syn_heuristic(dist, m.relations.label_set, path_count(m.index, x, y, cfg.path_count), cfg);
}

namespace {

void check_models(const PipelineConfig& cfg, const RelationModels& m) {
  cfg.validate();
  if (m.relatedness.label_index(labels::kRelated) < 0) throw ContractError("gate model has no RELATED class");
  if (m.relations.label_index(labels::kRandom) >= 0) {
    throw ContractError("relation model must be trained on related classes only");
  }
}

}  // namespace

std::vector<std::string> classify_relations_serial(const std::vector<TermPair>& pairs, const PipelineConfig& cfg,
                                                   const RelationModels& models) {
  check_models(cfg, models);
  std::vector<std::string> out;
  out.reserve(pairs.size());
  for (const auto& [x, y] : pairs) out.push_back(classify_relation(x, y, cfg, models));
  return out;
}

std::vector<std::string> classify_relations(const std::vector<TermPair>& pairs, const PipelineConfig& cfg,
                                            const RelationModels& models) {
  check_models(cfg, models);
  std::vector<std::string> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& [x, y] = pairs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = classify_relation(x, y, cfg, models);
  }
  return out;
}

std::vector<std::string> classify_relatedness(const std::vector<TermPair>& pairs, const CombinerConfig& cfg,
                                              const ModelParams& relatedness, const EmbeddingTable& cosine_table,
                                              const EmbeddingTable& model_table, const PathIndex& index) {
  cfg.validate();
  auto inputs = relatedness_inputs_all(pairs, relatedness, cosine_table, model_table, index);
  std::vector<std::string> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) out.push_back(classify_related(combine(in, cfg), cfg.threshold) ? labels::kTrue : labels::kFalse);
  return out;
}

}  // namespace lexrel
