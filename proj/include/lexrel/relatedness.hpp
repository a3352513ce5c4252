#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/relation_model.hpp"

namespace lexrel {

struct CombinerConfig {
  double w_cos = 0.7;
  double w_model = 0.3;
  double threshold = 0.29;

  void validate() const;
  friend bool operator==(const CombinerConfig&, const CombinerConfig&) = default;
};

// Cosine alone, and the two-class model alone at its natural 0.5 cut.
CombinerConfig cosine_only(double threshold);
CombinerConfig model_only();

// (cos + 1) / 2; 0.5 when either vector is all zero.
double cosine_norm(std::span<const double> a, std::span<const double> b);

// The two inputs the combiner mixes, for one pair.
struct RelatednessInputs {
  double cosine = 0.5;   // normalized
  double related = 0.0;  // model's RELATED probability
};

double combine(const RelatednessInputs& in, const CombinerConfig& cfg);

RelatednessInputs relatedness_inputs(const std::string& x, const std::string& y, const ModelParams& model,
                                     const EmbeddingTable& cosine_table, const EmbeddingTable& model_table,
                                     const PathIndex& index);
// Parallel over pairs; matches the serial variant exactly.
std::vector<RelatednessInputs> relatedness_inputs_all(const std::vector<TermPair>& pairs, const ModelParams& model,
                                                      const EmbeddingTable& cosine_table,
                                                      const EmbeddingTable& model_table, const PathIndex& index);
std::vector<RelatednessInputs> relatedness_inputs_all_serial(const std::vector<TermPair>& pairs,
                                                             const ModelParams& model,
                                                             const EmbeddingTable& cosine_table,
                                                             const EmbeddingTable& model_table,
                                                             const PathIndex& index);

// w_C * cosine_norm + w_L * c[RELATED]. The same table serves both roles.
double rel_score(const std::string& x, const std::string& y, const CombinerConfig& cfg, const ModelParams& model,
                 const EmbeddingTable& table, const PathIndex& index);

inline bool classify_related(double score, double threshold) { return score >= threshold; }

struct TuneResult {
  CombinerConfig config;
  double f1 = 0.0;
};

// Grid search: w_C in steps of 0.05, t in steps of 0.01, maximizing F1 of the
// related class; ties go to smaller w_L, then smaller t. `related` marks gold
// TRUE pairs.
TuneResult tune_combiner(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related);
TuneResult tune_combiner_serial(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related);
// Best threshold for a fixed weighting.
TuneResult tune_threshold(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related, double w_cos);

// Validation records labelled TRUE/FALSE.
TuneResult tune_combiner(const std::vector<PairRecord>& val, const ModelParams& model, const EmbeddingTable& table,
                         const PathIndex& index);

double related_f1(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related,
                  const CombinerConfig& cfg);

// "w_C=..", "w_L=..", "t=.." lines plus optional extra key=value lines.
void write_combiner(std::ostream& out, const CombinerConfig& cfg, double validation_f1 = -1.0);
CombinerConfig read_combiner(std::istream& in);
CombinerConfig read_combiner_file(const std::string& path);

}  // namespace lexrel
