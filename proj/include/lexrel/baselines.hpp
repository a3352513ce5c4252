#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/tensor.hpp"

namespace lexrel {

enum class Combination { concat, diff, asym };
Combination combination_from_name(const std::string& name);
std::string combination_name(Combination c);

// concat: [x ; y]   diff: x - y   asym: [x - y ; (x - y)^2]
Vector combine_vectors(std::span<const double> vx, std::span<const double> vy, Combination method);

struct LinearModel {
  std::vector<std::string> label_set;
  Matrix weights;  // labels x features
  Matrix bias;     // labels x 1

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

enum class Regularizer { l1, l2 };

struct LinearTrainConfig {
  Regularizer reg = Regularizer::l1;
  double strength = 0.0;
  int epochs = 200;
  double learning_rate = 0.01;
  std::uint64_t seed = 1;
};

struct LabeledFeatures {
  Vector features;
  std::string label;
};

// One-vs-rest hinge loss, per-example subgradient steps followed by the
// regularizer's proximal step (soft threshold for L1, shrink for L2).
LinearModel train_linear(const std::vector<LabeledFeatures>& data, const LinearTrainConfig& config);

std::vector<double> linear_scores(const LinearModel& model, std::span<const double> features);
const std::string& predict_linear(const LinearModel& model, std::span<const double> features);

// Cosine gate followed by a linear classifier over the related classes.
struct DistributionalBaseline {
  Combination method = Combination::concat;
  double cosine_threshold = 0.5;
  LinearModel classifier;

  std::string classify(const std::string& x, const std::string& y, const EmbeddingTable& table) const;
};

// Trains the classifier on the non-RANDOM records; the gate threshold is
// tuned on `val` (cosine only).
DistributionalBaseline train_baseline(const std::vector<PairRecord>& train, const std::vector<PairRecord>& val,
                                      Combination method, const LinearTrainConfig& config,
                                      const EmbeddingTable& table);

void save_baseline(std::ostream& out, const DistributionalBaseline& model);
DistributionalBaseline load_baseline(std::istream& in);

}  // namespace lexrel
