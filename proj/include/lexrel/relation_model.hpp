#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/path_encoder.hpp"
#include "lexrel/random.hpp"
#include "lexrel/tensor.hpp"

namespace lexrel {

struct ClassDistribution {
  std::vector<double> scores;

  std::size_t size() const { return scores.size(); }
  double operator[](std::size_t i) const { return scores[i]; }
};

struct TrainConfig {
  int hidden_layers = 0;
  std::size_t hidden_units = 16;
  double word_dropout_rate = 0.0;
  int epochs = 3;
  double learning_rate = 0.1;
  std::uint64_t seed = 1;
  std::size_t path_hidden = 10;
  // lemma width 0 means "use the embedding table's dimension".
  EdgeWidths edge_widths{0, 4, 5, 1};
  double init_scale = 0.1;
  AverageMode average = AverageMode::count_weighted;
  bool tune_word_embeddings = false;

  // Throws ContractError on out-of-range fields.
  void validate() const;
};

// Preset hyper-parameters selected on the shared-task validation data.
TrainConfig relatedness_preset();  // no hidden layer, no dropout, 3 epochs
TrainConfig relations_preset();    // no hidden layer, no dropout, 5 epochs

struct ModelParams {
  std::vector<std::string> label_set;
  int hidden_layers = 0;
  std::size_t word_dim = 0;
  AverageMode average = AverageMode::count_weighted;

  EdgeVocab edges;
  RecurrentParams lstm;
  Matrix w1, b1;
  Matrix w2, b2;  // empty unless hidden_layers == 1

  // Trainable copies of the distributional vectors; empty when frozen.
  Vocabulary word_vocab;
  Matrix word_emb;

  std::size_t path_dim() const { return lstm.hidden_size(); }
  std::size_t feature_width() const { return 2 * word_dim + path_dim(); }
  bool tunes_words() const { return !word_emb.empty(); }
  // -1 when absent.
  int label_index(std::string_view label) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

template <typename Params, typename F>
void for_each_tensor(Params& p, F&& fn) {
  fn("lemma_emb", p.edges.lemma_emb);
  fn("pos_emb", p.edges.pos_emb);
  fn("deprel_emb", p.edges.deprel_emb);
  fn("direction_emb", p.edges.direction_emb);
  fn("lstm_input", p.lstm.input_weights);
  fn("lstm_recurrent", p.lstm.recurrent_weights);
  fn("lstm_bias", p.lstm.bias);
  fn("w1", p.w1);
  fn("b1", p.b1);
  fn("w2", p.w2);
  fn("b2", p.b2);
  fn("word_emb", p.word_emb);
}

ModelParams zeros_like(const ModelParams& p);
std::size_t parameter_count(const ModelParams& p);

// [lookup(x) ; v_paths ; lookup(y)]
Vector featurize(std::string_view x, std::string_view y, std::span<const double> v_paths, const EmbeddingTable& table);

Vector logits(std::span<const double> v_xy, const ModelParams& params);
ClassDistribution softmax(std::span<const double> logits);
ClassDistribution forward(std::span<const double> v_xy, const ModelParams& params);

// Argmax, ties to the lowest index.
std::size_t predict(const ClassDistribution& dist);
const std::string& predict_label(const ClassDistribution& dist, const ModelParams& params);

struct WeightedPath {
  EdgeIdSeq ids;
  double weight = 0.0;  // normalized so a pair's weights sum to 1
};

// A pair resolved against a model's vocabularies.
struct PreparedPair {
  Vector x_vec;
  Vector y_vec;
  int x_word = -1;  // rows of ModelParams::word_emb when tuned
  int y_word = -1;
  std::vector<WeightedPath> paths;
};

PreparedPair prepare(const ModelParams& params, std::string_view x, std::string_view y, const PathCounts& paths,
                     const EmbeddingTable& table);

Vector path_vector(const ModelParams& params, const PreparedPair& pair);
Vector feature_vector(const ModelParams& params, const PreparedPair& pair);
ClassDistribution classify(const ModelParams& params, const PreparedPair& pair);
ClassDistribution classify(const ModelParams& params, const std::string& x, const std::string& y,
                           const PathIndex& index, const EmbeddingTable& table);

// Parallel over pairs; identical to the serial variant.
std::vector<ClassDistribution> classify_all(const ModelParams& params, const std::vector<TermPair>& pairs,
                                            const PathIndex& index, const EmbeddingTable& table);
std::vector<ClassDistribution> classify_all_serial(const ModelParams& params, const std::vector<TermPair>& pairs,
                                                   const PathIndex& index, const EmbeddingTable& table);

struct LabeledPair {
  PreparedPair input;
  int gold = 0;
};

// Mean cross-entropy over the batch. `grads` must come from zeros_like and is
// overwritten. Word dropout needs an rng; pass rate 0 for a deterministic pass.
double loss_and_gradients(std::span<const LabeledPair> batch, const ModelParams& params, ModelParams& grads,
                          double word_dropout_rate = 0.0, Rng* rng = nullptr);
double loss(std::span<const LabeledPair> batch, const ModelParams& params);

// Fresh parameters with vocabularies drawn from the training pairs' paths.
ModelParams init_model(const std::vector<std::string>& label_set, const std::vector<PairRecord>& trainset,
                       const TrainConfig& config, const PathIndex& index, const EmbeddingTable& table, Rng& rng);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = -1.0;  // -1 without a validation set
};

struct TrainResult {
  ModelParams model;
  double final_loss = 0.0;
  std::vector<EpochStats> history;
};

// Per-example SGD for `config.epochs` passes. Bit-identical for a fixed seed.
TrainResult train(const std::vector<PairRecord>& trainset, const std::vector<PairRecord>& val,
                  const std::vector<std::string>& label_set, const TrainConfig& config, const PathIndex& index,
                  const EmbeddingTable& table);

void save_model(std::ostream& out, const ModelParams& params);
ModelParams load_model(std::istream& in);
void save_model_file(const std::string& path, const ModelParams& params);
ModelParams load_model_file(const std::string& path);

std::string to_json_string(const TrainConfig& config);

}  // namespace lexrel
