#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/random.hpp"
#include "lexrel/tensor.hpp"

namespace lexrel {

// String -> row id. Row 0 is reserved for unknown entries.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> items);

  int id(std::string_view item) const;
  std::size_t rows() const { return items_.size() + 1; }
  const std::vector<std::string>& items() const { return items_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.items_ == b.items_; }

 private:
  std::vector<std::string> items_;
  std::map<std::string, int, std::less<>> ids_;
};

inline constexpr int kUnknownId = 0;

struct EdgeWidths {
  std::size_t lemma = 50;
  std::size_t pos = 4;
  std::size_t deprel = 5;
  std::size_t direction = 1;

  std::size_t total() const { return lemma + pos + deprel + direction; }
};

// Direction rows: 0 unknown, 1 up, 2 down, 3 root.
int direction_id(Direction d);

struct EdgeIds {
  int lemma = kUnknownId;
  int pos = kUnknownId;
  int deprel = kUnknownId;
  int direction = kUnknownId;
};
using EdgeIdSeq = std::vector<EdgeIds>;

struct EdgeVocab {
  Vocabulary lemma;
  Vocabulary pos;
  Vocabulary deprel;
  Matrix lemma_emb;
  Matrix pos_emb;
  Matrix deprel_emb;
  Matrix direction_emb;

  EdgeWidths widths() const {
    return {lemma_emb.cols, pos_emb.cols, deprel_emb.cols, direction_emb.cols};
  }
  std::size_t input_size() const { return widths().total(); }
  EdgeIds ids(const PathEdge& edge) const;
  EdgeIdSeq ids(const DependencyPath& path) const;

  friend bool operator==(const EdgeVocab&, const EdgeVocab&) = default;
};

// Vocabularies from the lemmas/pos/deprels seen in `paths`; matrices uniform
// in [-scale, scale]. Lemma rows whose token is in `table` (when widths match)
// start from the pre-trained vector.
EdgeVocab build_edge_vocab(const std::vector<const PathCounts*>& paths, const EdgeWidths& widths,
                           const EmbeddingTable* table, double scale, Rng& rng);

// Single-layer LSTM, gates stacked as [input; forget; output; candidate].
struct RecurrentParams {
  Matrix input_weights;      // 4H x D
  Matrix recurrent_weights;  // 4H x H
  Matrix bias;               // 4H x 1

  std::size_t hidden_size() const { return recurrent_weights.cols; }
  std::size_t input_size() const { return input_weights.cols; }

  friend bool operator==(const RecurrentParams&, const RecurrentParams&) = default;
};

RecurrentParams make_recurrent(std::size_t input_size, std::size_t hidden_size, double scale, Rng& rng);

Vector encode_edge(const PathEdge& edge, const EdgeVocab& vocab);
void encode_edge_ids(const EdgeIds& ids, const EdgeVocab& vocab, std::span<double> out);

// Final hidden state; throws ContractError for an empty path.
Vector encode_path(const DependencyPath& path, const EdgeVocab& vocab, const RecurrentParams& rec);

enum class AverageMode { count_weighted, uniform };

Vector average_paths(const PathCounts& paths, const EdgeVocab& vocab, const RecurrentParams& rec,
                     AverageMode mode = AverageMode::count_weighted);

// Stored activations of one forward run, consumed by backprop_path.
struct LstmTrace {
  std::vector<Vector> inputs;
  std::vector<Vector> gates;  // post-activation, 4H each
  std::vector<Vector> cells;
  std::vector<Vector> hidden;
};

Vector run_lstm(const EdgeIdSeq& path, const EdgeVocab& vocab, const RecurrentParams& rec, LstmTrace* trace);

// Accumulates d(loss)/d(params) given d(loss)/d(final hidden state).
void backprop_path(const EdgeIdSeq& path, const LstmTrace& trace, std::span<const double> d_hidden,
                   const RecurrentParams& rec, EdgeVocab& vocab_grad, RecurrentParams& rec_grad);

}  // namespace lexrel
