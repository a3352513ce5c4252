#include "lexrel/path_encoder.hpp"

#include <cmath>
#include <set>

#include "lexrel/error.hpp"

namespace lexrel {

Vocabulary::Vocabulary(std::vector<std::string> items) : items_(std::move(items)) {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!ids_.emplace(items_[i], static_cast<int>(i) + 1).second) {
      throw DataError("duplicate vocabulary entry '" + items_[i] + "'");
    }
  }
}

int Vocabulary::id(std::string_view item) const {
  auto it = ids_.find(item);
  return it == ids_.end() ? kUnknownId : it->second;
}

int direction_id(Direction d) {
  switch (d) {
    case Direction::up: return 1;
    case Direction::down: return 2;
    case Direction::root: return 3;
  }
  return kUnknownId;
}

EdgeIds EdgeVocab::ids(const PathEdge& edge) const {
  return {lemma.id(edge.lemma), pos.id(edge.pos), deprel.id(edge.deprel), direction_id(edge.direction)};
}

EdgeIdSeq EdgeVocab::ids(const DependencyPath& path) const {
  EdgeIdSeq out;
  out.reserve(path.edges.size());
  for (const PathEdge& e : path.edges) out.push_back(ids(e));
  return out;
}

namespace {

void fill_uniform(Matrix& m, double scale, Rng& rng) {
  for (double& v : m.data) v = uniform(rng, -scale, scale);
}

}  // namespace

EdgeVocab build_edge_vocab(const std::vector<const PathCounts*>& paths, const EdgeWidths& widths,
                           const EmbeddingTable* table, double scale, Rng& rng) {
  std::set<std::string> lemmas{std::string(kPlaceholderX), std::string(kPlaceholderY)};
  std::set<std::string> poses, deprels;
  for (const PathCounts* counts : paths) {
    for (const auto& [path, count] : *counts) {
      for (const PathEdge& e : path.edges) {
        lemmas.insert(e.lemma);
        poses.insert(e.pos);
        deprels.insert(e.deprel);
      }
    }
  }
  EdgeVocab v;
  v.lemma = Vocabulary({lemmas.begin(), lemmas.end()});
  v.pos = Vocabulary({poses.begin(), poses.end()});
  v.deprel = Vocabulary({deprels.begin(), deprels.end()});
  v.lemma_emb = Matrix(v.lemma.rows(), widths.lemma);
  v.pos_emb = Matrix(v.pos.rows(), widths.pos);
  v.deprel_emb = Matrix(v.deprel.rows(), widths.deprel);
  v.direction_emb = Matrix(4, widths.direction);
  fill_uniform(v.lemma_emb, scale, rng);
  fill_uniform(v.pos_emb, scale, rng);
  fill_uniform(v.deprel_emb, scale, rng);
  fill_uniform(v.direction_emb, scale, rng);

  if (table != nullptr && table->dimension() == widths.lemma) {
    const auto& items = v.lemma.items();
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!table->contains(items[i])) continue;
      auto src = table->lookup(items[i]);
      auto dst = v.lemma_emb.row(i + 1);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  }
  return v;
}

RecurrentParams make_recurrent(std::size_t input_size, std::size_t hidden_size, double scale, Rng& rng) {
  RecurrentParams rec;
  rec.input_weights = Matrix(4 * hidden_size, input_size);
  rec.recurrent_weights = Matrix(4 * hidden_size, hidden_size);
  rec.bias = Matrix(4 * hidden_size, 1);
  fill_uniform(rec.input_weights, scale, rng);
  fill_uniform(rec.recurrent_weights, scale, rng);
  fill_uniform(rec.bias, scale, rng);
  return rec;
}

void encode_edge_ids(const EdgeIds& ids, const EdgeVocab& vocab, std::span<double> out) {
  std::size_t off = 0;
  auto put = [&](const Matrix& m, int row) {
    auto r = m.row(static_cast<std::size_t>(row));
    std::copy(r.begin(), r.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
    off += m.cols;
  };
  put(vocab.lemma_emb, ids.lemma);
  put(vocab.pos_emb, ids.pos);
  put(vocab.deprel_emb, ids.deprel);
  put(vocab.direction_emb, ids.direction);
}

Vector encode_edge(const PathEdge& edge, const EdgeVocab& vocab) {
  Vector out(vocab.input_size());
  encode_edge_ids(vocab.ids(edge), vocab, out);
  return out;
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

Vector run_lstm(const EdgeIdSeq& path, const EdgeVocab& vocab, const RecurrentParams& rec, LstmTrace* trace) {
  if (path.empty()) throw ContractError("cannot encode an empty path");
  const std::size_t H = rec.hidden_size();
  const std::size_t D = rec.input_size();
  if (D != vocab.input_size()) throw ContractError("recurrent input size does not match edge vocabulary widths");

  Vector h(H, 0.0), c(H, 0.0), x(D), z(4 * H);
  if (trace != nullptr) {
    *trace = LstmTrace{};
    trace->cells.push_back(c);
    trace->hidden.push_back(h);
  }
  for (const EdgeIds& ids : path) {
    encode_edge_ids(ids, vocab, x);
    matvec(rec.input_weights, x, z);
    matvec(rec.recurrent_weights, h, z, true);
    for (std::size_t k = 0; k < 4 * H; ++k) z[k] += rec.bias.data[k];
    for (std::size_t k = 0; k < 3 * H; ++k) z[k] = sigmoid(z[k]);
    for (std::size_t k = 3 * H; k < 4 * H; ++k) z[k] = std::tanh(z[k]);
    for (std::size_t j = 0; j < H; ++j) {
      c[j] = z[H + j] * c[j] + z[j] * z[3 * H + j];
      h[j] = z[2 * H + j] * std::tanh(c[j]);
    }
    if (trace != nullptr) {
      trace->inputs.push_back(x);
      trace->gates.push_back(z);
      trace->cells.push_back(c);
      trace->hidden.push_back(h);
    }
  }
  return h;
}

void backprop_path(const EdgeIdSeq& path, const LstmTrace& trace, std::span<const double> d_hidden,
                   const RecurrentParams& rec, EdgeVocab& vocab_grad, RecurrentParams& rec_grad) {
  const std::size_t H = rec.hidden_size();
  const std::size_t D = rec.input_size();
  Vector dh(d_hidden.begin(), d_hidden.end());
  Vector dc(H, 0.0), dz(4 * H), dx(D), dh_prev(H);
  const EdgeWidths w = vocab_grad.widths();

  for (std::size_t t = path.size(); t-- > 0;) {
    const Vector& g = trace.gates[t];
    const Vector& c = trace.cells[t + 1];
    const Vector& c_prev = trace.cells[t];
    for (std::size_t j = 0; j < H; ++j) {
      const double i = g[j], f = g[H + j], o = g[2 * H + j], cand = g[3 * H + j];
      const double tc = std::tanh(c[j]);
      dc[j] += dh[j] * o * (1.0 - tc * tc);
      dz[j] = dc[j] * cand * i * (1.0 - i);
      dz[H + j] = dc[j] * c_prev[j] * f * (1.0 - f);
      dz[2 * H + j] = dh[j] * tc * o * (1.0 - o);
      dz[3 * H + j] = dc[j] * i * (1.0 - cand * cand);
      dc[j] *= f;
    }
    outer_acc(rec_grad.input_weights, dz, trace.inputs[t]);
    outer_acc(rec_grad.recurrent_weights, dz, trace.hidden[t]);
    axpy(1.0, dz, rec_grad.bias.data);

    std::fill(dx.begin(), dx.end(), 0.0);
    matvec_transposed_acc(rec.input_weights, dz, dx);
    std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
    matvec_transposed_acc(rec.recurrent_weights, dz, dh_prev);
    dh.swap(dh_prev);

    const EdgeIds& ids = path[t];
    std::span<const double> dxs(dx);
    axpy(1.0, dxs.subspan(0, w.lemma), vocab_grad.lemma_emb.row(static_cast<std::size_t>(ids.lemma)));
    axpy(1.0, dxs.subspan(w.lemma, w.pos), vocab_grad.pos_emb.row(static_cast<std::size_t>(ids.pos)));
    axpy(1.0, dxs.subspan(w.lemma + w.pos, w.deprel), vocab_grad.deprel_emb.row(static_cast<std::size_t>(ids.deprel)));
    axpy(1.0, dxs.subspan(w.lemma + w.pos + w.deprel, w.direction),
         vocab_grad.direction_emb.row(static_cast<std::size_t>(ids.direction)));
  }
}

Vector encode_path(const DependencyPath& path, const EdgeVocab& vocab, const RecurrentParams& rec) {
  if (path.edges.empty()) throw ContractError("cannot encode an empty path");
  return run_lstm(vocab.ids(path), vocab, rec, nullptr);
}

Vector average_paths(const PathCounts& paths, const EdgeVocab& vocab, const RecurrentParams& rec, AverageMode mode) {
  Vector out(rec.hidden_size(), 0.0);
  double total = 0.0;
  for (const auto& [path, count] : paths) {
    const double weight = mode == AverageMode::count_weighted ? static_cast<double>(count) : 1.0;
    axpy(weight, encode_path(path, vocab, rec), out);
    total += weight;
  }
  if (total > 0.0) {
    for (double& v : out) v /= total;
  }
  return out;
}

}  // namespace lexrel
