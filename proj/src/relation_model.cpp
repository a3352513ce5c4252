#include "lexrel/relation_model.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lexrel/error.hpp"
#include "lexrel/text.hpp"

namespace lexrel {

using json = nlohmann::json;

void TrainConfig::validate() const {
  if (hidden_layers != 0 && hidden_layers != 1) throw ContractError("hidden_layers must be 0 or 1");
  if (hidden_layers == 1 && hidden_units == 0) throw ContractError("hidden_units must be positive");
  if (!(word_dropout_rate >= 0.0 && word_dropout_rate < 1.0)) throw ContractError("word_dropout_rate must be in [0,1)");
  if (epochs < 1) throw ContractError("epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw ContractError("learning_rate must be positive");
  if (path_hidden == 0) throw ContractError("path_hidden must be positive");
  if (edge_widths.pos == 0 || edge_widths.deprel == 0 || edge_widths.direction == 0) {
    throw ContractError("edge component widths must be positive");
  }
  if (!(init_scale > 0.0)) throw ContractError("init_scale must be positive");
}

TrainConfig relatedness_preset() {
  TrainConfig c;
  c.hidden_layers = 0;
  c.word_dropout_rate = 0.0;
  c.epochs = 3;
  return c;
}

TrainConfig relations_preset() {
  TrainConfig c;
  c.hidden_layers = 0;
  c.word_dropout_rate = 0.0;
  c.epochs = 5;
  return c;
}

int ModelParams::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < label_set.size(); ++i) {
    if (label_set[i] == label) return static_cast<int>(i);
  }
  return -1;
}

ModelParams zeros_like(const ModelParams& p) {
  ModelParams g = p;
  for_each_tensor(g, [](const char*, Matrix& m) { m.zero(); });
  return g;
}

std::size_t parameter_count(const ModelParams& p) {
  std::size_t n = 0;
  for_each_tensor(p, [&](const char*, const Matrix& m) { n += m.size(); });
  return n;
}

Vector featurize(std::string_view x, std::string_view y, std::span<const double> v_paths, const EmbeddingTable& table) {
  auto vx = table.lookup(x);
  auto vy = table.lookup(y);
  Vector out;
  out.reserve(vx.size() + v_paths.size() + vy.size());
  out.insert(out.end(), vx.begin(), vx.end());
  out.insert(out.end(), v_paths.begin(), v_paths.end());
  out.insert(out.end(), vy.begin(), vy.end());
  return out;
}

namespace {

void check_width(std::span<const double> v_xy, const ModelParams& params) {
  if (v_xy.size() != params.w1.cols) {
    throw ContractError("feature width " + std::to_string(v_xy.size()) + " does not match classifier input width " +
                        std::to_string(params.w1.cols));
  }
}

}  // namespace

Vector logits(std::span<const double> v_xy, const ModelParams& params) {
  check_width(v_xy, params);
  Vector z(params.w1.rows);
  matvec(params.w1, v_xy, z);
  axpy(1.0, params.b1.data, z);
  if (params.hidden_layers == 0) return z;
  for (double& v : z) v = std::tanh(v);
  Vector out(params.w2.rows);
  matvec(params.w2, z, out);
  axpy(1.0, params.b2.data, out);
  return out;
}

ClassDistribution softmax(std::span<const double> z) {
  ClassDistribution d;
  d.scores.resize(z.size());
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    d.scores[i] = std::exp(z[i] - mx);
    sum += d.scores[i];
  }
  for (double& s : d.scores) s /= sum;
  return d;
}

ClassDistribution forward(std::span<const double> v_xy, const ModelParams& params) {
  return softmax(logits(v_xy, params));
}

std::size_t predict(const ClassDistribution& dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.scores.size(); ++i) {
    if (dist.scores[i] > dist.scores[best]) best = i;
  }
  return best;
}

const std::string& predict_label(const ClassDistribution& dist, const ModelParams& params) {
  return params.label_set.at(predict(dist));
}

PreparedPair prepare(const ModelParams& params, std::string_view x, std::string_view y, const PathCounts& paths,
                     const EmbeddingTable& table) {
  PreparedPair p;
  if (params.tunes_words()) {
    p.x_word = params.word_vocab.id(to_lower(x));
    p.y_word = params.word_vocab.id(to_lower(y));
  } else {
    if (table.dimension() != params.word_dim) {
      throw ContractError("embedding table dimension " + std::to_string(table.dimension()) +
                          " does not match model word dimension " + std::to_string(params.word_dim));
    }
    auto vx = table.lookup(x);
    auto vy = table.lookup(y);
    p.x_vec.assign(vx.begin(), vx.end());
    p.y_vec.assign(vy.begin(), vy.end());
  }
  double total = 0.0;
  for (const auto& [path, count] : paths) {
    const double w = params.average == AverageMode::count_weighted ? static_cast<double>(count) : 1.0;
    p.paths.push_back(WeightedPath{params.edges.ids(path), w});
    total += w;
  }
  for (WeightedPath& wp : p.paths) wp.weight /= total;
  return p;
}

namespace {

struct Tape {
  std::vector<EdgeIdSeq> paths;  // after dropout
  std::vector<LstmTrace> traces;
  Vector features;
  Vector hidden;  // tanh activations when hidden_layers == 1
  Vector probs;
};

std::span<const double> word_vector(const ModelParams& params, const Vector& fixed, int word) {
  if (word >= 0) return params.word_emb.row(static_cast<std::size_t>(word));
  return fixed;
}

// Returns logits; fills `tape` when non-null.
Vector run_forward(const ModelParams& params, const PreparedPair& pair, double dropout, Rng* rng, Tape* tape) {
  const std::size_t H = params.path_dim();
  Vector v_paths(H, 0.0);
  if (tape != nullptr) {
    tape->paths.clear();
    tape->traces.clear();
  }
  for (const WeightedPath& wp : pair.paths) {
    const EdgeIdSeq* ids = &wp.ids;
    EdgeIdSeq dropped;
    if (dropout > 0.0 && rng != nullptr) {
      dropped = wp.ids;
      for (EdgeIds& e : dropped) {
        if (bernoulli(*rng, dropout)) e.lemma = kUnknownId;
      }
      ids = &dropped;
    }
    LstmTrace trace;
    Vector h = run_lstm(*ids, params.edges, params.lstm, tape != nullptr ? &trace : nullptr);
    axpy(wp.weight, h, v_paths);
    if (tape != nullptr) {
      tape->paths.push_back(*ids);
      tape->traces.push_back(std::move(trace));
    }
  }

  auto vx = word_vector(params, pair.x_vec, pair.x_word);
  auto vy = word_vector(params, pair.y_vec, pair.y_word);
  Vector features;
  features.reserve(params.feature_width());
  features.insert(features.end(), vx.begin(), vx.end());
  features.insert(features.end(), v_paths.begin(), v_paths.end());
  features.insert(features.end(), vy.begin(), vy.end());
  check_width(features, params);

  Vector z(params.w1.rows);
  matvec(params.w1, features, z);
  axpy(1.0, params.b1.data, z);
  if (params.hidden_layers == 1) {
    for (double& v : z) v = std::tanh(v);
    Vector out(params.w2.rows);
    matvec(params.w2, z, out);
    axpy(1.0, params.b2.data, out);
    if (tape != nullptr) tape->hidden = z;
    z = std::move(out);
  }
  if (tape != nullptr) tape->features = std::move(features);
  return z;
}

double log_softmax_at(const Vector& z, std::size_t k) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - mx);
  return z[k] - mx - std::log(sum);
}

// d(loss)/d(logits) is scaled by `scale` (1/batch size).
void run_backward(const ModelParams& params, const PreparedPair& pair, const Tape& tape, const Vector& probs, int gold,
                  double scale, ModelParams& grads) {
  Vector d_out = probs;
  d_out[static_cast<std::size_t>(gold)] -= 1.0;
  for (double& v : d_out) v *= scale;

  Vector d_first;  // gradient w.r.t. the first affine layer's output
  if (params.hidden_layers == 1) {
    outer_acc(grads.w2, d_out, tape.hidden);
    axpy(1.0, d_out, grads.b2.data);
    Vector d_hidden(params.w2.cols, 0.0);
    matvec_transposed_acc(params.w2, d_out, d_hidden);
    for (std::size_t i = 0; i < d_hidden.size(); ++i) d_hidden[i] *= 1.0 - tape.hidden[i] * tape.hidden[i];
    d_first = std::move(d_hidden);
  } else {
    d_first = std::move(d_out);
  }
  outer_acc(grads.w1, d_first, tape.features);
  axpy(1.0, d_first, grads.b1.data);

  Vector d_features(params.w1.cols, 0.0);
  matvec_transposed_acc(params.w1, d_first, d_features);
  const std::size_t D = params.word_dim;
  const std::size_t H = params.path_dim();
  std::span<const double> df(d_features);

  if (params.tunes_words()) {
    axpy(1.0, df.subspan(0, D), grads.word_emb.row(static_cast<std::size_t>(pair.x_word)));
    axpy(1.0, df.subspan(D + H, D), grads.word_emb.row(static_cast<std::size_t>(pair.y_word)));
  }

  auto d_paths = df.subspan(D, H);
  Vector dh(H);
  for (std::size_t p = 0; p < tape.paths.size(); ++p) {
    const double w = pair.paths[p].weight;
    for (std::size_t j = 0; j < H; ++j) dh[j] = w * d_paths[j];
    backprop_path(tape.paths[p], tape.traces[p], dh, params.lstm, grads.edges, grads.lstm);
  }
}

}  // namespace

Vector path_vector(const ModelParams& params, const PreparedPair& pair) {
  Vector v(params.path_dim(), 0.0);
  for (const WeightedPath& wp : pair.paths) axpy(wp.weight, run_lstm(wp.ids, params.edges, params.lstm, nullptr), v);
  return v;
}

Vector feature_vector(const ModelParams& params, const PreparedPair& pair) {
  Vector v_paths = path_vector(params, pair);
  auto vx = word_vector(params, pair.x_vec, pair.x_word);
  auto vy = word_vector(params, pair.y_vec, pair.y_word);
  Vector out(vx.begin(), vx.end());
  out.insert(out.end(), v_paths.begin(), v_paths.end());
  out.insert(out.end(), vy.begin(), vy.end());
  return out;
}

ClassDistribution classify(const ModelParams& params, const PreparedPair& pair) {
  return softmax(run_forward(params, pair, 0.0, nullptr, nullptr));
}

ClassDistribution classify(const ModelParams& params, const std::string& x, const std::string& y,
                           const PathIndex& index, const EmbeddingTable& table) {
  return classify(params, prepare(params, x, y, index.paths(x, y), table));
}

std::vector<ClassDistribution> classify_all_serial(const ModelParams& params, const std::vector<TermPair>& pairs,
                                                   const PathIndex& index, const EmbeddingTable& table) {
  std::vector<ClassDistribution> out;
  out.reserve(pairs.size());
  for (const auto& [x, y] : pairs) out.push_back(classify(params, x, y, index, table));
  return out;
}

std::vector<ClassDistribution> classify_all(const ModelParams& params, const std::vector<TermPair>& pairs,
                                            const PathIndex& index, const EmbeddingTable& table) {
  std::vector<ClassDistribution> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& [x, y] = pairs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = classify(params, x, y, index, table);
  }
  return out;
}

double loss_and_gradients(std::span<const LabeledPair> batch, const ModelParams& params, ModelParams& grads,
                          double word_dropout_rate, Rng* rng) {
  if (batch.empty()) throw ContractError("loss_and_gradients needs a nonempty batch");
  for_each_tensor(grads, [](const char*, Matrix& m) { m.zero(); });
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  Tape tape;
  for (const LabeledPair& ex : batch) {
    Vector z = run_forward(params, ex.input, word_dropout_rate, rng, &tape);
    const auto gold = static_cast<std::size_t>(ex.gold);
    total -= log_softmax_at(z, gold);
    ClassDistribution probs = softmax(z);
    run_backward(params, ex.input, tape, probs.scores, ex.gold, scale, grads);
  }
  return total * scale;
}

double loss(std::span<const LabeledPair> batch, const ModelParams& params) {
  if (batch.empty()) throw ContractError("loss needs a nonempty batch");
  double total = 0.0;
  for (const LabeledPair& ex : batch) {
    Vector z = run_forward(params, ex.input, 0.0, nullptr, nullptr);
    total -= log_softmax_at(z, static_cast<std::size_t>(ex.gold));
  }
  return total / static_cast<double>(batch.size());
}

namespace {

void fill_uniform(Matrix& m, double scale, Rng& rng) {
  for (double& v : m.data) v = uniform(rng, -scale, scale);
}

void check_labels(const std::vector<PairRecord>& records, const std::vector<std::string>& label_set) {
  std::set<std::string> bad;
  for (const PairRecord& r : records) {
    if (std::find(label_set.begin(), label_set.end(), r.label) == label_set.end()) bad.insert(r.label);
  }
  if (!bad.empty()) {
    std::string msg = "labels outside the model's label set:";
    for (const auto& b : bad) msg += " " + b;
    throw DataError(msg);
  }
}

std::vector<LabeledPair> prepare_all(const ModelParams& params, const std::vector<PairRecord>& records,
                                     const PathIndex& index, const EmbeddingTable& table) {
  std::vector<LabeledPair> out;
  out.reserve(records.size());
  for (const PairRecord& r : records) {
    out.push_back(LabeledPair{prepare(params, r.x, r.y, index.paths(r.x, r.y), table), params.label_index(r.label)});
  }
  return out;
}

}  // namespace

ModelParams init_model(const std::vector<std::string>& label_set, const std::vector<PairRecord>& trainset,
                       const TrainConfig& config, const PathIndex& index, const EmbeddingTable& table, Rng& rng) {
  config.validate();
  if (label_set.size() < 2) throw ContractError("a classifier needs at least two labels");
  if (table.dimension() == 0) throw ContractError("embedding table is empty");
  ModelParams p;
  p.label_set = label_set;
  p.hidden_layers = config.hidden_layers;
  p.word_dim = table.dimension();
  p.average = config.average;

  std::vector<const PathCounts*> counts;
  counts.reserve(trainset.size());
  for (const PairRecord& r : trainset) counts.push_back(&index.paths(r.x, r.y));
  EdgeWidths widths = config.edge_widths;
  if (widths.lemma == 0) widths.lemma = table.dimension();
  p.edges = build_edge_vocab(counts, widths, &table, config.init_scale, rng);
  p.lstm = make_recurrent(widths.total(), config.path_hidden, config.init_scale, rng);

  const std::size_t in = p.feature_width();
  const std::size_t out = label_set.size();
  if (config.hidden_layers == 1) {
    p.w1 = Matrix(config.hidden_units, in);
    p.b1 = Matrix(config.hidden_units, 1);
    p.w2 = Matrix(out, config.hidden_units);
    p.b2 = Matrix(out, 1);
  } else {
    p.w1 = Matrix(out, in);
    p.b1 = Matrix(out, 1);
  }
  fill_uniform(p.w1, config.init_scale, rng);
  fill_uniform(p.b1, config.init_scale, rng);
  fill_uniform(p.w2, config.init_scale, rng);
  fill_uniform(p.b2, config.init_scale, rng);

  if (config.tune_word_embeddings) {
    std::set<std::string> words;
    for (const PairRecord& r : trainset) {
      words.insert(to_lower(r.x));
      words.insert(to_lower(r.y));
    }
    p.word_vocab = Vocabulary({words.begin(), words.end()});
    p.word_emb = Matrix(p.word_vocab.rows(), p.word_dim);
    auto unk = table.unk_vector();
    std::copy(unk.begin(), unk.end(), p.word_emb.row(0).begin());
    const auto& items = p.word_vocab.items();
    for (std::size_t i = 0; i < items.size(); ++i) {
      auto v = table.lookup(items[i]);
      std::copy(v.begin(), v.end(), p.word_emb.row(i + 1).begin());
    }
  }
  return p;
}

TrainResult train(const std::vector<PairRecord>& trainset, const std::vector<PairRecord>& val,
                  const std::vector<std::string>& label_set, const TrainConfig& config, const PathIndex& index,
                  const EmbeddingTable& table) {
  config.validate();
  if (trainset.empty()) throw DataError("training set is empty");
  check_labels(trainset, label_set);

  Rng rng(config.seed);
  TrainResult result;
  result.model = init_model(label_set, trainset, config, index, table, rng);
  ModelParams& params = result.model;
  ModelParams grads = zeros_like(params);

  const std::vector<LabeledPair> examples = prepare_all(params, trainset, index, table);
  std::vector<PairRecord> val_known;
  for (const PairRecord& r : val) {
    if (params.label_index(r.label) >= 0) val_known.push_back(r);
  }

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t idx : order) {
      std::span<const LabeledPair> one(&examples[idx], 1);
      epoch_loss += loss_and_gradients(one, params, grads, config.word_dropout_rate, &rng);
      auto step = [&](Matrix& p, const Matrix& g) {
        for (std::size_t k = 0; k < p.data.size(); ++k) p.data[k] -= config.learning_rate * g.data[k];
      };
      step(params.edges.lemma_emb, grads.edges.lemma_emb);
      step(params.edges.pos_emb, grads.edges.pos_emb);
      step(params.edges.deprel_emb, grads.edges.deprel_emb);
      step(params.edges.direction_emb, grads.edges.direction_emb);
      step(params.lstm.input_weights, grads.lstm.input_weights);
      step(params.lstm.recurrent_weights, grads.lstm.recurrent_weights);
      step(params.lstm.bias, grads.lstm.bias);
      step(params.w1, grads.w1);
      step(params.b1, grads.b1);
      step(params.w2, grads.w2);
      step(params.b2, grads.b2);
      step(params.word_emb, grads.word_emb);
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(examples.size());
    if (!val_known.empty()) {
      std::size_t correct = 0;
      for (const PairRecord& r : val_known) {
        if (predict_label(classify(params, r.x, r.y, index, table), params) == r.label) ++correct;
      }
      stats.val_accuracy = static_cast<double>(correct) / static_cast<double>(val_known.size());
    }
    result.history.push_back(stats);
  }
  result.final_loss = loss(examples, params);
  return result;
}

namespace {

constexpr const char* kModelFormat = "lexrel-model";
constexpr int kModelVersion = 1;

json matrix_json(const Matrix& m) { return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}}; }

Matrix matrix_from_json(const json& j) {
  Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) throw DataError("matrix data length does not match its shape");
  return m;
}

std::string average_name(AverageMode m) { return m == AverageMode::uniform ? "uniform" : "count_weighted"; }

AverageMode average_from_name(const std::string& s) {
  if (s == "uniform") return AverageMode::uniform;
  if (s == "count_weighted") return AverageMode::count_weighted;
  throw DataError("unknown path averaging mode '" + s + "'");
}

}  // namespace

void save_model(std::ostream& out, const ModelParams& p) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["label_set"] = p.label_set;
  j["hidden_layers"] = p.hidden_layers;
  j["word_dim"] = p.word_dim;
  j["path_dim"] = p.path_dim();
  j["average"] = average_name(p.average);
  j["vocab"] = {{"lemma", p.edges.lemma.items()},
                {"pos", p.edges.pos.items()},
                {"deprel", p.edges.deprel.items()},
                {"words", p.word_vocab.items()}};
  json tensors = json::object();
  for_each_tensor(p, [&](const char* name, const Matrix& m) { tensors[name] = matrix_json(m); });
  j["tensors"] = std::move(tensors);
  out << j.dump(1) << '\n';
}

ModelParams load_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat) throw DataError("not a lexrel model file");
    if (j.at("version").get<int>() != kModelVersion) throw DataError("unsupported model version");
    ModelParams p;
    p.label_set = j.at("label_set").get<std::vector<std::string>>();
    p.hidden_layers = j.at("hidden_layers").get<int>();
    p.word_dim = j.at("word_dim").get<std::size_t>();
    p.average = average_from_name(j.at("average").get<std::string>());
    const json& v = j.at("vocab");
    p.edges.lemma = Vocabulary(v.at("lemma").get<std::vector<std::string>>());
    p.edges.pos = Vocabulary(v.at("pos").get<std::vector<std::string>>());
    p.edges.deprel = Vocabulary(v.at("deprel").get<std::vector<std::string>>());
    p.word_vocab = Vocabulary(v.at("words").get<std::vector<std::string>>());
    const json& t = j.at("tensors");
    for_each_tensor(p, [&](const char* name, Matrix& m) { m = matrix_from_json(t.at(name)); });

    const std::size_t H = p.path_dim();
    if (p.hidden_layers != 0 && p.hidden_layers != 1) throw DataError("hidden_layers must be 0 or 1");
    if (p.edges.lemma_emb.rows != p.edges.lemma.rows() || p.edges.pos_emb.rows != p.edges.pos.rows() ||
        p.edges.deprel_emb.rows != p.edges.deprel.rows() || p.edges.direction_emb.rows != 4) {
      throw DataError("edge embedding rows do not match vocabularies");
    }
    if (p.lstm.input_weights.rows != 4 * H || p.lstm.input_weights.cols != p.edges.input_size() ||
        p.lstm.bias.rows != 4 * H || j.at("path_dim").get<std::size_t>() != H) {
      throw DataError("recurrent weight shapes are inconsistent");
    }
    if (p.w1.cols != p.feature_width()) throw DataError("classifier input width is inconsistent");
    const Matrix& last = p.hidden_layers == 1 ? p.w2 : p.w1;
    if (last.rows != p.label_set.size()) throw DataError("classifier output width does not match label set");
    if (p.tunes_words() && p.word_emb.rows != p.word_vocab.rows()) throw DataError("word embedding rows mismatch");
    return p;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model_file(const std::string& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file " + path);
  save_model(out, params);
}

ModelParams load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path);
  try {
    return load_model(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string to_json_string(const TrainConfig& c) {
  json j{{"hidden_layers", c.hidden_layers},
         {"hidden_units", c.hidden_units},
         {"word_dropout_rate", c.word_dropout_rate},
         {"epochs", c.epochs},
         {"learning_rate", c.learning_rate},
         {"seed", c.seed},
         {"path_hidden", c.path_hidden},
         {"edge_widths",
          {{"lemma", c.edge_widths.lemma},
           {"pos", c.edge_widths.pos},
           {"deprel", c.edge_widths.deprel},
           {"direction", c.edge_widths.direction}}},
         {"init_scale", c.init_scale},
         {"average", average_name(c.average)},
         {"tune_word_embeddings", c.tune_word_embeddings}};
  return j.dump();
}

}  // namespace lexrel
