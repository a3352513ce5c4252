#pragma once

// Independent oracles and fixture builders shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/path_encoder.hpp"
#include "lexrel/random.hpp"
#include "lexrel/relation_model.hpp"
#include "lexrel/text.hpp"

namespace lexrel::testing {

// Random labelled tree with n nodes; lemmas drawn from a tiny alphabet so
// that words repeat.
inline SentenceGraph random_tree(Rng& rng, int n) {
  static const char* lemmas[] = {"a", "b", "c", "D"};
  static const char* tags[] = {"NOUN", "VERB", "ADJ"};
  static const char* rels[] = {"nsubj", "obj", "nmod", "amod"};
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  shuffle(order, rng);
  std::vector<int> head(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 1; k < n; ++k) {
    head[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
        order[uniform_index(rng, static_cast<std::size_t>(k))];
  }
  SentenceGraph s;
  for (int i = 1; i <= n; ++i) {
    Token t;
    t.index = i;
    t.lemma = lemmas[uniform_index(rng, 4)];
    t.form = t.lemma;
    t.pos = tags[uniform_index(rng, 3)];
    t.head = head[static_cast<std::size_t>(i)];
    t.deprel = t.head == 0 ? "root" : rels[uniform_index(rng, 4)];
    s.tokens.push_back(t);
  }
  return s;
}

// Brute force: BFS over the undirected tree from every x occurrence, then
// classify each node on the recovered path by the arcs it is entered and
// left through.
inline PathCounts bfs_paths(const SentenceGraph& s, const std::string& x_word, const std::string& y_word,
                            int max_edges) {
  const int n = static_cast<int>(s.size());
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n) + 1);
  for (const Token& t : s.tokens) {
    if (t.head == 0) continue;
    adj[static_cast<std::size_t>(t.index)].push_back(t.head);
    adj[static_cast<std::size_t>(t.head)].push_back(t.index);
  }
  const std::string x = to_lower(x_word), y = to_lower(y_word);
  PathCounts out;
  for (int xi = 1; xi <= n; ++xi) {
    if (to_lower(s.at(xi).lemma) != x) continue;
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, -1);
    parent[static_cast<std::size_t>(xi)] = xi;
    std::deque<int> queue{xi};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (parent[static_cast<std::size_t>(v)] >= 0) continue;
        parent[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
    }
    for (int yi = 1; yi <= n; ++yi) {
      if (yi == xi || to_lower(s.at(yi).lemma) != y) continue;
      std::vector<int> seq;
      for (int cur = yi; cur != xi; cur = parent[static_cast<std::size_t>(cur)]) seq.push_back(cur);
      seq.push_back(xi);
      std::reverse(seq.begin(), seq.end());
      if (static_cast<int>(seq.size()) - 1 > max_edges) continue;
      DependencyPath p;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        const Token& t = s.at(seq[k]);
        const bool entered_from_below = k == 0 || s.at(seq[k - 1]).head == seq[k];
        const bool leaves_downward = k + 1 == seq.size() || s.at(seq[k + 1]).head == seq[k];
        Direction d = Direction::down;
        if (entered_from_below && leaves_downward) d = Direction::root;
        else if (!leaves_downward) d = Direction::up;
        std::string lemma = seq[k] == xi ? "X" : seq[k] == yi ? "Y" : to_lower(t.lemma);
        p.edges.push_back(PathEdge{lemma, t.pos, t.deprel, d});
      }
      ++out[p];
    }
  }
  return out;
}

inline double sigmoid_ref(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// One recurrence step written out gate by gate.
inline void lstm_step_ref(const RecurrentParams& rec, const Vector& input, Vector& h, Vector& c) {
  const std::size_t H = rec.hidden_size();
  Vector z(4 * H);
  for (std::size_t r = 0; r < 4 * H; ++r) {
    double acc = rec.bias(r, 0);
    for (std::size_t k = 0; k < input.size(); ++k) acc += rec.input_weights(r, k) * input[k];
    for (std::size_t k = 0; k < H; ++k) acc += rec.recurrent_weights(r, k) * h[k];
    z[r] = acc;
  }
  Vector h_new(H), c_new(H);
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sigmoid_ref(z[j]);
    const double f = sigmoid_ref(z[H + j]);
    const double o = sigmoid_ref(z[2 * H + j]);
    const double g = std::tanh(z[3 * H + j]);
    c_new[j] = f * c[j] + i * g;
    h_new[j] = o * std::tanh(c_new[j]);
  }
  h = h_new;
  c = c_new;
}

inline Vector encode_path_ref(const DependencyPath& path, const EdgeVocab& vocab, const RecurrentParams& rec) {
  Vector h(rec.hidden_size(), 0.0), c(rec.hidden_size(), 0.0);
  for (const PathEdge& e : path.edges) lstm_step_ref(rec, encode_edge(e, vocab), h, c);
  return h;
}

inline DependencyPath random_path(Rng& rng, int tree_edges) {
  static const char* lemmas[] = {"be", "kind", "of", "have", "see"};
  static const char* tags[] = {"NOUN", "VERB"};
  static const char* rels[] = {"nsubj", "obj", "nmod"};
  DependencyPath p;
  const int turn = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(tree_edges) + 1));
  for (int k = 0; k <= tree_edges; ++k) {
    PathEdge e;
    e.lemma = k == 0 ? "X" : k == tree_edges ? "Y" : lemmas[uniform_index(rng, 5)];
    e.pos = tags[uniform_index(rng, 2)];
    e.deprel = rels[uniform_index(rng, 3)];
    e.direction = k < turn ? Direction::up : k == turn ? Direction::root : Direction::down;
    p.edges.push_back(e);
  }
  return p;
}

struct TinyWorld {
  EmbeddingTable table;
  PathIndex index;
  std::vector<PairRecord> pairs;
  std::vector<std::string> label_set;
};

// A handful of pairs over a 2-d table with random paths of at most 3 edges.
// Some pairs get no paths, one word is out of vocabulary.
inline TinyWorld tiny_world(Rng& rng, std::size_t n_labels = 3, std::size_t n_pairs = 6) {
  TinyWorld w;
  w.table = EmbeddingTable(2);
  const std::vector<std::string> words{"cat", "dog", "mouse", "tree", "leaf"};
  for (const std::string& word : words) {
    Vector v{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    w.table.add(word, v);
  }
  for (const char* word : {"be", "kind", "of"}) {
    Vector v{uniform(rng, -1, 1), uniform(rng, -1, 1)};
    w.table.add(word, v);
  }
  const std::vector<std::string> all = labels::relation_labels();
  w.label_set.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_labels));
  std::vector<std::string> pool = words;
  pool.push_back("unseen");
  for (std::size_t i = 0; i < n_pairs; ++i) {
    PairRecord r{pool[uniform_index(rng, pool.size())], pool[uniform_index(rng, pool.size())],
                 w.label_set[i % n_labels]};
    const std::size_t n_paths = uniform_index(rng, 3);
    for (std::size_t k = 0; k < n_paths; ++k) {
      w.index.add({r.x, r.y}, random_path(rng, 1 + static_cast<int>(uniform_index(rng, 3))),
                  1 + static_cast<long long>(uniform_index(rng, 3)));
    }
    w.pairs.push_back(r);
  }
  return w;
}

inline TrainConfig tiny_config(int hidden_layers, bool tune_words) {
  TrainConfig c;
  c.hidden_layers = hidden_layers;
  c.hidden_units = 3;
  c.path_hidden = 2;
  c.edge_widths = EdgeWidths{2, 1, 1, 1};
  c.init_scale = 0.5;
  c.tune_word_embeddings = tune_words;
  return c;
}

inline std::vector<LabeledPair> labeled(const ModelParams& m, const TinyWorld& w) {
  std::vector<LabeledPair> out;
  for (const PairRecord& r : w.pairs) {
    out.push_back({prepare(m, r.x, r.y, w.index.paths(r.x, r.y), w.table), m.label_index(r.label)});
  }
  return out;
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t coordinates = 0;
};

// Relative error |a - n| / max(|a|, |n|, floor) between analytic and
// central-difference derivatives over every parameter coordinate.
inline GradCheck check_gradients(const TinyWorld& w, const ModelParams& model, double eps = 1e-5,
                                 double floor = 1e-6) {
  ModelParams params = model;
  ModelParams grads = zeros_like(params);
  const std::vector<LabeledPair> batch = labeled(params, w);
  loss_and_gradients(batch, params, grads);

  std::vector<Matrix*> p_tensors, g_tensors;
  for_each_tensor(params, [&](const char*, Matrix& m) { p_tensors.push_back(&m); });
  for_each_tensor(grads, [&](const char*, Matrix& m) { g_tensors.push_back(&m); });

  GradCheck result;
  for (std::size_t t = 0; t < p_tensors.size(); ++t) {
    for (std::size_t k = 0; k < p_tensors[t]->data.size(); ++k) {
      double& v = p_tensors[t]->data[k];
      const double saved = v;
      v = saved + eps;
      const double up = loss(batch, params);
      v = saved - eps;
      const double down = loss(batch, params);
      v = saved;
      const double numeric = (up - down) / (2 * eps);
      const double analytic = g_tensors[t]->data[k];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
      result.max_rel_error = std::max(result.max_rel_error, std::abs(analytic - numeric) / denom);
      ++result.coordinates;
    }
  }
  return result;
}

// One row of the SYN heuristic truth table over (ANT, HYPER, PART_OF, SYN).
struct SynCase {
  ClassDistribution dist;
  long long paths = 0;
  std::string expected;
};

inline SynCase syn_case(bool top_syn, bool low_margin, bool few_paths) {
  SynCase c;
  if (top_syn) {
    c.dist.scores = low_margin ? std::vector<double>{0.35, 0.05, 0.14, 0.46} : std::vector<double>{0.30, 0.05, 0.10, 0.55};
  } else {
    c.dist.scores = low_margin ? std::vector<double>{0.05, 0.46, 0.14, 0.35} : std::vector<double>{0.10, 0.70, 0.10, 0.10};
  }
  c.paths = few_paths ? 2 : 5;
  if (!top_syn) c.expected = "HYPER";
  else if (low_margin && !few_paths) c.expected = "ANT";
  else c.expected = "SYN";
  return c;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lexrel_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace lexrel::testing
