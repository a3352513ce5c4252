#include "lexrel/synthetic.hpp"

#include <cmath>
#include <set>

#include "lexrel/error.hpp"
#include "lexrel/random.hpp"

namespace lexrel {

namespace {

// Builds one sentence; heads are 1-based, 0 for the root.
class SentenceBuilder {
 public:
  SentenceBuilder& add(const std::string& lemma, const std::string& pos, int head, const std::string& deprel) {
    Token t;
    t.index = static_cast<int>(s_.tokens.size()) + 1;
    t.form = lemma;
    t.lemma = lemma;
    t.pos = pos;
    t.head = head;
    t.deprel = deprel;
    s_.tokens.push_back(std::move(t));
    return *this;
  }
  SentenceGraph build() {
    validate(s_);
    return std::move(s_);
  }

 private:
  SentenceGraph s_;
};

std::string make_word(int index) {
  static const char* consonants = "bdfgklmnprstvz";
  static const char* vowels = "aeiou";
  std::string w;
  int i = index;
  for (int syl = 0; syl < 3; ++syl) {
    w.push_back(consonants[i % 14]);
    i /= 14;
    w.push_back(vowels[i % 5]);
    i /= 5;
  }
  return w;
}

SentenceGraph copular_of(const std::string& x, const std::string& head_noun, const std::string& det,
                         const std::string& y) {
  return SentenceBuilder{}
      .add(x, "NOUN", 4, "nsubj")
      .add("be", "AUX", 4, "cop")
      .add(det, "DET", 4, "det")
      .add(head_noun, "NOUN", 0, "root")
      .add("of", "ADP", 6, "case")
      .add(y, "NOUN", 4, "nmod")
      .build();
}

SentenceGraph hyper_sentence(const std::string& x, const std::string& y, Rng& rng) {
  switch (uniform_index(rng, 3)) {
    case 0: return copular_of(x, "kind", "a", y);
    case 1: return copular_of(x, "type", "a", y);
    default:
      return SentenceBuilder{}
          .add(y, "NOUN", 0, "root")
          .add("such", "ADJ", 4, "case")
          .add("as", "ADP", 2, "fixed")
          .add(x, "NOUN", 1, "nmod")
          .build();
  }
}

SentenceGraph part_sentence(const std::string& x, const std::string& y, Rng& rng) {
  switch (uniform_index(rng, 3)) {
    case 0:
      return SentenceBuilder{}
          .add(y, "NOUN", 2, "nsubj")
          .add("have", "VERB", 0, "root")
          .add("a", "DET", 4, "det")
          .add(x, "NOUN", 2, "obj")
          .build();
    case 1: return copular_of(x, "part", "a", y);
    default:
      return SentenceBuilder{}
          .add("the", "DET", 2, "det")
          .add(x, "NOUN", 0, "root")
          .add("of", "ADP", 5, "case")
          .add("the", "DET", 5, "det")
          .add(y, "NOUN", 2, "nmod")
          .build();
  }
}

SentenceGraph ant_sentence(const std::string& x, const std::string& y, Rng& rng) {
  switch (uniform_index(rng, 3)) {
    case 0: return copular_of(x, "opposite", "the", y);
    case 1:
      return SentenceBuilder{}
          .add("either", "CCONJ", 2, "cc:preconj")
          .add(x, "NOUN", 0, "root")
          .add("or", "CCONJ", 4, "cc")
          .add(y, "NOUN", 2, "conj")
          .build();
    default:
      return SentenceBuilder{}
          .add("not", "PART", 2, "advmod")
          .add(x, "NOUN", 0, "root")
          .add("but", "CCONJ", 4, "cc")
          .add(y, "NOUN", 2, "conj")
          .build();
  }
}

SentenceGraph filler_sentence(const std::string& a, const std::string& b, Rng& rng) {
  static const char* verbs[] = {"see", "find", "use", "need", "want", "bring"};
  if (uniform_index(rng, 5) == 0) {
    return SentenceBuilder{}.add(a, "NOUN", 0, "root").add("and", "CCONJ", 3, "cc").add(b, "NOUN", 1, "conj").build();
  }
  return SentenceBuilder{}
      .add("the", "DET", 2, "det")
      .add(a, "NOUN", 3, "nsubj")
      .add(verbs[uniform_index(rng, 6)], "VERB", 0, "root")
      .add("the", "DET", 5, "det")
      .add(b, "NOUN", 3, "obj")
      .build();
}

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> w{"be",     "a",     "the",  "of",   "kind", "type", "such", "as",
                                          "have",   "part",  "opposite", "either", "or", "not", "but", "and",
                                          "see",    "find",  "use",  "need", "want", "bring"};
  return w;
}

using Unordered = std::pair<std::string, std::string>;

Unordered unordered(const std::string& a, const std::string& b) { return a < b ? Unordered{a, b} : Unordered{b, a}; }

}  // namespace

std::vector<PairRecord> to_relatedness(const std::vector<PairRecord>& relations) {
  std::vector<PairRecord> out;
  out.reserve(relations.size());
  for (const PairRecord& r : relations) {
    out.push_back({r.x, r.y, r.label == labels::kRandom ? labels::kFalse : labels::kTrue});
  }
  return out;
}

SyntheticData generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.topics < 2 || cfg.words_per_topic < 2) throw ContractError("synthetic world needs two topics of two words");
  const int max_pairs = cfg.words_per_topic * (cfg.words_per_topic - 1) / 2;
  if (cfg.related_pairs_per_topic > max_pairs) throw ContractError("too many related pairs per topic");
  if (cfg.max_pattern_sentences < 1) throw ContractError("max_pattern_sentences must be at least 1");

  Rng rng(cfg.seed);
  SyntheticData data;

  std::vector<std::vector<std::string>> topic_words(static_cast<std::size_t>(cfg.topics));
  std::vector<std::string> all_words;
  std::vector<int> topic_of;
  for (int t = 0; t < cfg.topics; ++t) {
    for (int k = 0; k < cfg.words_per_topic; ++k) {
      std::string w = make_word(t * cfg.words_per_topic + k);
      topic_words[static_cast<std::size_t>(t)].push_back(w);
      all_words.push_back(w);
      topic_of.push_back(t);
    }
  }

  std::set<Unordered> used;
  std::set<Unordered> synonyms;
  std::vector<PairRecord> related;
  const std::vector<std::string>& rel_labels = labels::related_labels();
  for (int t = 0; t < cfg.topics; ++t) {
    const auto& words = topic_words[static_cast<std::size_t>(t)];
    std::vector<std::pair<int, int>> candidates;
    for (int a = 0; a < cfg.words_per_topic; ++a) {
      for (int b = a + 1; b < cfg.words_per_topic; ++b) candidates.emplace_back(a, b);
    }
    shuffle(candidates, rng);
    for (int i = 0; i < cfg.related_pairs_per_topic; ++i) {
      auto [a, b] = candidates[static_cast<std::size_t>(i)];
      if (bernoulli(rng, 0.5)) std::swap(a, b);
      const std::string& label = rel_labels[static_cast<std::size_t>(i) % rel_labels.size()];
      PairRecord r{words[static_cast<std::size_t>(a)], words[static_cast<std::size_t>(b)], label};
      used.insert(unordered(r.x, r.y));
      if (label == labels::kSyn) synonyms.insert(unordered(r.x, r.y));
      related.push_back(std::move(r));
    }
  }

  const auto n_random = static_cast<std::size_t>(std::lround(cfg.random_ratio * static_cast<double>(related.size())));
  std::vector<PairRecord> randoms;
  while (randoms.size() < n_random) {
    const std::size_t a = uniform_index(rng, all_words.size());
    const std::size_t b = uniform_index(rng, all_words.size());
    if (topic_of[a] == topic_of[b]) continue;
    auto key = unordered(all_words[a], all_words[b]);
    if (used.contains(key)) continue;
    used.insert(key);
    randoms.push_back({all_words[a], all_words[b], labels::kRandom});
  }

  // Embeddings.
  const std::size_t d = cfg.dimension;
  std::vector<Vector> centers(static_cast<std::size_t>(cfg.topics), Vector(d));
  for (auto& c : centers) {
    for (double& v : c) v = gaussian(rng);
  }
  Vector general(d);
  for (double& v : general) v = gaussian(rng);
  std::set<std::string> hypernym_side;
  for (const PairRecord& r : related) {
    if (r.label == labels::kHyper) hypernym_side.insert(r.y);
  }
  data.embeddings = EmbeddingTable(d);
  Vector vec(d);
  for (std::size_t i = 0; i < all_words.size(); ++i) {
    const Vector& c = centers[static_cast<std::size_t>(topic_of[i])];
    const double shift = hypernym_side.contains(all_words[i]) ? cfg.hypernym_shift : 0.0;
    for (std::size_t k = 0; k < d; ++k) vec[k] = c[k] + cfg.topic_spread * gaussian(rng) + shift * general[k];
    data.embeddings.add(all_words[i], vec);
  }
  for (const std::string& w : function_words()) {
    for (double& v : vec) v = gaussian(rng);
    data.embeddings.add(w, vec);
  }

  // Corpus.
  for (const PairRecord& r : related) {
    if (r.label == labels::kSyn || bernoulli(rng, cfg.unattested_rate)) continue;
    const auto k = 1 + uniform_index(rng, static_cast<std::size_t>(cfg.max_pattern_sentences));
    for (std::size_t i = 0; i < k; ++i) {
      if (r.label == labels::kHyper) data.corpus.push_back(hyper_sentence(r.x, r.y, rng));
      else if (r.label == labels::kPartOf) data.corpus.push_back(part_sentence(r.x, r.y, rng));
      else data.corpus.push_back(ant_sentence(r.x, r.y, rng));
    }
  }
  while (static_cast<int>(data.corpus.size()) < cfg.sentences) {
    const std::size_t a = uniform_index(rng, all_words.size());
    const std::size_t b = uniform_index(rng, all_words.size());
    if (a == b || synonyms.contains(unordered(all_words[a], all_words[b]))) continue;
    data.corpus.push_back(filler_sentence(all_words[a], all_words[b], rng));
  }
  shuffle(data.corpus, rng);

  data.relations = std::move(related);
  data.relations.insert(data.relations.end(), randoms.begin(), randoms.end());
  shuffle(data.relations, rng);
  data.relatedness = to_relatedness(data.relations);
  return data;
}

}  // namespace lexrel
