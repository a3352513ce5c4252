#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"

namespace lexrel {

// A generated world with planted relations.
//
// Content words are grouped into topics; embeddings put words of one topic
// near a shared center, so cosine separates related from random pairs but
// says little about which relation holds. HYPER pairs surface in the corpus
// through "X is a kind of Y" style sentences, PART_OF and ANT through their
// own templates, SYN pairs never share a sentence. Filler sentences connect
// arbitrary non-SYN word pairs through generic verbs.
struct SyntheticConfig {
  std::uint64_t seed = 7;
  int topics = 40;
  int words_per_topic = 8;
  int related_pairs_per_topic = 16;
  double random_ratio = 1.5;  // RANDOM pairs per related pair
  std::size_t dimension = 20;
  double topic_spread = 0.5;
  double hypernym_shift = 0.3;  // weak distributional cue on hypernym-side words
  int sentences = 5000;
  int max_pattern_sentences = 8;  // per non-SYN related pair, drawn in [1, max]
  double unattested_rate = 0.05;  // non-SYN related pairs left without any pattern sentence
};

struct SyntheticData {
  std::vector<SentenceGraph> corpus;
  EmbeddingTable embeddings;
  std::vector<PairRecord> relations;    // ANT / HYPER / PART_OF / SYN / RANDOM
  std::vector<PairRecord> relatedness;  // same pairs labelled TRUE / FALSE
};

SyntheticData generate_synthetic(const SyntheticConfig& config);

// TRUE for any related label, FALSE for RANDOM.
std::vector<PairRecord> to_relatedness(const std::vector<PairRecord>& relations);

}  // namespace lexrel
