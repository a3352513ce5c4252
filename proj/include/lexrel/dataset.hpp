#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lexrel/corpus.hpp"

namespace lexrel {

struct PairRecord {
  std::string x;
  std::string y;
  std::string label;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

namespace labels {
inline const std::string kAnt = "ANT";
inline const std::string kHyper = "HYPER";
inline const std::string kPartOf = "PART_OF";
inline const std::string kSyn = "SYN";
inline const std::string kRandom = "RANDOM";
inline const std::string kTrue = "TRUE";
inline const std::string kFalse = "FALSE";
// Class names of the two-class relatedness model.
inline const std::string kRelated = "RELATED";
inline const std::string kUnrelated = "UNRELATED";

const std::vector<std::string>& relation_labels();  // ANT HYPER PART_OF SYN RANDOM
const std::vector<std::string>& related_labels();   // ANT HYPER PART_OF SYN
const std::vector<std::string>& relatedness_classes();  // RELATED UNRELATED
}  // namespace labels

// "x<TAB>y<TAB>label" per line. With `require_label` false a two-column line
// is accepted and gets an empty label.
std::vector<PairRecord> read_dataset(std::istream& in, bool require_label = true);
std::vector<PairRecord> read_dataset_file(const std::string& path, bool require_label = true);
void write_dataset(std::ostream& out, const std::vector<PairRecord>& records);

std::vector<TermPair> term_pairs(const std::vector<PairRecord>& records);

}  // namespace lexrel
