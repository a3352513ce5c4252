#include "lexrel/dataset.hpp"

#include <fstream>

#include "lexrel/error.hpp"
#include "lexrel/text.hpp"

namespace lexrel {

namespace labels {

const std::vector<std::string>& relation_labels() {
  static const std::vector<std::string> v{kAnt, kHyper, kPartOf, kSyn, kRandom};
  return v;
}

const std::vector<std::string>& related_labels() {
  static const std::vector<std::string> v{kAnt, kHyper, kPartOf, kSyn};
  return v;
}

const std::vector<std::string>& relatedness_classes() {
  static const std::vector<std::string> v{kRelated, kUnrelated};
  return v;
}

}  // namespace labels

std::vector<PairRecord> read_dataset(std::istream& in, bool require_label) {
  std::vector<PairRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() < 2 || (require_label && cols.size() < 3)) {
      throw DataError("expected x<TAB>y<TAB>label at line " + std::to_string(lineno));
    }
    PairRecord r{std::string(trim(cols[0])), std::string(trim(cols[1])),
                 cols.size() >= 3 ? std::string(trim(cols[2])) : std::string()};
    if (r.x.empty() || r.y.empty()) throw DataError("empty term at line " + std::to_string(lineno));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PairRecord> read_dataset_file(const std::string& path, bool require_label) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file " + path);
  try {
    return read_dataset(in, require_label);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const std::vector<PairRecord>& records) {
  for (const PairRecord& r : records) out << r.x << '\t' << r.y << '\t' << r.label << '\n';
}

std::vector<TermPair> term_pairs(const std::vector<PairRecord>& records) {
  std::vector<TermPair> out;
  out.reserve(records.size());
  for (const PairRecord& r : records) out.emplace_back(r.x, r.y);
  return out;
}

}  // namespace lexrel
