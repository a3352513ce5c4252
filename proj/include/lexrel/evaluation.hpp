#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lexrel/dataset.hpp"

namespace lexrel {

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<long long>> counts;  // [gold][predicted]

  int index(const std::string& label) const;
  long long total() const;
  long long row_sum(std::size_t gold) const;
  long long col_sum(std::size_t pred) const;
  // Row-normalized percentages; an empty row stays all zero.
  std::vector<std::vector<double>> row_percentages() const;
};

// `label_order` fixes row/column order; labels not listed are appended in
// first-seen order.
ConfusionMatrix confusion(const std::vector<std::string>& gold, const std::vector<std::string>& pred,
                          const std::vector<std::string>& label_order = {});

enum class Averaging { weighted, macro };

struct LabelScore {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long long support = 0;
};

struct ScoreReport {
  std::vector<LabelScore> per_label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Averaging mode = Averaging::weighted;
  std::optional<std::string> excluded;
};

ScoreReport scores(const ConfusionMatrix& matrix, const std::optional<std::string>& exclude = std::nullopt,
                   Averaging mode = Averaging::weighted);

// TSV: header then one row per label and a final averaged row.
void write_report_tsv(std::ostream& out, const ScoreReport& report);
// Method | P | R | F1 table.
void write_report_table(std::ostream& out, const std::string& method, const ScoreReport& report);
void write_confusion_tsv(std::ostream& out, const ConfusionMatrix& matrix, bool percentages = false);

// x words are shuffled with the seed and split so that train and validation
// share no x word.
std::pair<std::vector<PairRecord>, std::vector<PairRecord>> lexical_split(const std::vector<PairRecord>& dataset,
                                                                          double val_fraction, std::uint64_t seed);

}  // namespace lexrel
