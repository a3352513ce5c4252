#include "lexrel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "lexrel/error.hpp"
#include "lexrel/random.hpp"
#include "lexrel/text.hpp"

namespace lexrel {

int ConfusionMatrix::index(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

long long ConfusionMatrix::total() const {
  long long t = 0;
  for (const auto& row : counts) {
    for (long long c : row) t += c;
  }
  return t;
}

long long ConfusionMatrix::row_sum(std::size_t gold) const {
  long long t = 0;
  for (long long c : counts[gold]) t += c;
  return t;
}

long long ConfusionMatrix::col_sum(std::size_t pred) const {
  long long t = 0;
  for (const auto& row : counts) t += row[pred];
  return t;
}

std::vector<std::vector<double>> ConfusionMatrix::row_percentages() const {
  std::vector<std::vector<double>> out(labels.size(), std::vector<double>(labels.size(), 0.0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const long long total = row_sum(i);
    if (total == 0) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      out[i][j] = 100.0 * static_cast<double>(counts[i][j]) / static_cast<double>(total);
    }
  }
  return out;
}

ConfusionMatrix confusion(const std::vector<std::string>& gold, const std::vector<std::string>& pred,
                          const std::vector<std::string>& label_order) {
  if (gold.size() != pred.size()) {
    throw DataError("gold and predictions differ in length (" + std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + ")");
  }
  ConfusionMatrix m;
  m.labels = label_order;
  auto ensure = [&](const std::string& l) {
    int i = m.index(l);
    if (i >= 0) return static_cast<std::size_t>(i);
    m.labels.push_back(l);
    return m.labels.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  cells.reserve(gold.size());
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const std::size_t g = ensure(gold[k]);
    const std::size_t p = ensure(pred[k]);
    cells.emplace_back(g, p);
  }
  m.counts.assign(m.labels.size(), std::vector<long long>(m.labels.size(), 0));
  for (auto [g, p] : cells) ++m.counts[g][p];
  return m;
}

namespace {

double ratio(long long num, long long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ScoreReport scores(const ConfusionMatrix& matrix, const std::optional<std::string>& exclude, Averaging mode) {
  ScoreReport r;
  r.mode = mode;
  r.excluded = exclude;
  double weight_total = 0.0;
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    LabelScore s;
    s.label = matrix.labels[i];
    const long long tp = matrix.counts[i][i];
    s.support = matrix.row_sum(i);
    s.precision = ratio(tp, matrix.col_sum(i));
    s.recall = ratio(tp, s.support);
    s.f1 = s.precision + s.recall == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    r.per_label.push_back(s);
    if (exclude && s.label == *exclude) continue;
    // A label absent from both gold and predictions takes no part in the macro mean.
    if (mode == Averaging::macro && s.support == 0 && matrix.col_sum(i) == 0) continue;
    const double w = mode == Averaging::weighted ? static_cast<double>(s.support) : 1.0;
    r.precision += w * s.precision;
    r.recall += w * s.recall;
    r.f1 += w * s.f1;
    weight_total += w;
  }
  if (weight_total > 0.0) {
    r.precision /= weight_total;
    r.recall /= weight_total;
    r.f1 /= weight_total;
  }
  return r;
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed3(double v) { return fixed(v, 3); }

std::string mode_name(Averaging m) { return m == Averaging::weighted ? "weighted" : "macro"; }

}  // namespace

void write_report_tsv(std::ostream& out, const ScoreReport& r) {
  out << "label\tprecision\trecall\tf1\tsupport\n";
  for (const LabelScore& s : r.per_label) {
    out << s.label << '\t' << format_double(s.precision) << '\t' << format_double(s.recall) << '\t'
        << format_double(s.f1) << '\t' << s.support << '\n';
  }
  out << "average(" << mode_name(r.mode);
  if (r.excluded) out << ",excluding " << *r.excluded;
  out << ")\t" << format_double(r.precision) << '\t' << format_double(r.recall) << '\t' << format_double(r.f1)
      << "\t-\n";
}

void write_report_table(std::ostream& out, const std::string& method, const ScoreReport& r) {
  std::size_t width = std::max<std::size_t>(method.size(), 6);
  for (const LabelScore& s : r.per_label) width = std::max(width, s.label.size());
  auto row = [&](const std::string& name, const std::string& p, const std::string& rc, const std::string& f) {
    out << "| " << std::left << std::setw(static_cast<int>(width)) << name << " | " << std::setw(5) << p << " | "
        << std::setw(5) << rc << " | " << std::setw(5) << f << " |\n";
  };
  row("Method", "P", "R", "F1");
  out << "|" << std::string(width + 2, '-') << "|-------|-------|-------|\n";
  row(method, fixed3(r.precision), fixed3(r.recall), fixed3(r.f1));
  out << "|" << std::string(width + 2, '-') << "|-------|-------|-------|\n";
  for (const LabelScore& s : r.per_label) row(s.label, fixed3(s.precision), fixed3(s.recall), fixed3(s.f1));
}

void write_confusion_tsv(std::ostream& out, const ConfusionMatrix& m, bool percentages) {
  auto pct = m.row_percentages();
  out << "gold\\pred";
  for (const auto& l : m.labels) out << '\t' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    out << m.labels[i];
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      out << '\t';
      if (percentages) out << fixed(pct[i][j], 2);
      else out << m.counts[i][j];
    }
    out << '\n';
  }
}

std::pair<std::vector<PairRecord>, std::vector<PairRecord>> lexical_split(const std::vector<PairRecord>& dataset,
                                                                          double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw ContractError("val_fraction must be in (0,1)");
  std::set<std::string> distinct;
  for (const PairRecord& r : dataset) distinct.insert(to_lower(r.x));
  if (distinct.size() < 2) throw DataError("lexical split needs at least two distinct x words");

  std::vector<std::string> words(distinct.begin(), distinct.end());
  Rng rng(seed);
  shuffle(words, rng);
  const auto n = static_cast<long>(words.size());
  long n_val = std::lround(val_fraction * static_cast<double>(n));
  n_val = std::clamp(n_val, 1L, n - 1);
  std::set<std::string> val_words(words.begin(), words.begin() + n_val);

  std::pair<std::vector<PairRecord>, std::vector<PairRecord>> out;
  for (const PairRecord& r : dataset) {
    (val_words.contains(to_lower(r.x)) ? out.second : out.first).push_back(r);
  }
  return out;
}

}  // namespace lexrel
