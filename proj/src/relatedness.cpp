#include "lexrel/relatedness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "lexrel/error.hpp"
#include "lexrel/text.hpp"

namespace lexrel {

namespace {

constexpr int kWeightSteps = 20;      // w_C = k / 20
constexpr int kThresholdSteps = 100;  // t = j / 100

}  // namespace

void CombinerConfig::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(w_cos) || !unit(w_model) || !unit(threshold)) throw ContractError("combiner fields must lie in [0,1]");
  if (std::abs(w_cos + w_model - 1.0) > 1e-12) throw ContractError("combiner weights must sum to 1");
}

CombinerConfig cosine_only(double threshold) { return CombinerConfig{1.0, 0.0, threshold}; }
CombinerConfig model_only() { return CombinerConfig{0.0, 1.0, 0.5}; }

double cosine_norm(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("cosine of vectors with different lengths");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.5;
  const double cos = std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
  return (cos + 1.0) / 2.0;
}

double combine(const RelatednessInputs& in, const CombinerConfig& cfg) {
  return std::clamp(cfg.w_cos * in.cosine + cfg.w_model * in.related, 0.0, 1.0);
}

RelatednessInputs relatedness_inputs(const std::string& x, const std::string& y, const ModelParams& model,
                                     const EmbeddingTable& cosine_table, const EmbeddingTable& model_table,
                                     const PathIndex& index) {
  const int related = model.label_index(labels::kRelated);
  if (related < 0) throw ContractError("relatedness model has no RELATED class");
  RelatednessInputs in;
  in.cosine = cosine_norm(cosine_table.lookup(x), cosine_table.lookup(y));
  in.related = classify(model, x, y, index, model_table)[static_cast<std::size_t>(related)];
  return in;
}

std::vector<RelatednessInputs> relatedness_inputs_all_serial(const std::vector<TermPair>& pairs,
                                                             const ModelParams& model,
                                                             const EmbeddingTable& cosine_table,
                                                             const EmbeddingTable& model_table,
                                                             const PathIndex& index) {
  std::vector<RelatednessInputs> out;
  out.reserve(pairs.size());
  for (const auto& [x, y] : pairs) out.push_back(relatedness_inputs(x, y, model, cosine_table, model_table, index));
  return out;
}

std::vector<RelatednessInputs> relatedness_inputs_all(const std::vector<TermPair>& pairs, const ModelParams& model,
                                                      const EmbeddingTable& cosine_table,
                                                      const EmbeddingTable& model_table, const PathIndex& index) {
  if (model.label_index(labels::kRelated) < 0) throw ContractError("relatedness model has no RELATED class");
  std::vector<RelatednessInputs> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& [x, y] = pairs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = relatedness_inputs(x, y, model, cosine_table, model_table, index);
  }
  return out;
}

double rel_score(const std::string& x, const std::string& y, const CombinerConfig& cfg, const ModelParams& model,
                 const EmbeddingTable& table, const PathIndex& index) {
  return combine(relatedness_inputs(x, y, model, table, table, index), cfg);
}

namespace {

void check_both_labels(const std::vector<bool>& related, std::size_t n) {
  if (related.size() != n) throw ContractError("gold labels and inputs differ in length");
  const bool any_pos = std::find(related.begin(), related.end(), true) != related.end();
  const bool any_neg = std::find(related.begin(), related.end(), false) != related.end();
  if (!any_pos || !any_neg) throw DataError("validation set must contain both related and unrelated pairs");
}

double f1_from_counts(long tp, long fp, long fn) {
  if (tp == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

// Best t (lowest on ties) for weight index k.
TuneResult best_for_weight(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related, int k) {
  const double w_cos = static_cast<double>(k) / kWeightSteps;
  const double w_model = static_cast<double>(kWeightSteps - k) / kWeightSteps;
  std::vector<double> scores(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) scores[i] = combine(inputs[i], CombinerConfig{w_cos, w_model, 0.0});

  TuneResult best{CombinerConfig{w_cos, w_model, 0.0}, -1.0};
  for (int j = 0; j <= kThresholdSteps; ++j) {
    const double t = static_cast<double>(j) / kThresholdSteps;
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool pred = classify_related(scores[i], t);
      if (pred && related[i]) ++tp;
      else if (pred) ++fp;
      else if (related[i]) ++fn;
    }
    const double f1 = f1_from_counts(tp, fp, fn);
    if (f1 > best.f1) best = TuneResult{CombinerConfig{w_cos, w_model, t}, f1};
  }
  return best;
}

}  // namespace

TuneResult tune_threshold(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related, double w_cos) {
  check_both_labels(related, inputs.size());
  const double scaled = w_cos * kWeightSteps;
  const int k = static_cast<int>(std::lround(scaled));
  if (std::abs(scaled - k) > 1e-9 || k < 0 || k > kWeightSteps) throw ContractError("w_C must be a multiple of 0.05");
  return best_for_weight(inputs, related, k);
}

TuneResult tune_combiner_serial(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related) {
  check_both_labels(related, inputs.size());
  TuneResult best{{}, -1.0};
  // Descending k visits smaller w_L first, so strict > keeps the tie rule.
  for (int k = kWeightSteps; k >= 0; --k) {
    TuneResult r = best_for_weight(inputs, related, k);
    if (r.f1 > best.f1) best = r;
  }
  return best;
}

TuneResult tune_combiner(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related) {
  check_both_labels(related, inputs.size());
  std::vector<TuneResult> per_weight(kWeightSteps + 1);
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k <= kWeightSteps; ++k) per_weight[static_cast<std::size_t>(k)] = best_for_weight(inputs, related, k);
  TuneResult best{{}, -1.0};
  for (int k = kWeightSteps; k >= 0; --k) {
    if (per_weight[static_cast<std::size_t>(k)].f1 > best.f1) best = per_weight[static_cast<std::size_t>(k)];
  }
  return best;
}

namespace {

std::vector<bool> related_flags(const std::vector<PairRecord>& val) {
  std::vector<bool> out;
  out.reserve(val.size());
  for (const PairRecord& r : val) {
    if (r.label == labels::kTrue) out.push_back(true);
    else if (r.label == labels::kFalse) out.push_back(false);
    else throw DataError("relatedness validation label must be TRUE or FALSE, got '" + r.label + "'");
  }
  return out;
}

}  // namespace

TuneResult tune_combiner(const std::vector<PairRecord>& val, const ModelParams& model, const EmbeddingTable& table,
                         const PathIndex& index) {
  std::vector<bool> related = related_flags(val);
  check_both_labels(related, val.size());
  auto inputs = relatedness_inputs_all(term_pairs(val), model, table, table, index);
  return tune_combiner(inputs, related);
}

double related_f1(std::span<const RelatednessInputs> inputs, const std::vector<bool>& related,
                  const CombinerConfig& cfg) {
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const bool pred = classify_related(combine(inputs[i], cfg), cfg.threshold);
    if (pred && related[i]) ++tp;
    else if (pred) ++fp;
    else if (related[i]) ++fn;
  }
  return f1_from_counts(tp, fp, fn);
}

void write_combiner(std::ostream& out, const CombinerConfig& cfg, double validation_f1) {
  out << "w_C=" << format_double(cfg.w_cos) << '\n';
  out << "w_L=" << format_double(cfg.w_model) << '\n';
  out << "t=" << format_double(cfg.threshold) << '\n';
  if (validation_f1 >= 0.0) out << "validation_f1=" << format_double(validation_f1) << '\n';
}

CombinerConfig read_combiner(std::istream& in) {
  std::map<std::string, double> fields;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto eq = body.find('=');
    double v = 0.0;
    if (eq == std::string_view::npos || !parse_double(trim(body.substr(eq + 1)), v)) {
      throw DataError("expected key=value at line " + std::to_string(lineno));
    }
    fields[std::string(trim(body.substr(0, eq)))] = v;
  }
  for (const char* key : {"w_C", "w_L", "t"}) {
    if (!fields.contains(key)) throw DataError(std::string("combiner config lacks ") + key);
  }
  CombinerConfig cfg{fields["w_C"], fields["w_L"], fields["t"]};
  try {
    cfg.validate();
  } catch (const ContractError& e) {
    throw DataError(e.what());
  }
  return cfg;
}

CombinerConfig read_combiner_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open combiner config " + path);
  return read_combiner(in);
}

}  // namespace lexrel
