#include "lexrel/workflow.hpp"

#include <sstream>

#include "lexrel/relatedness.hpp"
#include "lexrel/synthetic.hpp"

namespace lexrel {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::vector<PairRecord> related_only(const std::vector<PairRecord>& records) {
  std::vector<PairRecord> out;
  for (const PairRecord& r : records) {
    if (r.label != labels::kRandom) out.push_back(r);
  }
  return out;
}

std::vector<PairRecord> as_gate_labels(const std::vector<PairRecord>& records) {
  std::vector<PairRecord> out;
  for (const PairRecord& r : records) {
    out.push_back({r.x, r.y, r.label == labels::kRandom ? labels::kUnrelated : labels::kRelated});
  }
  return out;
}

std::vector<std::string> gold_labels(const std::vector<PairRecord>& records) {
  std::vector<std::string> out;
  for (const PairRecord& r : records) out.push_back(r.label);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const std::vector<SentenceGraph>& corpus, const EmbeddingTable& table,
                                const std::vector<PairRecord>& dataset, const ExperimentConfig& config) {
  ExperimentResult res;
  auto [rest, val] = lexical_split(dataset, config.val_fraction, derive_seed(config.seed, 0));
  auto [train_set, dev] = lexical_split(rest, config.dev_fraction, derive_seed(config.seed, 1));
  res.train_size = train_set.size();
  res.dev_size = dev.size();
  res.val_size = val.size();

  const PathIndex index = build_path_index(corpus, term_pairs(dataset), config.max_edges);

  TrainConfig gate_cfg = config.relatedness;
  gate_cfg.seed = derive_seed(config.seed, 2);
  TrainResult gate = train(as_gate_labels(train_set), as_gate_labels(dev), labels::relatedness_classes(), gate_cfg, index,
                           table);

  TrainConfig cls_cfg = config.relations;
  cls_cfg.seed = derive_seed(config.seed, 3);
  TrainResult cls = train(related_only(train_set), related_only(dev), labels::related_labels(), cls_cfg, index, table);

  TuneResult tuned = tune_combiner(to_relatedness(dev), gate.model, table, index);
  res.combiner = tuned.config;
  res.dev_relatedness_f1 = tuned.f1;

  PipelineConfig pcfg = config.pipeline;
  pcfg.combiner = tuned.config;
  RelationModels models{gate.model, cls.model, table, table, index};
  std::vector<std::string> predicted = classify_relations(term_pairs(val), pcfg, models);

  const std::vector<std::string> gold = gold_labels(val);
  res.confusion = confusion(gold, predicted, labels::relation_labels());
  res.integrated = scores(res.confusion, labels::kRandom, Averaging::weighted);

  LinearTrainConfig bcfg = config.baseline;
  bcfg.seed = derive_seed(config.seed, 4);
  DistributionalBaseline base = train_baseline(train_set, dev, config.baseline_method, bcfg, table);
  std::vector<std::string> base_pred;
  for (const PairRecord& r : val) base_pred.push_back(base.classify(r.x, r.y, table));
  res.baseline = scores(confusion(gold, base_pred, labels::relation_labels()), labels::kRandom, Averaging::weighted);

  std::ostringstream os;
  save_model(os, gate.model);
  res.relatedness_model = os.str();
  os.str("");
  save_model(os, cls.model);
  res.relations_model = os.str();
  os.str("");
  save_baseline(os, base);
  res.baseline_model = os.str();
  os.str("");
  write_report_tsv(os, res.integrated);
  res.integrated_report = os.str();
  os.str("");
  write_report_tsv(os, res.baseline);
  res.baseline_report = os.str();
  return res;
}

}  // namespace lexrel
