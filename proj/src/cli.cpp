#include "lexrel/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexrel/baselines.hpp"
#include "lexrel/corpus.hpp"
#include "lexrel/dataset.hpp"
#include "lexrel/embeddings.hpp"
#include "lexrel/error.hpp"
#include "lexrel/evaluation.hpp"
#include "lexrel/pipeline.hpp"
#include "lexrel/relatedness.hpp"
#include "lexrel/relation_model.hpp"
#include "lexrel/synthetic.hpp"
#include "lexrel/text.hpp"

namespace lexrel {

namespace {

using json = nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

PathIndex load_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open path index " + path);
  try {
    return read_path_index(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

struct TrainOptions {
  std::string task;
  std::string data;
  std::string validation;
  std::string index;
  std::string embeddings;
  std::string out;
  TrainConfig config;
  std::string average = "count";
  bool tune_embeddings = false;
};

int cmd_extract_paths(const std::string& corpus_file, const std::string& pairs_file, const std::string& out_file,
                      int max_edges, std::ostream& log) {
  auto corpus = parse_conll_file(corpus_file);
  auto pairs = read_dataset_file(pairs_file, false);
  PathIndex index = build_path_index(corpus, term_pairs(pairs), max_edges);
  auto out = open_out(out_file);
  write_path_index(out, index);
  log << "indexed " << corpus.size() << " sentences, " << pairs.size() << " pairs, " << index.entries().size()
      << " pairs with paths\n";
  return kExitOk;
}

int cmd_train(TrainOptions o, std::ostream& log) {
  if (o.config.epochs == 0) {
    o.config.epochs = (o.task == "relatedness" ? relatedness_preset() : relations_preset()).epochs;
  }
  o.config.average = o.average == "uniform" ? AverageMode::uniform : AverageMode::count_weighted;
  o.config.tune_word_embeddings = o.tune_embeddings;

  auto records = read_dataset_file(o.data);
  std::vector<PairRecord> val;
  if (!o.validation.empty()) val = read_dataset_file(o.validation);
  std::vector<std::string> label_set;
  std::size_t filtered = 0;

  auto remap = [&](std::vector<PairRecord>& rs, bool strict) {
    std::vector<PairRecord> kept;
    std::set<std::string> bad;
    for (PairRecord& r : rs) {
      if (o.task == "relatedness") {
        if (r.label == labels::kTrue) r.label = labels::kRelated;
        else if (r.label == labels::kFalse) r.label = labels::kUnrelated;
        else bad.insert(r.label);
        kept.push_back(r);
      } else {
        if (r.label == labels::kRandom) {
          if (strict) ++filtered;
          continue;
        }
        const auto& rl = labels::related_labels();
        if (std::find(rl.begin(), rl.end(), r.label) == rl.end()) bad.insert(r.label);
        kept.push_back(r);
      }
    }
    if (!bad.empty()) {
      std::string msg = "labels do not match task '" + o.task + "':";
      for (const auto& b : bad) msg += " " + b;
      throw DataError(msg);
    }
    rs = std::move(kept);
  };

  if (o.task == "relatedness") {
    label_set = labels::relatedness_classes();
  } else {
    label_set = labels::related_labels();
  }
  remap(records, true);
  remap(val, false);
  if (o.task == "relations") log << "filtered " << filtered << " RANDOM rows\n";

  PathIndex index = load_index(o.index);
  EmbeddingTable table = EmbeddingTable::load_file(o.embeddings);
  TrainResult result = train(records, val, label_set, o.config, index, table);
  save_model_file(o.out, result.model);

  json manifest{{"task", o.task},
                {"seed", o.config.seed},
                {"data", o.data},
                {"validation", o.validation},
                {"index", o.index},
                {"embeddings", o.embeddings},
                {"train_size", records.size()},
                {"filtered_random", filtered},
                {"config", json::parse(to_json_string(o.config))},
                {"final_loss", result.final_loss}};
  json history = json::array();
  for (const EpochStats& s : result.history) {
    history.push_back({{"epoch", s.epoch}, {"train_loss", s.train_loss}, {"val_accuracy", s.val_accuracy}});
  }
  manifest["history"] = history;
  auto mf = open_out(o.out + ".manifest.json");
  mf << manifest.dump(1) << '\n';
  log << "trained " << o.task << " model on " << records.size() << " pairs, final loss "
      << format_double(result.final_loss) << '\n';
  return kExitOk;
}

int cmd_tune(const std::string& data, const std::string& model_file, const std::string& index_file,
             const std::string& embeddings, const std::string& cosine_embeddings, const std::string& out_file,
             std::ostream& log) {
  auto val = read_dataset_file(data);
  ModelParams model = load_model_file(model_file);
  PathIndex index = load_index(index_file);
  EmbeddingTable table = EmbeddingTable::load_file(embeddings);
  EmbeddingTable cos_table = cosine_embeddings.empty() ? table : EmbeddingTable::load_file(cosine_embeddings);

  std::vector<bool> related;
  for (const PairRecord& r : val) {
    if (r.label == labels::kTrue) related.push_back(true);
    else if (r.label == labels::kFalse) related.push_back(false);
    else throw DataError("tune expects TRUE/FALSE labels, got '" + r.label + "'");
  }
  auto inputs = relatedness_inputs_all(term_pairs(val), model, cos_table, table, index);
  TuneResult tuned = tune_combiner(inputs, related);
  auto out = open_out(out_file);
  write_combiner(out, tuned.config, tuned.f1);
  log << "w_C=" << format_double(tuned.config.w_cos) << " w_L=" << format_double(tuned.config.w_model)
      << " t=" << format_double(tuned.config.threshold) << " validation F1=" << format_double(tuned.f1) << '\n';
  return kExitOk;
}

struct PredictOptions {
  std::string task = "relations";
  std::string data;
  std::string index;
  std::string embeddings;
  std::string cosine_embeddings;
  std::string gate_model;
  std::string relations_model;
  std::string combiner;
  std::string out;
  PipelineConfig pipeline;
  std::string path_count = "occurrences";
};

int cmd_predict(const PredictOptions& o, std::ostream& log) {
  auto records = read_dataset_file(o.data, false);
  PathIndex index = load_index(o.index);
  EmbeddingTable table = EmbeddingTable::load_file(o.embeddings);
  EmbeddingTable cos_table = o.cosine_embeddings.empty() ? table : EmbeddingTable::load_file(o.cosine_embeddings);
  ModelParams gate = load_model_file(o.gate_model);
  PipelineConfig cfg = o.pipeline;
  cfg.combiner = read_combiner_file(o.combiner);
  cfg.path_count = o.path_count == "distinct" ? PathCountMode::distinct : PathCountMode::occurrences;

  std::vector<std::string> predicted;
  const auto pairs = term_pairs(records);
  if (o.task == "relatedness") {
    predicted = classify_relatedness(pairs, cfg.combiner, gate, cos_table, table, index);
  } else {
    if (o.relations_model.empty()) throw DataError("predict --task relations needs --relations-model");
    ModelParams cls = load_model_file(o.relations_model);
    predicted = classify_relations(pairs, cfg, RelationModels{gate, cls, cos_table, table, index});
  }
  auto out = open_out(o.out);
  for (std::size_t i = 0; i < records.size(); ++i) {
    out << records[i].x << '\t' << records[i].y << '\t' << predicted[i] << '\n';
  }
  log << "predicted " << records.size() << " pairs\n";
  return kExitOk;
}

struct EvaluateOptions {
  std::string gold;
  std::string pred;
  std::string exclude;
  bool no_exclude = false;
  std::string mode = "weighted";
  std::string format = "tsv";
  std::string method = "integrated";
  std::string out;
  bool show_confusion = false;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& stdout_stream) {
  auto gold = read_dataset_file(o.gold);
  auto pred = read_dataset_file(o.pred);
  if (gold.size() != pred.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) + " lines but predictions have " +
                    std::to_string(pred.size()));
  }
  std::set<std::string> known(labels::relation_labels().begin(), labels::relation_labels().end());
  known.insert(labels::kTrue);
  known.insert(labels::kFalse);
  bool binary = true;
  std::vector<std::string> g, p;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!known.contains(gold[i].label)) throw DataError("unknown gold label '" + gold[i].label + "'");
    if (!known.contains(pred[i].label)) throw DataError("unknown predicted label '" + pred[i].label + "'");
    if (to_lower(gold[i].x) != to_lower(pred[i].x) || to_lower(gold[i].y) != to_lower(pred[i].y)) {
      throw DataError("pair mismatch at line " + std::to_string(i + 1));
    }
    if (gold[i].label != labels::kTrue && gold[i].label != labels::kFalse) binary = false;
    g.push_back(gold[i].label);
    p.push_back(pred[i].label);
  }
  const std::vector<std::string> order =
      binary ? std::vector<std::string>{labels::kTrue, labels::kFalse} : labels::relation_labels();
  std::optional<std::string> exclude;
  if (!o.no_exclude) exclude = o.exclude.empty() ? (binary ? labels::kFalse : labels::kRandom) : o.exclude;
  ConfusionMatrix m = confusion(g, p, order);
  ScoreReport report = scores(m, exclude, o.mode == "macro" ? Averaging::macro : Averaging::weighted);

  std::ostringstream os;
  if (o.format == "table") write_report_table(os, o.method, report);
  else write_report_tsv(os, report);
  if (o.show_confusion) {
    os << '\n';
    write_confusion_tsv(os, m, true);
  }
  if (o.out.empty()) {
    stdout_stream << os.str();
  } else {
    auto out = open_out(o.out);
    out << os.str();
  }
  return kExitOk;
}

int cmd_generate(const SyntheticConfig& cfg, const std::string& dir, std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  SyntheticData data = generate_synthetic(cfg);
  auto corpus = open_out((fs::path(dir) / "corpus.conll").string());
  for (const auto& s : data.corpus) write_conll(corpus, s);
  auto emb = open_out((fs::path(dir) / "embeddings.txt").string());
  data.embeddings.write(emb);
  auto rel = open_out((fs::path(dir) / "relations.tsv").string());
  write_dataset(rel, data.relations);
  auto bin = open_out((fs::path(dir) / "relatedness.tsv").string());
  write_dataset(bin, data.relatedness);
  log << "wrote " << data.corpus.size() << " sentences and " << data.relations.size() << " pairs to " << dir << '\n';
  return kExitOk;
}

struct BaselineOptions {
  std::string train;
  std::string validation;
  std::string embeddings;
  std::string out;
  std::string method = "concat";
  std::string reg = "l1";
  LinearTrainConfig config;
  std::string predict;
  std::string predictions;
};

int cmd_baseline(const BaselineOptions& o, std::ostream& log) {
  auto train_set = read_dataset_file(o.train);
  auto val = read_dataset_file(o.validation);
  EmbeddingTable table = EmbeddingTable::load_file(o.embeddings);
  LinearTrainConfig cfg = o.config;
  cfg.reg = o.reg == "l2" ? Regularizer::l2 : Regularizer::l1;
  DistributionalBaseline b = train_baseline(train_set, val, combination_from_name(o.method), cfg, table);
  auto out = open_out(o.out);
  save_baseline(out, b);
  if (!o.predict.empty()) {
    if (o.predictions.empty()) throw DataError("baseline --predict needs --predictions");
    auto records = read_dataset_file(o.predict, false);
    auto pout = open_out(o.predictions);
    for (const PairRecord& r : records) pout << r.x << '\t' << r.y << '\t' << b.classify(r.x, r.y, table) << '\n';
  }
  log << "baseline cosine threshold " << format_double(b.cosine_threshold) << '\n';
  return kExitOk;
}

void add_train_flags(CLI::App* cmd, TrainConfig& c) {
  cmd->add_option("--epochs", c.epochs, "training epochs (default: task preset)");
  cmd->add_option("--hidden-layers", c.hidden_layers, "0 or 1")->capture_default_str()->check(CLI::IsMember({0, 1}));
  cmd->add_option("--hidden-units", c.hidden_units)->capture_default_str();
  cmd->add_option("--dropout", c.word_dropout_rate, "word dropout rate")->capture_default_str();
  cmd->add_option("--lr", c.learning_rate, "SGD learning rate")->capture_default_str();
  cmd->add_option("--seed", c.seed)->capture_default_str();
  cmd->add_option("--path-hidden", c.path_hidden, "path encoder hidden size")->capture_default_str();
  cmd->add_option("--lemma-width", c.edge_widths.lemma, "0 = embedding dimension")->capture_default_str();
  cmd->add_option("--pos-width", c.edge_widths.pos)->capture_default_str();
  cmd->add_option("--deprel-width", c.edge_widths.deprel)->capture_default_str();
  cmd->add_option("--direction-width", c.edge_widths.direction)->capture_default_str();
  cmd->add_option("--init-scale", c.init_scale)->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Path-based and distributional semantic relation classification"};
  app.set_config("--config", "", "key-value config file; flags override it");
  app.require_subcommand(1);

  std::string corpus_file, pairs_file, index_out;
  int max_edges = kDefaultMaxEdges;
  auto* extract = app.add_subcommand("extract-paths", "index dependency paths between dataset pairs");
  extract->add_option("--corpus", corpus_file, "CoNLL corpus")->required();
  extract->add_option("--pairs", pairs_file, "TSV of x<TAB>y[<TAB>label]")->required();
  extract->add_option("--out", index_out, "path index output")->required();
  extract->add_option("--max-edges", max_edges)->capture_default_str()->check(CLI::PositiveNumber);

  TrainOptions topt;
  topt.config = relations_preset();
  topt.config.epochs = 0;
  auto* train_cmd = app.add_subcommand("train", "train the integrated classifier");
  train_cmd->add_option("--task", topt.task)->required()->check(CLI::IsMember({"relatedness", "relations"}));
  train_cmd->add_option("--data", topt.data, "training TSV")->required();
  train_cmd->add_option("--validation", topt.validation, "validation TSV (reported per epoch)");
  train_cmd->add_option("--index", topt.index, "path index")->required();
  train_cmd->add_option("--embeddings", topt.embeddings, "word vectors")->required();
  train_cmd->add_option("--out", topt.out, "model file")->required();
  train_cmd->add_option("--average", topt.average, "path averaging")->check(CLI::IsMember({"count", "uniform"}));
  train_cmd->add_flag("--tune-embeddings", topt.tune_embeddings, "also train the x/y word vectors");
  add_train_flags(train_cmd, topt.config);

  std::string tune_data, tune_model, tune_index, tune_emb, tune_cos_emb, tune_out;
  auto* tune = app.add_subcommand("tune", "tune combiner weights and threshold");
  tune->add_option("--data", tune_data, "validation TSV with TRUE/FALSE labels")->required();
  tune->add_option("--model", tune_model, "relatedness model")->required();
  tune->add_option("--index", tune_index)->required();
  tune->add_option("--embeddings", tune_emb)->required();
  tune->add_option("--cosine-embeddings", tune_cos_emb, "vectors for the cosine term (default: --embeddings)");
  tune->add_option("--out", tune_out, "combiner config output")->required();

  PredictOptions popt;
  auto* predict_cmd = app.add_subcommand("predict", "predict relatedness or relations");
  predict_cmd->add_option("--task", popt.task)->capture_default_str()->check(CLI::IsMember({"relatedness", "relations"}));
  predict_cmd->add_option("--data", popt.data, "TSV of pairs")->required();
  predict_cmd->add_option("--index", popt.index)->required();
  predict_cmd->add_option("--embeddings", popt.embeddings)->required();
  predict_cmd->add_option("--cosine-embeddings", popt.cosine_embeddings);
  predict_cmd->add_option("--gate-model", popt.gate_model, "relatedness model")->required();
  predict_cmd->add_option("--relations-model", popt.relations_model, "related-classes model");
  predict_cmd->add_option("--combiner", popt.combiner, "combiner config")->required();
  predict_cmd->add_option("--syn-margin", popt.pipeline.syn_margin)->capture_default_str();
  predict_cmd->add_option("--syn-max-paths", popt.pipeline.syn_max_paths)->capture_default_str();
  predict_cmd->add_option("--path-count", popt.path_count)->check(CLI::IsMember({"occurrences", "distinct"}));
  predict_cmd->add_option("--out", popt.out, "predictions TSV")->required();

  EvaluateOptions eopt;
  auto* eval = app.add_subcommand("evaluate", "score predictions against gold labels");
  eval->add_option("--gold", eopt.gold)->required();
  eval->add_option("--pred", eopt.pred)->required();
  eval->add_option("--exclude", eopt.exclude, "label left out of the average (default RANDOM / FALSE)");
  eval->add_flag("--no-exclude", eopt.no_exclude);
  eval->add_option("--mode", eopt.mode)->capture_default_str()->check(CLI::IsMember({"weighted", "macro"}));
  eval->add_option("--format", eopt.format)->capture_default_str()->check(CLI::IsMember({"tsv", "table"}));
  eval->add_option("--method", eopt.method, "method name for the table")->capture_default_str();
  eval->add_flag("--confusion", eopt.show_confusion, "append the row-normalized confusion matrix");
  eval->add_option("--out", eopt.out, "report file (default stdout)");

  SyntheticConfig gcfg;
  std::string gen_dir;
  auto* gen = app.add_subcommand("generate", "write a synthetic corpus, embeddings and datasets");
  gen->add_option("--out-dir", gen_dir)->required();
  gen->add_option("--seed", gcfg.seed)->capture_default_str();
  gen->add_option("--sentences", gcfg.sentences)->capture_default_str();
  gen->add_option("--topics", gcfg.topics)->capture_default_str();
  gen->add_option("--dimension", gcfg.dimension)->capture_default_str();

  BaselineOptions bopt;
  auto* base = app.add_subcommand("baseline", "train the distributional baseline");
  base->add_option("--train", bopt.train)->required();
  base->add_option("--validation", bopt.validation, "tunes the cosine gate")->required();
  base->add_option("--embeddings", bopt.embeddings)->required();
  base->add_option("--out", bopt.out)->required();
  base->add_option("--method", bopt.method)->capture_default_str()->check(CLI::IsMember({"concat", "diff", "asym"}));
  base->add_option("--reg", bopt.reg)->capture_default_str()->check(CLI::IsMember({"l1", "l2"}));
  base->add_option("--strength", bopt.config.strength)->capture_default_str();
  base->add_option("--epochs", bopt.config.epochs)->capture_default_str();
  base->add_option("--lr", bopt.config.learning_rate)->capture_default_str();
  base->add_option("--seed", bopt.config.seed)->capture_default_str();
  base->add_option("--predict", bopt.predict, "pairs to classify");
  base->add_option("--predictions", bopt.predictions, "output for --predict");

  std::vector<std::string> reversed_args(args.rbegin(), args.rend());
  try {
    app.parse(reversed_args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    err << os.str();
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (extract->parsed()) return cmd_extract_paths(corpus_file, pairs_file, index_out, max_edges, err);
    if (train_cmd->parsed()) return cmd_train(topt, err);
    if (tune->parsed()) return cmd_tune(tune_data, tune_model, tune_index, tune_emb, tune_cos_emb, tune_out, err);
    if (predict_cmd->parsed()) return cmd_predict(popt, err);
    if (eval->parsed()) return cmd_evaluate(eopt, out);
    if (gen->parsed()) return cmd_generate(gcfg, gen_dir, err);
    if (base->parsed()) return cmd_baseline(bopt, err);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lexrel
