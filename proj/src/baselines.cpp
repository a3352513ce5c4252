#include "lexrel/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "lexrel/error.hpp"
#include "lexrel/random.hpp"
#include "lexrel/relatedness.hpp"

namespace lexrel {

using json = nlohmann::json;

Combination combination_from_name(const std::string& name) {
  if (name == "concat") return Combination::concat;
  if (name == "diff") return Combination::diff;
  if (name == "asym") return Combination::asym;
  throw DataError("unknown combination method '" + name + "'");
}

std::string combination_name(Combination c) {
  switch (c) {
    case Combination::concat: return "concat";
    case Combination::diff: return "diff";
    case Combination::asym: return "asym";
  }
  return "?";
}

Vector combine_vectors(std::span<const double> vx, std::span<const double> vy, Combination method) {
  if (vx.size() != vy.size()) throw ContractError("cannot combine vectors of different lengths");
  const std::size_t d = vx.size();
  Vector out;
  switch (method) {
    case Combination::concat:
      out.assign(vx.begin(), vx.end());
      out.insert(out.end(), vy.begin(), vy.end());
      break;
    case Combination::diff:
      out.resize(d);
      for (std::size_t i = 0; i < d; ++i) out[i] = vx[i] - vy[i];
      break;
    case Combination::asym:
      out.resize(2 * d);
      for (std::size_t i = 0; i < d; ++i) {
        const double diff = vx[i] - vy[i];
        out[i] = diff;
        out[d + i] = diff * diff;
      }
      break;
  }
  return out;
}

LinearModel train_linear(const std::vector<LabeledFeatures>& data, const LinearTrainConfig& config) {
  if (config.strength < 0.0) throw ContractError("regularization strength must be non-negative");
  if (config.epochs < 1) throw ContractError("epochs must be at least 1");
  if (!(config.learning_rate > 0.0)) throw ContractError("learning_rate must be positive");
  std::set<std::string> distinct;
  for (const auto& d : data) distinct.insert(d.label);
  if (distinct.size() < 2) throw DataError("linear classifier needs at least two distinct labels");
  const std::size_t width = data.front().features.size();
  for (const auto& d : data) {
    if (d.features.size() != width) throw ContractError("feature vectors differ in width");
  }

  LinearModel m;
  m.label_set.assign(distinct.begin(), distinct.end());
  m.weights = Matrix(m.label_set.size(), width);
  m.bias = Matrix(m.label_set.size(), 1);
  std::vector<std::size_t> gold(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    gold[i] = static_cast<std::size_t>(
        std::find(m.label_set.begin(), m.label_set.end(), data[i].label) - m.label_set.begin());
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const double eta = config.learning_rate;
  const double shrink = eta * config.strength;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t idx : order) {
      const Vector& f = data[idx].features;
      for (std::size_t l = 0; l < m.label_set.size(); ++l) {
        auto w = m.weights.row(l);
        const double target = l == gold[idx] ? 1.0 : -1.0;
        if (target * (dot(w, f) + m.bias.data[l]) < 1.0) {
          axpy(eta * target, f, w);
          m.bias.data[l] += eta * target;
        }
        if (shrink == 0.0) continue;
        if (config.reg == Regularizer::l2) {
          for (double& v : w) v *= std::max(0.0, 1.0 - shrink);
        } else {
          for (double& v : w) v = std::copysign(std::max(0.0, std::abs(v) - shrink), v);
        }
      }
    }
  }
  return m;
}

std::vector<double> linear_scores(const LinearModel& model, std::span<const double> features) {
  if (features.size() != model.weights.cols) throw ContractError("feature width does not match linear model");
  std::vector<double> s(model.weights.rows);
  matvec(model.weights, features, s);
  axpy(1.0, model.bias.data, s);
  return s;
}

const std::string& predict_linear(const LinearModel& model, std::span<const double> features) {
  auto s = linear_scores(model, features);
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] > s[best]) best = i;
  }
  return model.label_set.at(best);
}

std::string DistributionalBaseline::classify(const std::string& x, const std::string& y,
                                             const EmbeddingTable& table) const {
  auto vx = table.lookup(x);
  auto vy = table.lookup(y);
  if (!classify_related(cosine_norm(vx, vy), cosine_threshold)) return labels::kRandom;
  return predict_linear(classifier, combine_vectors(vx, vy, method));
}

DistributionalBaseline train_baseline(const std::vector<PairRecord>& train, const std::vector<PairRecord>& val,
                                      Combination method, const LinearTrainConfig& config,
                                      const EmbeddingTable& table) {
  DistributionalBaseline b;
  b.method = method;
  std::vector<LabeledFeatures> data;
  for (const PairRecord& r : train) {
    if (r.label == labels::kRandom) continue;
    data.push_back({combine_vectors(table.lookup(r.x), table.lookup(r.y), method), r.label});
  }
  if (data.empty()) throw DataError("baseline training set has no related pairs");
  b.classifier = train_linear(data, config);

  std::vector<RelatednessInputs> inputs;
  std::vector<bool> related;
  for (const PairRecord& r : val) {
    inputs.push_back(RelatednessInputs{cosine_norm(table.lookup(r.x), table.lookup(r.y)), 0.0});
    related.push_back(r.label != labels::kRandom);
  }
  b.cosine_threshold = tune_threshold(inputs, related, 1.0).config.threshold;
  return b;
}

void save_baseline(std::ostream& out, const DistributionalBaseline& b) {
  auto mat = [](const Matrix& m) { return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}}; };
  json j{{"format", "lexrel-linear"},
         {"version", 1},
         {"method", combination_name(b.method)},
         {"cosine_threshold", b.cosine_threshold},
         {"label_set", b.classifier.label_set},
         {"tensors", {{"weights", mat(b.classifier.weights)}, {"bias", mat(b.classifier.bias)}}}};
  out << j.dump(1) << '\n';
}

DistributionalBaseline load_baseline(std::istream& in) {
  try {
    json j = json::parse(in);
    if (j.at("format").get<std::string>() != "lexrel-linear") throw DataError("not a lexrel baseline model");
    DistributionalBaseline b;
    b.method = combination_from_name(j.at("method").get<std::string>());
    b.cosine_threshold = j.at("cosine_threshold").get<double>();
    b.classifier.label_set = j.at("label_set").get<std::vector<std::string>>();
    auto mat = [](const json& m) {
      Matrix out;
      out.rows = m.at("rows").get<std::size_t>();
      out.cols = m.at("cols").get<std::size_t>();
      out.data = m.at("data").get<std::vector<double>>();
      if (out.data.size() != out.rows * out.cols) throw DataError("matrix data length does not match its shape");
      return out;
    };
    b.classifier.weights = mat(j.at("tensors").at("weights"));
    b.classifier.bias = mat(j.at("tensors").at("bias"));
    if (b.classifier.weights.rows != b.classifier.label_set.size() || b.classifier.bias.rows != b.classifier.weights.rows) {
      throw DataError("linear model shapes do not match its label set");
    }
    return b;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed baseline model: ") + e.what());
  }
}

}  // namespace lexrel
