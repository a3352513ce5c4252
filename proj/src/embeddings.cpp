#include "lexrel/embeddings.hpp"

#include <fstream>

#include "lexrel/error.hpp"
#include "lexrel/text.hpp"

namespace lexrel {

EmbeddingTable::EmbeddingTable(std::size_t dimension) : dimension_(dimension), unk_(dimension, 0.0) {
  if (dimension == 0) throw ContractError("embedding dimension must be positive");
}

void EmbeddingTable::add(std::string token, std::span<const double> vec) {
  if (vec.size() != dimension_) throw ContractError("embedding dimension mismatch for '" + token + "'");
  if (rows_.contains(token)) throw DataError("duplicate token '" + token + "'");
  rows_.emplace(token, tokens_.size());
  values_.insert(values_.end(), vec.begin(), vec.end());
  if (token == "<unk>") unk_.assign(vec.begin(), vec.end());
  tokens_.push_back(std::move(token));
}

std::span<const double> EmbeddingTable::lookup(std::string_view token) const {
  auto it = rows_.find(to_lower(token));
  if (it == rows_.end()) return unk_;
  return {values_.data() + it->second * dimension_, dimension_};
}

bool EmbeddingTable::contains(std::string_view token) const { return rows_.contains(to_lower(token)); }

EmbeddingTable EmbeddingTable::load(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  Vector vec;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view body = trim(line);
    if (body.empty()) continue;
    std::vector<std::string_view> fields;
    for (auto f : split(body, ' ')) {
      if (!f.empty()) fields.push_back(f);
    }
    const std::size_t dim = fields.size() - 1;
    if (dim == 0) throw DataError("no vector values at line " + std::to_string(lineno));
    if (table.dimension_ == 0) {
      table.dimension_ = dim;
      table.unk_.assign(dim, 0.0);
    } else if (dim != table.dimension_) {
      throw DataError("dimension mismatch at line " + std::to_string(lineno));
    }
    vec.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_double(fields[i + 1], vec[i])) {
        throw DataError("unparsable float '" + std::string(fields[i + 1]) + "' at line " + std::to_string(lineno));
      }
    }
    std::string token(fields[0]);
    if (table.rows_.contains(token)) {
      throw DataError("duplicate token '" + token + "' at line " + std::to_string(lineno));
    }
    table.add(std::move(token), vec);
  }
  if (table.dimension_ == 0) throw DataError("embedding file is empty");
  return table;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path);
  try {
    return load(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void EmbeddingTable::write(std::ostream& out) const {
  for (std::size_t r = 0; r < tokens_.size(); ++r) {
    out << tokens_[r];
    for (std::size_t c = 0; c < dimension_; ++c) out << ' ' << format_double(values_[r * dimension_ + c]);
    out << '\n';
  }
}

}  // namespace lexrel
