#pragma once

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexrel/tensor.hpp"

namespace lexrel {

// Immutable token -> vector table loaded from the plain word-vectors text
// format ("token v1 ... vD" per line, no header).
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension);

  static EmbeddingTable load(std::istream& in);
  static EmbeddingTable load_file(const std::string& path);

  // Exact lowercased-key match, else the unknown vector. Never fails.
  std::span<const double> lookup(std::string_view token) const;
  bool contains(std::string_view token) const;

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::span<const double> unk_vector() const { return unk_; }

  // Builder used by the loader and the synthetic generator.
  void add(std::string token, std::span<const double> vec);
  void write(std::ostream& out) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> rows_;
  std::vector<double> values_;
  Vector unk_;
};

}  // namespace lexrel
