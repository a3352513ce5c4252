#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexrel {

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string pos;
  int head = 0;  // 0 = root
  std::string deprel;
};

// One parsed sentence. Tokens are stored in index order; tokens[i].index == i + 1.
struct SentenceGraph {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  const Token& at(int index) const { return tokens[static_cast<std::size_t>(index - 1)]; }
  int root() const;
};

// Checks contiguity, head range, single root and acyclicity. Throws DataError.
void validate(const SentenceGraph& sentence);

std::vector<SentenceGraph> parse_conll(std::istream& in);
std::vector<SentenceGraph> parse_conll_file(const std::string& path);
void write_conll(std::ostream& out, const SentenceGraph& sentence);

enum class Direction : std::uint8_t { up, down, root };

char direction_symbol(Direction d);
std::string_view direction_name(Direction d);

inline constexpr std::string_view kPlaceholderX = "X";
inline constexpr std::string_view kPlaceholderY = "Y";

// One node on the path. `direction` says how the traversal from X to Y moves
// through this node's arc: up toward its head, down into it from its head, or
// root for the turning point of the path.
struct PathEdge {
  std::string lemma;
  std::string pos;
  std::string deprel;
  Direction direction = Direction::root;

  auto operator<=>(const PathEdge&) const = default;
};

// Nodes from the X endpoint to the Y endpoint. A path spanning k tree edges
// holds k + 1 entries; the first carries X and the last carries Y.
struct DependencyPath {
  std::vector<PathEdge> edges;

  std::size_t tree_edges() const { return edges.empty() ? 0 : edges.size() - 1; }
  auto operator<=>(const DependencyPath&) const = default;
};

// Text form: "lemma/pos/deprel/dir" joined by "::", dir one of < > ^.
// Field characters '%', '/', ':' and control characters are %XX-escaped.
std::string to_string(const DependencyPath& path);
DependencyPath path_from_string(std::string_view text);

// Reverses the traversal: order flipped, X/Y swapped, up/down swapped.
DependencyPath reversed(const DependencyPath& path);

using PathCounts = std::map<DependencyPath, long long>;
using TermPair = std::pair<std::string, std::string>;

inline constexpr int kDefaultMaxEdges = 4;

// One path per (x occurrence, y occurrence) within `max_edges` tree edges.
// Lemmas match case-insensitively.
PathCounts extract_paths(const SentenceGraph& sentence, std::string_view x_lemma, std::string_view y_lemma,
                         int max_edges = kDefaultMaxEdges);

class PathIndex {
 public:
  const PathCounts& paths(const std::string& x, const std::string& y) const;
  const PathCounts& paths(const TermPair& pair) const { return paths(pair.first, pair.second); }
  // Total occurrences across all paths for the pair.
  long long total_count(const std::string& x, const std::string& y) const;
  std::size_t distinct_count(const std::string& x, const std::string& y) const;

  void add(const TermPair& pair, const DependencyPath& path, long long count);
  void merge(const PathIndex& other);

  const std::map<TermPair, PathCounts>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const PathIndex&, const PathIndex&) = default;

 private:
  std::map<TermPair, PathCounts> entries_;
};

// Pairs are lowercased before lookup. Parallel over sentences; merged result
// equals build_path_index_serial exactly.
PathIndex build_path_index(const std::vector<SentenceGraph>& corpus, const std::vector<TermPair>& pairs,
                           int max_edges = kDefaultMaxEdges);
PathIndex build_path_index_serial(const std::vector<SentenceGraph>& corpus, const std::vector<TermPair>& pairs,
                                  int max_edges = kDefaultMaxEdges);

// TSV "x<TAB>y<TAB>path<TAB>count", sorted by pair then path.
void write_path_index(std::ostream& out, const PathIndex& index);
PathIndex read_path_index(std::istream& in);

}  // namespace lexrel
