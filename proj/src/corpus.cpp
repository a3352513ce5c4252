#include "lexrel/corpus.hpp"

#include <omp.h>

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lexrel/error.hpp"
#include "lexrel/text.hpp"

namespace lexrel {

namespace {

std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

// `lines[i]` is the source line of token i + 1; empty when unknown.
void check_tree(const SentenceGraph& s, const std::vector<std::size_t>& lines) {
  auto where = [&](std::size_t i) {
    return lines.empty() ? " at token " + std::to_string(i + 1) : at_line(lines[i]);
  };
  const int n = static_cast<int>(s.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1) throw DataError("non-contiguous token index" + where(static_cast<std::size_t>(i)));
    if (t.head == t.index) throw DataError("self-loop" + where(static_cast<std::size_t>(i)));
    if (t.head < 0 || t.head > n) throw DataError("head out of range" + where(static_cast<std::size_t>(i)));
    if (t.head == 0 && ++roots > 1) throw DataError("multiple roots" + where(static_cast<std::size_t>(i)));
  }
  // 0 = unvisited, 1 = on current chain, 2 = reaches root
  std::vector<char> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> chain;
    int cur = i;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      chain.push_back(cur);
      cur = s.at(cur).head;
    }
    if (state[static_cast<std::size_t>(cur)] == 1) throw DataError("cycle" + where(static_cast<std::size_t>(i - 1)));
    for (int c : chain) state[static_cast<std::size_t>(c)] = 2;
  }
  if (n > 0 && roots == 0) throw DataError("no root" + where(0));
}

bool is_multiword_or_empty_id(std::string_view id) {
  return id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos;
}

std::string escape_field(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (c == '%' || c == '/' || c == ':' || c < 0x20 || c == 0x7f) {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 2 >= s.size()) throw DataError("truncated escape in path field");
    int hi = hex_value(s[i + 1]);
    int lo = hex_value(s[i + 2]);
    if (hi < 0 || lo < 0) throw DataError("bad escape in path field");
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

Direction direction_from_symbol(std::string_view s) {
  if (s == "<") return Direction::up;
  if (s == ">") return Direction::down;
  if (s == "^") return Direction::root;
  throw DataError("unknown path direction '" + std::string(s) + "'");
}

const PathCounts& empty_counts() {
  static const PathCounts empty;
  return empty;
}

}  // namespace

int SentenceGraph::root() const {
  for (const Token& t : tokens) {
    if (t.head == 0) return t.index;
  }
  return 0;
}

void validate(const SentenceGraph& sentence) { check_tree(sentence, {}); }

std::vector<SentenceGraph> parse_conll(std::istream& in) {
  std::vector<SentenceGraph> out;
  SentenceGraph current;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t lineno = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    check_tree(current, lines);
    out.push_back(std::move(current));
    current = SentenceGraph{};
    lines.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() < 8) {
      throw DataError("expected at least 8 tab-separated columns, got " + std::to_string(cols.size()) +
                      at_line(lineno));
    }
    if (is_multiword_or_empty_id(cols[0])) continue;
    long long id = 0;
    long long head = 0;
    if (!parse_int(cols[0], id)) throw DataError("non-numeric ID" + at_line(lineno));
    if (!parse_int(cols[6], head)) throw DataError("non-numeric HEAD" + at_line(lineno));
    Token tok;
    tok.index = static_cast<int>(id);
    tok.form = std::string(cols[1]);
    tok.lemma = std::string(cols[2]);
    tok.pos = std::string(cols[3]);
    tok.head = static_cast<int>(head);
    tok.deprel = std::string(cols[7]);
    if (tok.index != static_cast<int>(current.tokens.size()) + 1) {
      throw DataError("non-contiguous token index" + at_line(lineno));
    }
    current.tokens.push_back(std::move(tok));
    lines.push_back(lineno);
  }
  flush();
  return out;
}

std::vector<SentenceGraph> parse_conll_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path);
  try {
    return parse_conll(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_conll(std::ostream& out, const SentenceGraph& sentence) {
  for (const Token& t : sentence.tokens) {
    out << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.pos << "\t_\t_\t" << t.head << '\t' << t.deprel
        << "\t_\t_\n";
  }
  out << '\n';
}

char direction_symbol(Direction d) {
  switch (d) {
    case Direction::up: return '<';
    case Direction::down: return '>';
    case Direction::root: return '^';
  }
  return '?';
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::root: return "root";
  }
  return "?";
}

std::string to_string(const DependencyPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    const PathEdge& e = path.edges[i];
    if (i > 0) out += "::";
    out += escape_field(e.lemma);
    out += '/';
    out += escape_field(e.pos);
    out += '/';
    out += escape_field(e.deprel);
    out += '/';
    out += direction_symbol(e.direction);
  }
  return out;
}

DependencyPath path_from_string(std::string_view text) {
  DependencyPath path;
  if (text.empty()) throw DataError("empty path text");
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find("::", start);
    std::string_view piece = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    auto fields = split(piece, '/');
    if (fields.size() != 4) throw DataError("path edge needs 4 '/'-separated fields: '" + std::string(piece) + "'");
    path.edges.push_back(PathEdge{unescape_field(fields[0]), unescape_field(fields[1]), unescape_field(fields[2]),
                                  direction_from_symbol(fields[3])});
    if (pos == std::string_view::npos) break;
    start = pos + 2;
  }
  return path;
}

DependencyPath reversed(const DependencyPath& path) {
  DependencyPath out;
  out.edges.assign(path.edges.rbegin(), path.edges.rend());
  for (PathEdge& e : out.edges) {
    if (e.lemma == kPlaceholderX) {
      e.lemma = kPlaceholderY;
    } else if (e.lemma == kPlaceholderY) {
      e.lemma = kPlaceholderX;
    }
    if (e.direction == Direction::up) {
      e.direction = Direction::down;
    } else if (e.direction == Direction::down) {
      e.direction = Direction::up;
    }
  }
  return out;
}

PathCounts extract_paths(const SentenceGraph& sentence, std::string_view x_lemma, std::string_view y_lemma,
                         int max_edges) {
  PathCounts result;
  const std::string x = to_lower(x_lemma);
  const std::string y = to_lower(y_lemma);
  const int n = static_cast<int>(sentence.size());
  std::vector<std::string> lemmas(static_cast<std::size_t>(n) + 1);
  std::vector<int> xs, ys;
  for (const Token& t : sentence.tokens) {
    lemmas[static_cast<std::size_t>(t.index)] = to_lower(t.lemma);
    if (lemmas[static_cast<std::size_t>(t.index)] == x) xs.push_back(t.index);
    if (lemmas[static_cast<std::size_t>(t.index)] == y) ys.push_back(t.index);
  }
  if (xs.empty() || ys.empty()) return result;

  auto node = [&](int idx, int xi, int yi, Direction d) {
    const Token& t = sentence.at(idx);
    std::string lemma = idx == xi ? std::string(kPlaceholderX) : idx == yi ? std::string(kPlaceholderY)
                                                                           : lemmas[static_cast<std::size_t>(idx)];
    return PathEdge{std::move(lemma), t.pos, t.deprel, d};
  };

  std::vector<int> dist_from_x(static_cast<std::size_t>(n) + 1, -1);
  for (int xi : xs) {
    std::fill(dist_from_x.begin(), dist_from_x.end(), -1);
    std::vector<int> x_chain;
    for (int cur = xi, d = 0; cur != 0; cur = sentence.at(cur).head, ++d) {
      dist_from_x[static_cast<std::size_t>(cur)] = d;
      x_chain.push_back(cur);
    }
    for (int yi : ys) {
      if (yi == xi) continue;
      std::vector<int> y_chain;  // y up to, excluding, the meeting node
      int cur = yi;
      while (dist_from_x[static_cast<std::size_t>(cur)] < 0) {
        y_chain.push_back(cur);
        cur = sentence.at(cur).head;
        if (static_cast<int>(y_chain.size()) > max_edges) break;
      }
      if (dist_from_x[static_cast<std::size_t>(cur)] < 0) continue;
      const int lca = cur;
      const int up_steps = dist_from_x[static_cast<std::size_t>(lca)];
      const int edges = up_steps + static_cast<int>(y_chain.size());
      if (edges > max_edges) continue;

      DependencyPath path;
      for (int k = 0; k < up_steps; ++k) path.edges.push_back(node(x_chain[static_cast<std::size_t>(k)], xi, yi, Direction::up));
      path.edges.push_back(node(lca, xi, yi, Direction::root));
      for (auto it = y_chain.rbegin(); it != y_chain.rend(); ++it) path.edges.push_back(node(*it, xi, yi, Direction::down));
      ++result[std::move(path)];
    }
  }
  return result;
}

const PathCounts& PathIndex::paths(const std::string& x, const std::string& y) const {
  auto it = entries_.find(TermPair{to_lower(x), to_lower(y)});
  return it == entries_.end() ? empty_counts() : it->second;
}

long long PathIndex::total_count(const std::string& x, const std::string& y) const {
  long long total = 0;
  for (const auto& [path, count] : paths(x, y)) total += count;
  return total;
}

std::size_t PathIndex::distinct_count(const std::string& x, const std::string& y) const { return paths(x, y).size(); }

void PathIndex::add(const TermPair& pair, const DependencyPath& path, long long count) {
  if (count <= 0) throw ContractError("path counts must be positive");
  entries_[pair][path] += count;
}

void PathIndex::merge(const PathIndex& other) {
  for (const auto& [pair, counts] : other.entries_) {
    auto& mine = entries_[pair];
    for (const auto& [path, count] : counts) mine[path] += count;
  }
}

namespace {

using TargetMap = std::unordered_map<std::string, std::vector<std::string>>;

TargetMap targets_by_x(const std::vector<TermPair>& pairs) {
  std::map<std::string, std::set<std::string>> sorted;
  for (const auto& [x, y] : pairs) sorted[to_lower(x)].insert(to_lower(y));
  TargetMap out;
  for (auto& [x, ys] : sorted) out[x].assign(ys.begin(), ys.end());
  return out;
}

void index_sentence(const SentenceGraph& s, const TargetMap& targets, int max_edges, PathIndex& out) {
  std::unordered_set<std::string> present;
  for (const Token& t : s.tokens) present.insert(to_lower(t.lemma));
  for (const std::string& x : present) {
    auto it = targets.find(x);
    if (it == targets.end()) continue;
    for (const std::string& y : it->second) {
      if (!present.contains(y)) continue;
      for (const auto& [path, count] : extract_paths(s, x, y, max_edges)) out.add(TermPair{x, y}, path, count);
    }
  }
}

void check_max_edges(int max_edges) {
  if (max_edges < 1) throw ContractError("max_edges must be at least 1");
}

}  // namespace

PathIndex build_path_index_serial(const std::vector<SentenceGraph>& corpus, const std::vector<TermPair>& pairs,
                                  int max_edges) {
  check_max_edges(max_edges);
  const TargetMap targets = targets_by_x(pairs);
  PathIndex index;
  for (const SentenceGraph& s : corpus) index_sentence(s, targets, max_edges, index);
  return index;
}

PathIndex build_path_index(const std::vector<SentenceGraph>& corpus, const std::vector<TermPair>& pairs,
                           int max_edges) {
  check_max_edges(max_edges);
  const TargetMap targets = targets_by_x(pairs);
  PathIndex index;
  const auto n = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel
  {
    PathIndex local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) index_sentence(corpus[static_cast<std::size_t>(i)], targets, max_edges, local);
#pragma omp critical(lexrel_path_index_merge)
    index.merge(local);
  }
  return index;
}

void write_path_index(std::ostream& out, const PathIndex& index) {
  for (const auto& [pair, counts] : index.entries()) {
    for (const auto& [path, count] : counts) {
      out << pair.first << '\t' << pair.second << '\t' << to_string(path) << '\t' << count << '\n';
    }
  }
}

PathIndex read_path_index(std::istream& in) {
  PathIndex index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != 4) throw DataError("path index needs 4 columns" + at_line(lineno));
    long long count = 0;
    if (!parse_int(cols[3], count) || count < 1) throw DataError("bad path count" + at_line(lineno));
    try {
      index.add(TermPair{std::string(cols[0]), std::string(cols[1])}, path_from_string(cols[2]), count);
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + at_line(lineno));
    }
  }
  return index;
}

}  // namespace lexrel
