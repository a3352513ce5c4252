#include <doctest.h>

#include <sstream>

#include "lexrel/corpus.hpp"
#include "lexrel/error.hpp"
#include "support.hpp"

using namespace lexrel;

namespace {

const char* kCatChase =
    "1\tcats\tcat\tNOUN\t_\t_\t2\tnsubj\n"
    "2\tchase\tchase\tVERB\t_\t_\t0\troot\n"
    "3\tmice\tmouse\tNOUN\t_\t_\t2\tdobj\n";

std::vector<SentenceGraph> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conll(in);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

const char* kExpectedPath = "X/NOUN/nsubj/<::chase/VERB/root/^::Y/NOUN/dobj/>";

}  // namespace

TEST_CASE("parse_conll reads a three-token sentence") {
  auto sentences = parse(kCatChase);
  REQUIRE(sentences.size() == 1);
  const SentenceGraph& s = sentences[0];
  CHECK(s.size() == 3);
  CHECK(s.root() == 2);
  CHECK(s.at(1).lemma == "cat");
  CHECK(s.at(3).deprel == "dobj");
  CHECK(s.at(3).head == 2);
}

TEST_CASE("parse_conll on an empty stream") { CHECK(parse("").empty()); }

TEST_CASE("parse_conll handles comments, blank runs, CRLF and ten columns") {
  std::string text = "# sent_id = 1\n\n\n";
  text += "1\tcats\tcat\tNOUN\tNNS\t_\t2\tnsubj\t_\t_\r\n";
  text += "1-2\tcatschase\t_\t_\t_\t_\t_\t_\t_\t_\n";
  text += "2\tchase\tchase\tVERB\tVBP\t_\t0\troot\t_\t_\n";
  text += "2.1\tgap\tgap\tNOUN\t_\t_\t_\t_\t_\t_\n\n";
  text += kCatChase;
  auto sentences = parse(text);
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[0].size() == 2);
  CHECK(sentences[0].at(1).deprel == "nsubj");
  CHECK(sentences[1].size() == 3);
}

TEST_CASE("parse_conll errors name the line") {
  CHECK(parse_error("1\tcats\tcat\tNOUN\t_\t_\t2\tnsubj\n2\tchase\tchase\tVERB\t_\t_\t2\troot\n") ==
        "self-loop at line 2");
  CHECK(parse_error("1\tcats\tcat\tNOUN\t_\t_\t2\n").find("line 1") != std::string::npos);
  CHECK(parse_error("x\tcats\tcat\tNOUN\t_\t_\t0\troot\n").find("non-numeric ID") != std::string::npos);
  CHECK(parse_error("1\tcats\tcat\tNOUN\t_\t_\tq\troot\n").find("non-numeric HEAD") != std::string::npos);
  CHECK(parse_error("1\ta\ta\tX\t_\t_\t2\tdep\n2\tb\tb\tX\t_\t_\t1\tdep\n3\tc\tc\tX\t_\t_\t0\troot\n")
            .find("cycle") != std::string::npos);
  CHECK(parse_error("1\ta\ta\tX\t_\t_\t0\troot\n2\tb\tb\tX\t_\t_\t0\troot\n") == "multiple roots at line 2");
  CHECK(parse_error("1\ta\ta\tX\t_\t_\t5\tdep\n2\tb\tb\tX\t_\t_\t0\troot\n") == "head out of range at line 1");
  CHECK(parse_error("1\ta\ta\tX\t_\t_\t0\troot\n3\tb\tb\tX\t_\t_\t1\tdep\n").find("non-contiguous") !=
        std::string::npos);
}

TEST_CASE("write_conll round-trips") {
  auto sentences = parse(kCatChase);
  std::ostringstream out;
  write_conll(out, sentences[0]);
  auto again = parse(out.str());
  REQUIRE(again.size() == 1);
  CHECK(again[0].tokens.size() == 3);
  for (int i = 1; i <= 3; ++i) {
    CHECK(again[0].at(i).lemma == sentences[0].at(i).lemma);
    CHECK(again[0].at(i).head == sentences[0].at(i).head);
    CHECK(again[0].at(i).deprel == sentences[0].at(i).deprel);
  }
}

TEST_CASE("extract_paths on the cat/mouse sentence") {
  const SentenceGraph s = parse(kCatChase)[0];
  PathCounts paths = extract_paths(s, "cat", "mouse", 4);
  REQUIRE(paths.size() == 1);
  CHECK(to_string(paths.begin()->first) == kExpectedPath);
  CHECK(paths.begin()->second == 1);
  CHECK(paths.begin()->first.tree_edges() == 2);

  CHECK(extract_paths(s, "dog", "mouse", 4).empty());
  CHECK(extract_paths(s, "cat", "mouse", 1).empty());
  CHECK(extract_paths(s, "CAT", "Mouse", 2).size() == 1);
}

TEST_CASE("extract_paths when one term heads the other") {
  const SentenceGraph s = parse(kCatChase)[0];
  PathCounts paths = extract_paths(s, "chase", "mouse", 4);
  REQUIRE(paths.size() == 1);
  CHECK(to_string(paths.begin()->first) == "X/VERB/root/^::Y/NOUN/dobj/>");
  PathCounts back = extract_paths(s, "mouse", "chase", 4);
  REQUIRE(back.size() == 1);
  CHECK(to_string(back.begin()->first) == "X/NOUN/dobj/<::Y/VERB/root/^");
}

TEST_CASE("every occurrence pair contributes a path") {
  // cat and cat both nsubj-like children of see, one mouse
  const char* text =
      "1\tcat\tcat\tNOUN\t_\t_\t2\tnsubj\n"
      "2\tsee\tsee\tVERB\t_\t_\t0\troot\n"
      "3\tmouse\tmouse\tNOUN\t_\t_\t2\tobj\n"
      "4\tcat\tcat\tNOUN\t_\t_\t3\tnmod\n";
  const SentenceGraph s = parse(text)[0];
  PathCounts paths = extract_paths(s, "cat", "mouse");
  long long total = 0;
  for (const auto& [p, c] : paths) total += c;
  CHECK(total == 2);
  CHECK(paths.size() == 2);
}

TEST_CASE("path text form round-trips with escapes") {
  DependencyPath p;
  p.edges.push_back({"X", "NOUN", "nmod:poss", Direction::up});
  p.edges.push_back({"a/b%c", "PUNCT", "punct", Direction::root});
  p.edges.push_back({"tab\there", "X", "dep", Direction::down});
  p.edges.push_back({"Y", "NOUN", "obj", Direction::down});
  const std::string text = to_string(p);
  CHECK(text.find("nmod%3Aposs") != std::string::npos);
  CHECK(path_from_string(text) == p);
  CHECK(to_string(path_from_string(kExpectedPath)) == kExpectedPath);
  CHECK_THROWS_AS(path_from_string("X/NOUN/nsubj"), DataError);
  CHECK_THROWS_AS(path_from_string("X/NOUN/nsubj/?"), DataError);
}

TEST_CASE("random path text round-trip") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    DependencyPath p = lexrel::testing::random_path(rng, 1 + static_cast<int>(uniform_index(rng, 4)));
    CHECK(path_from_string(to_string(p)) == p);
  }
}

TEST_CASE("extract_paths matches the BFS oracle and duality on random trees") {
  Rng rng(3);
  const char* words[] = {"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    SentenceGraph s = lexrel::testing::random_tree(rng, 1 + static_cast<int>(uniform_index(rng, 10)));
    validate(s);
    const std::string x = words[uniform_index(rng, 4)];
    const std::string y = words[uniform_index(rng, 4)];
    const int max_edges = 1 + static_cast<int>(uniform_index(rng, 6));
    PathCounts got = extract_paths(s, x, y, max_edges);
    REQUIRE(got == lexrel::testing::bfs_paths(s, x, y, max_edges));
    PathCounts dual;
    for (const auto& [p, c] : extract_paths(s, y, x, max_edges)) dual[reversed(p)] += c;
    REQUIRE(dual == got);
    for (const auto& [p, c] : got) {
      CHECK(static_cast<int>(p.tree_edges()) <= max_edges);
      CHECK(p.edges.front().lemma == "X");
      CHECK(p.edges.back().lemma == "Y");
    }
  }
}

TEST_CASE("build_path_index counts and permutation invariance") {
  auto one = parse(kCatChase);
  std::vector<SentenceGraph> corpus{one[0], one[0]};
  PathIndex index = build_path_index(corpus, {{"cat", "mouse"}, {"cat", "tree"}});
  const PathCounts& paths = index.paths("cat", "mouse");
  REQUIRE(paths.size() == 1);
  CHECK(paths.begin()->second == 2);
  CHECK(index.total_count("cat", "mouse") == 2);
  CHECK(index.distinct_count("cat", "mouse") == 1);
  CHECK(index.paths("cat", "tree").empty());
  CHECK(index.paths("CAT", "MOUSE").size() == 1);

  Rng rng(5);
  std::vector<SentenceGraph> trees;
  for (int i = 0; i < 60; ++i) trees.push_back(lexrel::testing::random_tree(rng, 8));
  std::vector<TermPair> pairs{{"a", "b"}, {"b", "a"}, {"c", "d"}, {"a", "a"}};
  PathIndex forward = build_path_index(trees, pairs);
  std::reverse(trees.begin(), trees.end());
  CHECK(build_path_index(trees, pairs) == forward);
  shuffle(trees, rng);
  CHECK(build_path_index(trees, pairs) == forward);
  CHECK(build_path_index_serial(trees, pairs) == forward);
}

TEST_CASE("path index TSV round-trip") {
  Rng rng(9);
  std::vector<SentenceGraph> trees;
  for (int i = 0; i < 40; ++i) trees.push_back(lexrel::testing::random_tree(rng, 9));
  PathIndex index = build_path_index(trees, {{"a", "b"}, {"c", "d"}});
  std::ostringstream out;
  write_path_index(out, index);
  std::istringstream in(out.str());
  CHECK(read_path_index(in) == index);

  std::istringstream bad("a\tb\tX/N/nsubj/<::Y/N/obj/^\tmany\n");
  CHECK_THROWS_AS(read_path_index(bad), DataError);
}
