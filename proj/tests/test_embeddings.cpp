#include <doctest.h>

#include <sstream>

#include "lexrel/embeddings.hpp"
#include "lexrel/error.hpp"

using namespace lexrel;

namespace {

EmbeddingTable load(const std::string& text) {
  std::istringstream in(text);
  return EmbeddingTable::load(in);
}

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("load and lookup") {
  EmbeddingTable t = load("cat 1.0 0.0\ndog 0.0 1.0\n");
  CHECK(t.dimension() == 2);
  CHECK(t.size() == 2);
  CHECK(vec(t.lookup("cat")) == std::vector<double>{1.0, 0.0});
  CHECK(vec(t.lookup("CAT")) == std::vector<double>{1.0, 0.0});
  CHECK(vec(t.lookup("zebra")) == std::vector<double>{0.0, 0.0});
  CHECK(t.contains("Dog"));
  CHECK_FALSE(t.contains("zebra"));
}

TEST_CASE("unknown row") {
  EmbeddingTable t = load("cat 1 0\n<unk> 0.5 0.5\n");
  CHECK(vec(t.unk_vector()) == std::vector<double>{0.5, 0.5});
  CHECK(vec(t.lookup("zebra")) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("load errors") {
  try {
    load("cat 1.0 0.0\ndog 0.0 1.0 2.0\n");
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "dimension mismatch at line 2");
  }
  CHECK_THROWS_AS(load("cat 1.0 abc\n"), DataError);
  CHECK_THROWS_AS(load("cat 1 0\ncat 0 1\n"), DataError);
  CHECK_THROWS_AS(load(""), DataError);
}

TEST_CASE("loaded floats are reproduced exactly") {
  const std::string text = "a 0.1 -2.5e-3 3.14159265358979\nb 1e300 -0 7\n";
  EmbeddingTable t = load(text);
  CHECK(vec(t.lookup("a")) == std::vector<double>{0.1, -2.5e-3, 3.14159265358979});
  CHECK(vec(t.lookup("b")) == std::vector<double>{1e300, -0.0, 7.0});
  std::ostringstream out;
  t.write(out);
  EmbeddingTable again = load(out.str());
  for (const std::string& w : t.tokens()) CHECK(vec(again.lookup(w)) == vec(t.lookup(w)));
  for (const char* w : {"a", "b", "zzz"}) CHECK(t.lookup(w).size() == t.dimension());
}
