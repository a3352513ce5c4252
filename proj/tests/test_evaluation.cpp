#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "lexrel/error.hpp"
#include "lexrel/evaluation.hpp"
#include "lexrel/synthetic.hpp"

using namespace lexrel;

namespace {

ConfusionMatrix fixture() {
  // (A,A) x3, (A,B) x1, (B,B) x2
  return confusion({"A", "A", "A", "A", "B", "B"}, {"A", "A", "A", "B", "B", "B"}, {"A", "B"});
}

std::set<std::string> x_words(const std::vector<PairRecord>& rs) {
  std::set<std::string> out;
  for (const auto& r : rs) out.insert(r.x);
  return out;
}

}  // namespace

TEST_CASE("confusion counts") {
  ConfusionMatrix m = fixture();
  CHECK(m.labels == std::vector<std::string>{"A", "B"});
  CHECK(m.counts == std::vector<std::vector<long long>>{{3, 1}, {0, 2}});
  CHECK(m.total() == 6);
  CHECK(m.row_sum(0) == 4);
  CHECK(m.col_sum(1) == 3);

  ConfusionMatrix diag = confusion({"HYPER", "HYPER"}, {"HYPER", "HYPER"});
  CHECK(diag.labels == std::vector<std::string>{"HYPER"});
  CHECK(diag.counts == std::vector<std::vector<long long>>{{2}});

  CHECK_THROWS_AS(confusion({"A"}, {"A", "B"}), DataError);
  ConfusionMatrix appended = confusion({"A", "Z"}, {"Q", "A"}, {"A"});
  CHECK(appended.labels == std::vector<std::string>{"A", "Q", "Z"});
}

TEST_CASE("row and column sums equal label counts") {
  std::vector<std::string> gold{"ANT", "SYN", "SYN", "RANDOM", "HYPER", "ANT", "RANDOM"};
  std::vector<std::string> pred{"SYN", "SYN", "ANT", "RANDOM", "RANDOM", "ANT", "HYPER"};
  ConfusionMatrix m = confusion(gold, pred, labels::relation_labels());
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    CHECK(m.row_sum(i) == std::count(gold.begin(), gold.end(), m.labels[i]));
    CHECK(m.col_sum(i) == std::count(pred.begin(), pred.end(), m.labels[i]));
  }
  for (const auto& row : m.row_percentages()) {
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    CHECK((s == doctest::Approx(100.0) || s == 0.0));
  }
}

TEST_CASE("published-style row percentages sum to about 100") {
  const std::vector<double> ant_row{40.28, 30.28, 5.56, 5.83, 18.06};
  CHECK(std::accumulate(ant_row.begin(), ant_row.end(), 0.0) == doctest::Approx(100.0).epsilon(1e-3));
}

TEST_CASE("hand-computed scores") {
  ScoreReport r = scores(fixture(), std::nullopt, Averaging::macro);
  REQUIRE(r.per_label.size() == 2);
  CHECK(r.per_label[0].precision == 1.0);
  CHECK(r.per_label[0].recall == 0.75);
  CHECK(r.per_label[0].f1 == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(r.per_label[1].precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.per_label[1].recall == 1.0);
  CHECK(r.per_label[1].f1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(std::abs(r.f1 - 0.8286) < 1e-4);
  CHECK(r.f1 == doctest::Approx((6.0 / 7.0 + 0.8) / 2).epsilon(1e-15));

  ScoreReport w = scores(fixture(), std::nullopt, Averaging::weighted);
  CHECK(w.f1 == doctest::Approx((4 * 6.0 / 7.0 + 2 * 0.8) / 6).epsilon(1e-15));
}

TEST_CASE("majority baseline scores all zero") {
  std::vector<std::string> gold{"ANT", "HYPER", "RANDOM", "RANDOM", "SYN", "PART_OF"};
  std::vector<std::string> pred(gold.size(), "RANDOM");
  for (Averaging mode : {Averaging::weighted, Averaging::macro}) {
    ScoreReport r = scores(confusion(gold, pred, labels::relation_labels()), labels::kRandom, mode);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);
  }
}

TEST_CASE("perfect predictions score one") {
  std::vector<std::string> gold{"ANT", "HYPER", "RANDOM", "SYN", "PART_OF", "HYPER"};
  ScoreReport r = scores(confusion(gold, gold, labels::relation_labels()), labels::kRandom);
  for (const auto& s : r.per_label) CHECK(s.f1 == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.precision == 1.0);

  // PART_OF never occurs here; it must not drag the macro mean down.
  std::vector<std::string> partial{"ANT", "HYPER", "RANDOM", "SYN"};
  ScoreReport macro = scores(confusion(partial, partial, labels::relation_labels()), labels::kRandom, Averaging::macro);
  CHECK(macro.f1 == 1.0);
}

TEST_CASE("excluded label only matters through false positives and negatives") {
  std::vector<std::string> gold{"ANT", "ANT", "HYPER", "RANDOM", "RANDOM"};
  std::vector<std::string> pred{"ANT", "HYPER", "HYPER", "RANDOM", "ANT"};
  ScoreReport excl = scores(confusion(gold, pred, labels::relation_labels()), labels::kRandom);
  // Extra, well-predicted RANDOM pairs leave the excluding average unchanged
  // and push the including average up.
  std::vector<std::string> gold2 = gold, pred2 = pred;
  for (int i = 0; i < 20; ++i) {
    gold2.push_back("RANDOM");
    pred2.push_back("RANDOM");
  }
  ScoreReport excl2 = scores(confusion(gold2, pred2, labels::relation_labels()), labels::kRandom);
  ScoreReport incl = scores(confusion(gold, pred, labels::relation_labels()));
  ScoreReport incl2 = scores(confusion(gold2, pred2, labels::relation_labels()));
  CHECK(excl2.f1 == excl.f1);
  CHECK(excl2.recall == excl.recall);
  CHECK(incl2.f1 > incl.f1);
  CHECK(incl2.f1 > excl2.f1);
}

TEST_CASE("report writers") {
  ScoreReport r = scores(fixture(), std::string("B"), Averaging::weighted);
  std::ostringstream tsv;
  write_report_tsv(tsv, r);
  CHECK(tsv.str().rfind("label\tprecision\trecall\tf1\tsupport\n", 0) == 0);
  CHECK(tsv.str().find("average(weighted,excluding B)") != std::string::npos);

  std::ostringstream table;
  write_report_table(table, "integrated", r);
  CHECK(table.str().find("| Method") != std::string::npos);
  CHECK(table.str().find("| integrated") != std::string::npos);
  CHECK(table.str().find("0.857") != std::string::npos);

  std::ostringstream conf;
  write_confusion_tsv(conf, fixture(), true);
  CHECK(conf.str().find("75.00\t25.00") != std::string::npos);
}

TEST_CASE("lexical split keeps x words apart") {
  std::vector<PairRecord> tiny{{"a", "x", "SYN"}, {"a", "y", "ANT"}, {"b", "x", "SYN"}, {"b", "z", "HYPER"}};
  auto [train, val] = lexical_split(tiny, 0.5, 1);
  CHECK(x_words(train).size() == 1);
  CHECK(x_words(val).size() == 1);
  CHECK(train.size() == 2);
  CHECK(val.size() == 2);

  SyntheticConfig cfg;
  cfg.topics = 20;
  cfg.related_pairs_per_topic = 10;
  cfg.sentences = 0;
  auto data = generate_synthetic(cfg).relations;
  REQUIRE(data.size() == 500);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto [tr, va] = lexical_split(data, 0.2, seed);
    CHECK(tr.size() + va.size() == data.size());
    std::set<std::string> shared;
    auto a = x_words(tr), b = x_words(va);
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(shared, shared.end()));
    CHECK(shared.empty());
    CHECK(!va.empty());
  }
  auto [t1, v1] = lexical_split(data, 0.3, 42);
  auto [t2, v2] = lexical_split(data, 0.3, 42);
  CHECK(t1 == t2);
  CHECK(v1 == v2);
  CHECK_THROWS_AS(lexical_split(data, 1.5, 1), ContractError);
}
