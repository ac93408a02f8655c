#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "ddparse/errors.h"
#include "ddparse/treebank.h"
#include "doctest.h"
#include "test_util.h"

namespace ddparse {
namespace {

using testing::FixtureDir;
using testing::TreeFromArcs;
using Kind = Violation::Kind;

std::string ReadBytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("load_corpus reads a fixture document") {
  const auto corpus = LoadCorpus(FixtureDir() / "treebank");
  REQUIRE(corpus.size() == 1);
  const DiscourseTree& t = corpus[0];
  CHECK(t.doc_id == "doc3");
  CHECK(t.size() == 3);
  CHECK(t.edus[0].is_root());
  CHECK(t.edus[0].text.empty());
  CHECK(t.arcs.size() == 3);
  CHECK(t.Heads() == std::vector<int>{kNoHead, 2, 0, 2});
  CHECK(t.edus[2].ends_with_period);
  CHECK(t.edus[3].sentence_index == 2);
}

TEST_CASE("an EDU headed by itself is rejected as a cycle") {
  try {
    LoadCorpus(FixtureDir() / "bad" / "self_head.json");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.doc_id() == "self_head");
    CHECK(e.rule() == "cycle(2)");
  }
}

TEST_CASE("malformed records raise ParseError") {
  CHECK_THROWS_AS(ReadDocument("{not json", "x.json"), ParseError);
  CHECK_THROWS_AS(ReadDocument(R"({"doc_id": "a"})", "x.json"), ParseError);
  CHECK_THROWS_AS(ReadDocument(R"({"doc_id": "a", "edus": [{"id": 1}]})", "x.json"),
                  ParseError);
  CHECK_THROWS_AS(ReadDocument(R"({"doc_id": 3, "edus": []})", "x.json"), ParseError);
}

TEST_CASE("structural rules raise ValidationError") {
  auto record = [](const std::string& edus) {
    return R"({"doc_id": "d", "edus": [)" + edus + "]}";
  };
  auto edu = [](int id, int parent, const std::string& rel, int sentence = 1) {
    return R"({"id": )" + std::to_string(id) + R"(, "text": "t", "parent": )" +
           std::to_string(parent) + R"(, "relation": ")" + rel + R"(", "sentence": )" +
           std::to_string(sentence) + R"(, "ends_with_period": false})";
  };
  auto rule_of = [&](const std::string& json) {
    try {
      ReadDocument(json, "x");
    } catch (const ValidationError& e) {
      return e.rule();
    }
    return std::string("none");
  };
  CHECK(rule_of(record("")) == "empty-document");
  CHECK(rule_of(record(edu(2, 0, "ROOT"))) == "non-consecutive-ids");
  CHECK(rule_of(record(edu(1, 0, "ROOT") + "," + edu(2, -1, ""))) == "partial-annotation");
  CHECK(rule_of(record(edu(1, 0, "bogus"))) == "unknown-relation(bogus)");
  CHECK(rule_of(record(edu(1, 0, "joint"))) == "root-relation(1)");
  CHECK(rule_of(record(edu(1, 0, "ROOT", 2) + "," + edu(2, 1, "joint", 1))) ==
        "sentence-order");
  CHECK(rule_of(record(edu(1, 5, "joint"))) == "unknown-id(5)");
  // fully unannotated documents are fine
  CHECK(rule_of(record(edu(1, -1, "") + "," + edu(2, -1, ""))) == "none");
}

TEST_CASE("validate_tree") {
  SUBCASE("valid three-EDU tree") {
    CHECK(ValidateTree(TreeFromArcs(3, {{0, 2}, {2, 1}, {2, 3}})).empty());
  }
  SUBCASE("two heads for one EDU") {
    const auto v = ValidateTree(TreeFromArcs(2, {{0, 1}, {1, 2}, {2, 1}}));
    CHECK(v == std::vector<Violation>{{Kind::kMultipleHeads, 1}});
  }
  SUBCASE("missing EDU") {
    const auto v = ValidateTree(TreeFromArcs(3, {{0, 2}, {2, 1}}));
    CHECK(v == std::vector<Violation>{{Kind::kHeadless, 3}});
  }
  SUBCASE("cycle and the EDU hanging off it") {
    const auto v = ValidateTree(TreeFromArcs(4, {{0, 1}, {3, 2}, {2, 3}, {3, 4}}));
    CHECK(v == std::vector<Violation>{{Kind::kCycle, 2}, {Kind::kCycle, 3},
                                      {Kind::kDisconnected, 4}});
  }
  SUBCASE("root as dependent") {
    const auto v = ValidateTree(TreeFromArcs(1, {{0, 1}, {1, 0}}));
    CHECK(v == std::vector<Violation>{{Kind::kRootDependent, 0}});
  }
  SUBCASE("self loop") {
    const auto v = ValidateTree(TreeFromArcs(2, {{0, 1}, {2, 2}}));
    CHECK(v == std::vector<Violation>{{Kind::kCycle, 2}});
  }
}

TEST_CASE("is_projective examples") {
  CHECK(IsProjective(TreeFromArcs(3, {{0, 2}, {2, 1}, {2, 3}})));
  CHECK(IsProjective(TreeFromArcs(3, {{0, 1}, {1, 3}, {3, 2}})));
  CHECK_FALSE(IsProjective(TreeFromArcs(4, {{0, 2}, {2, 4}, {4, 1}, {1, 3}})));
  // two root dependents never cross each other
  CHECK(IsProjective(TreeFromArcs(3, {{0, 3}, {0, 1}, {1, 2}})));
}

TEST_CASE("is_projective agrees with the pairwise crossing test on random trees") {
  std::mt19937_64 rng(7);
  int non_projective = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 10);
    const auto heads = testing::RandomHeads(rng, k);
    const auto tree = testing::TreeFromHeads(heads);
    REQUIRE(ValidateTree(tree).empty());
    const bool expected = testing::PairwiseCrossingFree(heads);
    CHECK(IsProjective(tree) == expected);
    non_projective += !expected;
  }
  CHECK(non_projective > 50);  // the generator does produce crossing trees
}

TEST_CASE("one arc per real EDU in every valid tree") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 15);
    const auto tree = testing::TreeFromHeads(testing::RandomHeads(rng, k));
    CHECK(static_cast<int>(tree.arcs.size()) == tree.size());
  }
}

TEST_CASE("canonical files round-trip byte for byte") {
  const auto file = FixtureDir() / "treebank" / "doc3.json";
  const auto tree = LoadDocument(file);
  CHECK(WriteDocument(tree) == ReadBytes(file));

  const auto dir = testing::TempDir("roundtrip");
  SaveCorpus({tree}, dir);
  CHECK(ReadBytes(dir / "doc3.json") == ReadBytes(file));
  CHECK(LoadCorpus(dir).front() == tree);
}

TEST_CASE("unannotated documents round-trip with parent -1") {
  DiscourseTree doc = MakeDocument("zh", {{0, "该文提出一种方法，", 1, false},
                                          {0, "实验表明", 2, false}});
  const auto text = WriteDocument(doc);
  CHECK(text.find("\"parent\": -1") != std::string::npos);
  CHECK(text.find("该文提出一种方法") != std::string::npos);  // raw UTF-8, not \u escapes
  const auto back = ReadDocument(text, "mem");
  CHECK(back == doc);
  CHECK_FALSE(back.annotated());
}

TEST_CASE("corpus order is lexicographic by filename") {
  const auto dir = testing::TempDir("order");
  for (const char* id : {"b", "a10", "a2"}) {
    DiscourseTree t = testing::TreeFromArcs(1, {{0, 1}});
    t.doc_id = id;
    SaveDocument(t, dir / (std::string(id) + ".json"));
  }
  std::ofstream(dir / "notes.txt") << "ignored";
  const auto corpus = LoadCorpus(dir);
  REQUIRE(corpus.size() == 3);
  CHECK(corpus[0].doc_id == "a10");
  CHECK(corpus[1].doc_id == "a2");
  CHECK(corpus[2].doc_id == "b");
}

TEST_CASE("corpus_stats") {
  SUBCASE("single one-EDU document") {
    const auto s = ComputeCorpusStats({testing::TreeFromArcs(1, {{0, 1}})});
    CHECK(s.n_docs == 1);
    CHECK(s.n_edus == 2);
    CHECK(s.n_relations == 1);
    CHECK(s.avg_edus_per_doc == doctest::Approx(1.0));
  }
  SUBCASE("average over documents of 2 and 4 EDUs") {
    const auto s = ComputeCorpusStats({testing::TreeFromArcs(2, {{0, 1}, {1, 2}}),
                                       testing::TreeFromArcs(4, {{0, 1}, {1, 2}, {1, 3}, {1, 4}})});
    CHECK(s.avg_edus_per_doc == doctest::Approx(3.0));
    CHECK(s.n_relations == s.n_edus - s.n_docs);
    REQUIRE(s.relation_freq.size() == 2);
    CHECK(s.relation_freq[0].relation == "elab-addition");
    CHECK(s.relation_freq[0].count == 4);
    CHECK(s.relation_freq[0].percentage == doctest::Approx(400.0 / 6));
  }
  SUBCASE("characters are code points without padding") {
    DiscourseTree doc = MakeDocument("zh", {{0, "  该文提出，", 1, false}, {0, "ab c ", 1, true}});
    doc.arcs = {{0, 1, "ROOT"}, {1, 2, "joint"}};
    const auto s = ComputeCorpusStats({doc});
    CHECK(s.avg_chars_per_edu == doctest::Approx((5.0 + 4.0) / 2));
    CHECK(s.avg_edus_per_sentence == doctest::Approx(2.0));
  }
  SUBCASE("empty corpus") { CHECK_THROWS_AS(ComputeCorpusStats({}), EmptyCorpus); }
}

TEST_CASE("relation percentages sum to 100") {
  std::mt19937_64 rng(3);
  std::vector<DiscourseTree> corpus;
  for (int i = 0; i < 40; ++i) {
    const int k = 1 + static_cast<int>(rng() % 12);
    DiscourseTree t = testing::TreeFromHeads(testing::RandomHeads(rng, k));
    for (Arc& a : t.arcs) {
      if (a.head != 0) a.relation = testing::RandomRelation(rng);
    }
    corpus.push_back(t);
  }
  const auto s = ComputeCorpusStats(corpus);
  double total = 0;
  long count = 0;
  for (const auto& r : s.relation_freq) {
    total += r.percentage;
    count += r.count;
  }
  CHECK(total == doctest::Approx(100.0).epsilon(1e-4));
  CHECK(count == s.n_relations);
  for (std::size_t i = 1; i < s.relation_freq.size(); ++i) {
    CHECK(s.relation_freq[i - 1].count >= s.relation_freq[i].count);
  }
}

}  // namespace
}  // namespace ddparse
