#include <atomic>
#include <cstdlib>
#include <fstream>
#include <random>
#include <thread>

#include "ddparse/errors.h"
#include "ddparse/pipeline.h"
#include "ddparse/translation.h"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "test_util.h"

namespace ddparse {
namespace {

DiscourseTree Doc(const std::vector<std::string>& texts, const std::vector<int>& sentences,
                  const std::vector<bool>& periods = {}) {
  std::vector<Edu> real;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Edu e;
    e.text = texts[i];
    e.sentence_index = sentences[i];
    e.ends_with_period = periods.empty() ? false : periods[i];
    real.push_back(e);
  }
  return MakeDocument("d", std::move(real));
}

std::vector<Edu> Edus(const std::vector<std::string>& texts, const std::vector<int>& sentences,
                      const std::vector<bool>& periods = {}) {
  return Doc(texts, sentences, periods).edus;
}

std::vector<std::string> Texts(const std::vector<Edu>& edus) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < edus.size(); ++i) out.push_back(edus[i].text);
  return out;
}

ParserModel ZeroModel() {
  ParserModel m;
  m.action_model = LinearModel({"SHIFT", "LEFT_ARC", "RIGHT_ARC"});
  m.relation_model = LinearModel({"elab-addition", "ROOT"});
  return m;
}

class CountingAdapter : public TranslationAdapter {
 public:
  std::string Translate(const std::string& text, const std::string&,
                        const std::string&) override {
    ++calls;
    return "en:" + text;
  }
  std::atomic<int> calls{0};
};

TEST_CASE("translate_edus keeps ids and sentence structure") {
  const auto doc = Doc({"实验表明", "该方法有效。"}, {1, 1}, {false, true});
  DictionaryAdapter dict({{"实验表明", "Experiments show that"}, {"该方法有效。", "it works."}});
  const auto en = TranslateEdus(doc, dict);
  REQUIRE(en.size() == 3);
  CHECK(en[0].is_root());
  CHECK(en[1].text == "Experiments show that");
  CHECK(en[2].id == 2);
  CHECK(en[2].sentence_index == 1);
  CHECK(en[2].ends_with_period);

  IdentityAdapter identity;
  CHECK(Texts(TranslateEdus(doc, identity)) == Texts(doc.edus));
}

TEST_CASE("adapter failures name the EDU") {
  const auto doc = Doc({"一", "二"}, {1, 1});
  DictionaryAdapter missing(std::map<std::string, std::string>{{"一", "one"}});
  try {
    TranslateEdus(doc, missing);
    FAIL("expected AdapterError");
  } catch (const AdapterError& e) {
    CHECK(e.edu_id() == 2);
  }
  DictionaryAdapter blank({{"一", "one"}, {"二", "  "}});
  CHECK_THROWS_AS(TranslateEdus(doc, blank), AdapterError);
}

TEST_CASE("punctuation adjustment") {
  const auto source = Edus({"a", "b", "c", "d", "e"}, {1, 1, 2, 2, 2},
                           {false, true, false, false, false});
  auto english = Edus({"We propose a method.", "It works.", "e.g. this holds.",
                       "Results improve. We then test", "see Fig. 2 etc. and more"},
                      {1, 1, 2, 2, 2});
  const auto fixed = AdjustPunctuation(english, source);
  CHECK(Texts(fixed) == std::vector<std::string>{"We propose a method,", "It works.",
                                                 "e.g. this holds,",
                                                 "Results improve, We then test",
                                                 "see Fig. 2 etc. and more"});
  CHECK(Texts(AdjustPunctuation(fixed, source)) == Texts(fixed));

  english.pop_back();
  CHECK_THROWS_AS(AdjustPunctuation(english, source), AlignmentError);
}

TEST_CASE("relative pronoun adjustment") {
  SUBCASE("moves to the next EDU") {
    const auto out = AdjustRelativePronouns(
        Edus({"we design a model that", "captures long-range structure"}, {1, 1}));
    CHECK(Texts(out) == std::vector<std::string>{"we design a model",
                                                 "that captures long-range structure"});
  }
  SUBCASE("keeps trailing punctuation in place") {
    const auto out = AdjustRelativePronouns(Edus({"a tool which,", "is fast"}, {1, 1}));
    CHECK(Texts(out) == std::vector<std::string>{"a tool,", "which is fast"});
  }
  SUBCASE("an EDU holding only the pronoun is emptied") {
    const auto out = AdjustRelativePronouns(Edus({"results", "That", "hold"}, {1, 1, 1}));
    CHECK(Texts(out) == std::vector<std::string>{"results", "<EMPTY>", "That hold"});
  }
  SUBCASE("never crosses a sentence boundary") {
    const auto in = Edus({"we know that", "it works"}, {1, 2});
    CHECK(Texts(AdjustRelativePronouns(in)) == Texts(in));
  }
  SUBCASE("other words stay") {
    const auto in = Edus({"this is what", "we want"}, {1, 1});
    CHECK(Texts(AdjustRelativePronouns(in)) == Texts(in));
  }
  SUBCASE("idempotent on random input") {
    const std::vector<std::string> vocab = {"that", "which", "model", "data", "when",
                                            "works,", "who", "the", "."};
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
      const int k = 1 + static_cast<int>(rng() % 6);
      std::vector<std::string> texts;
      std::vector<int> sentences;
      int s = 1;
      for (int i = 0; i < k; ++i) {
        std::string t;
        const int words = 1 + static_cast<int>(rng() % 3);
        for (int w = 0; w < words; ++w) t += (w ? " " : "") + vocab[rng() % vocab.size()];
        texts.push_back(t);
        if (rng() % 3 == 0) ++s;
        sentences.push_back(s);
      }
      const auto once = AdjustRelativePronouns(Edus(texts, sentences));
      CHECK(Texts(AdjustRelativePronouns(once)) == Texts(once));
    }
  }
}

TEST_CASE("topic sentence detection") {
  auto doc = Doc({"我们提出", "本文方法", "本文提出", "一种方法"}, {1, 1, 2, 2});
  CHECK(DetectTopicSentence(doc) == 2);
  doc.edus[3].text = "我们还";
  CHECK_FALSE(DetectTopicSentence(doc).has_value());
  CHECK(DetectTopicSentence(doc, {"我们"}) == 1);
  CHECK_FALSE(DetectTopicSentence(doc, {}).has_value());
}

TEST_CASE("two-part parsing") {
  const auto doc = Doc({"a", "b", "c", "d", "e", "f"}, {1, 1, 2, 3, 3, 4});
  // A zero model shifts everything, then reduces right to left. Part A
  // {1,2,3} hangs off 3; in part B the anchor blocks 6 from taking 4.
  const auto tree = TwoPartParse(doc, 3, ZeroModel());
  CHECK(tree.Heads() == std::vector<int>{kNoHead, 3, 3, 4, 0, 6, 4});
  CHECK(ValidateTree(tree).empty());

  CHECK(TwoPartParse(doc, 1, ZeroModel()) == ParseStructure(doc, ZeroModel()));
  CHECK(TwoPartParse(doc, 9, ZeroModel()) == ParseStructure(doc, ZeroModel()));
}

TEST_CASE("two-part parsing makes the topic EDU the only root dependent") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    ParserModel m = ZeroModel();
    for (std::size_t y = 0; y < 3; ++y) m.action_model.SetBias(y, (rng() % 100) / 10.0);
    const int k = 2 + static_cast<int>(rng() % 15);
    std::vector<std::string> texts;
    std::vector<int> sentences;
    int s = 1;
    for (int i = 0; i < k; ++i) {
      texts.push_back("w" + std::to_string(i));
      if (i > 0 && rng() % 2) ++s;
      sentences.push_back(s);
    }
    const auto doc = Doc(texts, sentences);
    const int split_sentence = 1 + static_cast<int>(rng() % s);
    const auto tree = TwoPartParse(doc, split_sentence, m);
    REQUIRE(ValidateTree(tree).empty());
    int first = 1;
    while (doc.edus[first].sentence_index != split_sentence) ++first;
    if (first > 1) CHECK(tree.RootDependents() == std::vector<int>{first});
  }
}

TEST_CASE("pipeline output") {
  const auto doc = Doc({"背景", "本文提出", "一种方法", "实验表明", "效果好"}, {1, 2, 2, 3, 3},
                       {true, false, true, false, true});
  IdentityAdapter identity;

  PipelineConfig off;
  off.punct_fix = off.pronoun_fix = off.two_part = false;
  CHECK(RunPipeline(doc, off, ZeroModel(), identity) == Parse(doc, ZeroModel()));

  const auto result = RunPipelineDetailed(doc, PipelineConfig{}, ZeroModel(), identity);
  CHECK(result.topic_sentence == 2);
  CHECK(ValidateTree(result.tree).empty());
  CHECK(result.tree.RootDependents() == std::vector<int>{2});
  CHECK(Texts(result.tree.edus) == Texts(doc.edus));
  CHECK(result.english.arcs == result.tree.arcs);
  for (const Arc& a : result.tree.arcs) CHECK(a.relation == (a.head == 0 ? "ROOT" : "elab-addition"));
}

TEST_CASE("pair file escaping") {
  for (const std::string s : {"", "plain", "tab\there", "new\nline\r", "back\\slash\\t"}) {
    CHECK(UnescapeField(EscapeField(s)) == s);
    CHECK(EscapeField(s).find('\t') == std::string::npos);
  }
  const auto dir = testing::TempDir("pairs");
  std::ofstream(dir / "bad.tsv") << "no tab here\n";
  CHECK_THROWS_AS(ReadPairFile(dir / "bad.tsv"), TranslationError);
  CHECK_THROWS_AS(ReadPairFile(dir / "missing.tsv"), TranslationError);
}

TEST_CASE("caching adapter") {
  const auto dir = testing::TempDir("cache");
  const auto path = dir / "cache.tsv";
  auto inner = std::make_shared<CountingAdapter>();
  {
    CachingAdapter cache(inner, path);
    CHECK(cache.Translate("一\t二", "zh", "en") == "en:一\t二");
    CHECK(cache.Translate("一\t二", "zh", "en") == "en:一\t二");
    CHECK(cache.Translate("三\n", "zh", "en") == "en:三\n");
    CHECK(inner->calls == 2);
    CHECK(cache.cached() == 2);
  }
  CachingAdapter reopened(inner, path);
  CHECK(reopened.cached() == 2);
  CHECK(reopened.Translate("三\n", "zh", "en") == "en:三\n");
  CHECK(inner->calls == 2);

  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&reopened, t] {
      for (int i = 0; i < 50; ++i) reopened.Translate("s" + std::to_string((i + t) % 20), "zh", "en");
    });
  }
  for (auto& t : threads) t.join();
  CHECK(CachingAdapter(inner, path).cached() == 22);
}

TEST_CASE("http adapter") {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::atomic<int> failures_left{2};
  std::string seen_auth;
  server.Post("/translate", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    seen_auth = req.get_header_value("Authorization");
    const auto body = nlohmann::json::parse(req.body);
    if (body["text"] == "bad") {
      res.status = 400;
      return;
    }
    if (failures_left-- > 0) {
      res.status = 503;
      return;
    }
    nlohmann::json out = {{"translation", "[" + body["source"].get<std::string>() + ">" +
                                              body["target"].get<std::string>() + "] " +
                                              body["text"].get<std::string>()}};
    res.set_content(out.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("DDPARSE_TEST_KEY", "secret", 1);
  HttpAdapterConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  cfg.api_key_env = "DDPARSE_TEST_KEY";
  cfg.backoff = std::chrono::milliseconds(1);
  cfg.timeout = std::chrono::seconds(5);
  HttpAdapter adapter(cfg);

  CHECK(adapter.Translate("你好", "zh", "en") == "[zh>en] 你好");
  CHECK(hits == 3);
  CHECK(seen_auth == "Bearer secret");

  hits = 0;
  CHECK_THROWS_AS(adapter.Translate("bad", "zh", "en"), TranslationError);
  CHECK(hits == 1);

  hits = 0;
  failures_left = 10;
  CHECK_THROWS_AS(adapter.Translate("x", "zh", "en"), TranslationError);
  CHECK(hits == cfg.retries + 1);

  server.stop();
  runner.join();

  HttpAdapterConfig dead = cfg;
  dead.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  dead.retries = 1;
  CHECK_THROWS_AS(HttpAdapter(dead).Translate("x", "zh", "en"), TranslationError);
}

}  // namespace
}  // namespace ddparse
