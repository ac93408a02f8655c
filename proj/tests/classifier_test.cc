#include <cmath>
#include <random>
#include <sstream>

#include "ddparse/classifier.h"
#include "ddparse/errors.h"
#include "ddparse/random.h"
#include "doctest.h"
#include "test_util.h"

namespace ddparse {
namespace {

FeatureVector Fv(std::initializer_list<std::pair<const char*, double>> entries) {
  FeatureVector fv;
  for (const auto& [n, v] : entries) fv.Add(n, v);
  return fv;
}

std::vector<LabeledExample> TwoClassSet() {
  return {{Fv({{"x", 1.0}}), "A"}, {Fv({{"neg", -1.0}}), "B"}};
}

std::string Serialized(const LinearModel& m) {
  std::ostringstream out;
  m.Save(out);
  return out.str();
}

// Dense averaged SGD written directly from the update rule; used to check
// the lazy implementation.
std::map<std::string, std::vector<double>> ReferenceTrain(
    const std::vector<LabeledExample>& data, const std::vector<std::string>& labels,
    const TrainConfig& cfg, std::vector<double>& avg_bias) {
  std::vector<std::string> names;
  for (const auto& ex : data) {
    for (const auto& [n, v] : ex.features.entries()) {
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    }
  }
  const std::size_t L = labels.size();
  std::map<std::string, std::vector<double>> w, sum;
  for (const auto& n : names) {
    w[n].assign(L, 0.0);
    sum[n].assign(L, 0.0);
  }
  std::vector<double> b(L, 0.0), bsum(L, 0.0);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  long steps = 0;
  for (int e = 0; e < cfg.epochs; ++e) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[UniformIndex(rng, i)]);
    const double lr = cfg.learning_rate / (1.0 + e);
    for (std::size_t idx : order) {
      const auto& ex = data[idx];
      const std::size_t gold = std::find(labels.begin(), labels.end(), ex.label) - labels.begin();
      std::vector<double> score = b;
      for (const auto& [n, v] : ex.features.entries()) {
        for (std::size_t y = 0; y < L; ++y) score[y] += w[n][y] * v;
      }
      for (auto& [n, row] : w) {
        for (std::size_t y = 0; y < L; ++y) row[y] *= 1.0 - lr * cfg.l2;
      }
      for (std::size_t y = 0; y < L; ++y) {
        const double t = y == gold ? 1.0 : -1.0;
        if (t * score[y] < 1.0) {
          b[y] += lr * t;
          for (const auto& [n, v] : ex.features.entries()) w[n][y] += lr * t * v;
        }
      }
      ++steps;
      for (auto& [n, row] : w) {
        for (std::size_t y = 0; y < L; ++y) sum[n][y] += row[y];
      }
      for (std::size_t y = 0; y < L; ++y) bsum[y] += b[y];
    }
  }
  for (auto& [n, row] : sum) {
    for (double& v : row) v /= steps;
  }
  avg_bias = bsum;
  for (double& v : avg_bias) v /= steps;
  return sum;
}

TEST_CASE("separable two-class set is learned") {
  const auto data = TwoClassSet();
  TrainConfig cfg;
  cfg.epochs = 10;
  const auto model = Train(data, cfg);
  for (const auto& ex : data) CHECK(model.Predict(ex.features) == ex.label);
}

TEST_CASE("training is deterministic for a fixed seed") {
  std::mt19937_64 rng(1);
  std::vector<LabeledExample> data;
  for (int i = 0; i < 100; ++i) {
    FeatureVector fv;
    for (int f = 0; f < 5; ++f) fv.Add("f" + std::to_string(rng() % 20), 1.0);
    data.push_back({fv, "L" + std::to_string(rng() % 3)});
  }
  TrainConfig cfg;
  CHECK(Serialized(Train(data, cfg)) == Serialized(Train(data, cfg)));
  TrainConfig other = cfg;
  other.seed = 43;
  CHECK(Serialized(Train(data, cfg)) != Serialized(Train(data, other)));
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(Train(std::vector<LabeledExample>{{Fv({{"x", 1}}), "A"}}, {}), DegenerateData);
  CHECK_THROWS_AS(Train(std::vector<LabeledExample>{{Fv({{"x", 1}}), "A"}, {FeatureVector{}, "B"}}, {}),
                  std::invalid_argument);
}

TEST_CASE("lazy averaged updates match a dense reference") {
  std::mt19937_64 rng(4);
  std::vector<LabeledExample> data;
  for (int i = 0; i < 60; ++i) {
    FeatureVector fv;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int f = 0; f < n; ++f) {
      fv.Add("f" + std::to_string(rng() % 12), 0.5 + static_cast<double>(rng() % 5) / 4);
    }
    data.push_back({fv, "L" + std::to_string(rng() % 3)});
  }
  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.l2 = 0.05;  // large enough for shrinkage to matter
  const std::vector<std::string> labels = {"L0", "L1", "L2"};
  const auto model = Train(data, cfg, labels);
  std::vector<double> ref_bias;
  const auto ref = ReferenceTrain(data, labels, cfg, ref_bias);
  for (std::size_t y = 0; y < 3; ++y) CHECK(model.bias()[y] == doctest::Approx(ref_bias[y]).epsilon(1e-10));
  for (const auto& [name, row] : ref) {
    for (std::size_t y = 0; y < 3; ++y) {
      CHECK(model.Weight(name, y) == doctest::Approx(row[y]).epsilon(1e-9));
    }
  }
}

TEST_CASE("predict and scores") {
  LinearModel zero({"A", "B", "C"});
  CHECK(zero.Scores(Fv({{"x", 1.0}})) == std::vector<double>{0, 0, 0});
  CHECK(zero.Predict(FeatureVector{}) == "A");

  LinearModel m({"A", "B", "C"});
  m.SetWeight("f", 0, 2.0);
  CHECK(m.Scores(Fv({{"f", 1.0}}))[0] == 2.0);
  m.SetBias(1, 0.5);
  m.SetBias(2, 0.5);
  CHECK(m.Predict(FeatureVector{}) == "B");  // bias tie goes to the lower index
  CHECK(m.Predict(Fv({{"unseen", 3.0}, {"other", 1.0}})) == "B");
  bool only_c[] = {false, false, true};
  CHECK(m.PredictIndex(Fv({{"f", 1.0}}), only_c) == 2);
}

TEST_CASE("argmax of scores equals predict") {
  std::mt19937_64 rng(2);
  std::vector<LabeledExample> data;
  for (int i = 0; i < 200; ++i) {
    FeatureVector fv;
    for (int f = 0; f < 4; ++f) fv.Add("f" + std::to_string(rng() % 30), 1.0);
    data.push_back({fv, "L" + std::to_string(rng() % 4)});
  }
  const auto model = Train(data, {});
  for (int i = 0; i < 1000; ++i) {
    FeatureVector fv;
    for (int f = 0; f < 5; ++f) {
      fv.Add("f" + std::to_string(rng() % 40), static_cast<double>(rng() % 7) - 3.0);
    }
    const auto s = model.Scores(fv);
    const auto best = std::max_element(s.begin(), s.end()) - s.begin();
    CHECK(model.Predict(fv) == model.labels()[best]);
  }
}

TEST_CASE("positive scaling preserves predictions when biases are equal") {
  std::mt19937_64 rng(8);
  LinearModel m({"A", "B", "C", "D"});
  for (int f = 0; f < 20; ++f) {
    for (std::size_t y = 0; y < 4; ++y) {
      m.SetWeight("f" + std::to_string(f), y, static_cast<double>(rng() % 200) / 50.0 - 2.0);
    }
  }
  for (std::size_t y = 0; y < 4; ++y) m.SetBias(y, 0.25);
  for (int i = 0; i < 500; ++i) {
    FeatureVector fv;
    for (int f = 0; f < 4; ++f) fv.Add("f" + std::to_string(rng() % 20), 1.0 + rng() % 3);
    const double c = 0.01 + static_cast<double>(rng() % 1000) / 10.0;
    CHECK(m.Predict(fv.Scaled(c)) == m.Predict(fv));
  }
}

TEST_CASE("averaged hinge loss does not increase across epochs on toy problems") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    std::vector<LabeledExample> data;
    for (int i = 0; i < 90; ++i) {
      const int y = i % 3;
      FeatureVector fv;
      fv.Add("c" + std::to_string(y), 1.0);
      fv.Add("noise" + std::to_string(rng() % 5), 0.2);
      data.push_back({fv, "L" + std::to_string(y)});
    }
    std::vector<double> losses;
    TrainConfig cfg;
    cfg.epochs = 15;
    cfg.seed = seed;
    Train(data, cfg, {}, &losses);
    REQUIRE(losses.size() == 15);
    for (std::size_t e = 1; e < losses.size(); ++e) CHECK(losses[e] <= losses[e - 1] + 1e-6);
  }
}

TEST_CASE("model files round-trip and reject bad input") {
  const auto data = TwoClassSet();
  const auto model = Train(data, {});
  const auto dir = testing::TempDir("model");
  SaveModel(model, dir / "m.txt");
  const auto back = LoadModel(dir / "m.txt");
  CHECK(Serialized(back) == Serialized(model));
  for (const auto& ex : data) CHECK(back.Scores(ex.features) == model.Scores(ex.features));
  CHECK(back.train_meta().seed == 42);
  CHECK(back.train_meta().learning_rate == 0.1);

  const std::string text = Serialized(model);
  std::istringstream truncated(text.substr(0, text.size() - 10));
  CHECK_THROWS_AS(LinearModel::Load(truncated), FormatError);
  std::istringstream newer("ddparse-model 99\n" + text.substr(text.find('\n') + 1));
  CHECK_THROWS_AS(LinearModel::Load(newer), VersionMismatch);
  std::istringstream junk("hello\n");
  CHECK_THROWS_AS(LinearModel::Load(junk), FormatError);
  std::istringstream empty("");
  CHECK_THROWS_AS(LinearModel::Load(empty), FormatError);
}

}  // namespace
}  // namespace ddparse
