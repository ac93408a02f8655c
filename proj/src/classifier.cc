#include "ddparse/classifier.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ddparse/errors.h"
#include "ddparse/random.h"

namespace ddparse {

namespace {

constexpr const char* kMagic = "ddparse-model";
constexpr const char* kVersion = "v1";

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

double ParseDouble(const std::string& s) {
  if (s.empty()) throw FormatError("empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw FormatError("bad number '" + s + "'");
  return v;
}

long ParseLong(const std::string& s) {
  if (s.empty()) throw FormatError("empty integer");
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) throw FormatError("bad integer '" + s + "'");
  return v;
}

// "key=value" -> value, checking the key.
std::string KeyValue(const std::string& field, const std::string& key) {
  const std::string prefix = key + "=";
  if (field.compare(0, prefix.size(), prefix) != 0) {
    throw FormatError("expected '" + key + "=' got '" + field + "'");
  }
  return field.substr(prefix.size());
}

}  // namespace

LinearModel::LinearModel(std::vector<std::string> labels, TrainConfig meta)
    : labels_(std::move(labels)), bias_(labels_.size(), 0.0), meta_(meta) {}

std::size_t LinearModel::LabelIndex(const std::string& label) const {
  return static_cast<std::size_t>(std::find(labels_.begin(), labels_.end(), label) -
                                  labels_.begin());
}

std::vector<double> LinearModel::Scores(const FeatureVector& fv) const {
  std::vector<double> scores = bias_;
  for (const auto& [name, value] : fv.entries()) {
    auto it = weights_.find(name);
    if (it == weights_.end()) continue;
    for (std::size_t y = 0; y < scores.size(); ++y) scores[y] += it->second[y] * value;
  }
  return scores;
}

const std::string& LinearModel::Predict(const FeatureVector& fv) const {
  return labels_[PredictIndex(fv, {})];
}

std::size_t LinearModel::PredictIndex(const FeatureVector& fv,
                                      std::span<const bool> allowed) const {
  const auto scores = Scores(fv);
  std::size_t best = labels_.size();
  for (std::size_t y = 0; y < scores.size(); ++y) {
    if (y < allowed.size() && !allowed[y]) continue;
    if (best == labels_.size() || scores[y] > scores[best]) best = y;
  }
  if (best == labels_.size()) throw std::invalid_argument("no label allowed");
  return best;
}

double LinearModel::Weight(const std::string& feature, std::size_t label) const {
  auto it = weights_.find(feature);
  return it == weights_.end() ? 0.0 : it->second.at(label);
}

void LinearModel::SetWeight(const std::string& feature, std::size_t label, double value) {
  auto& row = weights_[feature];
  if (row.empty()) row.assign(labels_.size(), 0.0);
  row.at(label) = value;
}

void LinearModel::Save(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << '\n';
  out << "meta\tepochs=" << meta_.epochs << "\tlearning_rate=" << FormatDouble(meta_.learning_rate)
      << "\tl2=" << FormatDouble(meta_.l2) << "\tseed=" << meta_.seed
      << "\tlabels=" << labels_.size() << '\n';
  std::vector<const std::string*> names;
  names.reserve(weights_.size());
  for (const auto& [name, row] : weights_) names.push_back(&name);
  std::sort(names.begin(), names.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (std::size_t y = 0; y < labels_.size(); ++y) {
    std::size_t count = 0;
    for (const std::string* name : names) count += weights_.at(*name)[y] != 0.0;
    out << "label\t" << labels_[y] << "\tbias=" << FormatDouble(bias_[y])
        << "\tfeatures=" << count << '\n';
    for (const std::string* name : names) {
      const double w = weights_.at(*name)[y];
      if (w != 0.0) out << *name << '\t' << FormatDouble(w) << '\n';
    }
  }
  out << "end\n";
}

void LinearModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  Save(out);
}

LinearModel LinearModel::Load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty model file");
  const std::string magic = std::string(kMagic) + ' ';
  if (line.compare(0, magic.size(), magic) != 0) throw FormatError("not a model file");
  if (line.substr(magic.size()) != kVersion) {
    throw VersionMismatch("unsupported model version '" + line.substr(magic.size()) + "'");
  }

  if (!std::getline(in, line)) throw FormatError("missing metadata line");
  auto meta = SplitTabs(line);
  if (meta.size() != 6 || meta[0] != "meta") throw FormatError("bad metadata line");
  TrainConfig cfg;
  cfg.epochs = static_cast<int>(ParseLong(KeyValue(meta[1], "epochs")));
  cfg.learning_rate = ParseDouble(KeyValue(meta[2], "learning_rate"));
  cfg.l2 = ParseDouble(KeyValue(meta[3], "l2"));
  cfg.seed = std::strtoull(KeyValue(meta[4], "seed").c_str(), nullptr, 10);
  const long n_labels = ParseLong(KeyValue(meta[5], "labels"));
  if (n_labels < 1) throw FormatError("model has no labels");

  std::vector<std::string> labels;
  std::vector<double> bias;
  std::vector<std::vector<std::pair<std::string, double>>> blocks;
  for (long y = 0; y < n_labels; ++y) {
    if (!std::getline(in, line)) throw FormatError("truncated model: missing label block");
    auto head = SplitTabs(line);
    if (head.size() != 4 || head[0] != "label") throw FormatError("bad label header");
    labels.push_back(head[1]);
    bias.push_back(ParseDouble(KeyValue(head[2], "bias")));
    const long count = ParseLong(KeyValue(head[3], "features"));
    auto& block = blocks.emplace_back();
    for (long i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw FormatError("truncated model: missing weights");
      const std::size_t tab = line.rfind('\t');
      if (tab == std::string::npos) throw FormatError("bad weight record");
      block.emplace_back(line.substr(0, tab), ParseDouble(line.substr(tab + 1)));
    }
  }
  if (!std::getline(in, line) || line != "end") throw FormatError("truncated model: missing end");

  LinearModel model(labels, cfg);
  model.bias_ = bias;
  for (std::size_t y = 0; y < blocks.size(); ++y) {
    for (const auto& [name, w] : blocks[y]) model.SetWeight(name, y, w);
  }
  return model;
}

LinearModel LinearModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return Load(in);
}

void SaveModel(const LinearModel& model, const std::filesystem::path& path) { model.Save(path); }
LinearModel LoadModel(const std::filesystem::path& path) { return LinearModel::Load(path); }

double HingeLoss(const LinearModel& model, std::span<const LabeledExample> examples) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : examples) {
    const auto scores = model.Scores(ex.features);
    const std::size_t gold = model.LabelIndex(ex.label);
    for (std::size_t y = 0; y < scores.size(); ++y) {
      const double target = y == gold ? 1.0 : -1.0;
      total += std::max(0.0, 1.0 - target * scores[y]);
    }
  }
  return total / static_cast<double>(examples.size());
}

// Averaged SGD with lazily applied L2 shrinkage. Every weight keeps the step
// through which its value and running sum are current; untouched steps only
// shrink the value geometrically, so catching up is closed form.
class Trainer {
 public:
  Trainer(std::span<const LabeledExample> examples, const TrainConfig& config,
          std::vector<std::string> labels)
      : config_(config), labels_(std::move(labels)), num_labels_(labels_.size()) {
    std::map<std::string, std::size_t> label_index;
    for (std::size_t y = 0; y < labels_.size(); ++y) label_index[labels_[y]] = y;
    std::unordered_map<std::string, std::size_t> feature_index;
    for (const auto& ex : examples) {
      if (ex.features.empty()) throw std::invalid_argument("example with no features");
      auto it = label_index.find(ex.label);
      if (it == label_index.end()) throw std::invalid_argument("unknown label " + ex.label);
      Sparse row;
      row.label = it->second;
      for (const auto& [name, value] : ex.features.entries()) {
        auto [fit, inserted] = feature_index.emplace(name, names_.size());
        if (inserted) names_.push_back(name);
        row.features.emplace_back(fit->second, value);
      }
      data_.push_back(std::move(row));
    }
    weights_.assign(names_.size() * num_labels_, Entry{});
    bias_.assign(num_labels_, Entry{});
  }

  LinearModel Run(std::span<const LabeledExample> examples, std::vector<double>* losses) {
    std::mt19937_64 rng(config_.seed);
    std::vector<std::size_t> order(data_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> scores(num_labels_);
    for (int epoch = 0; epoch < config_.epochs; ++epoch) {
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[UniformIndex(rng, i)]);
      }
      const double lr = config_.learning_rate / (1.0 + epoch);
      decay_ = 1.0 - lr * config_.l2;
      for (std::size_t idx : order) {
        const Sparse& ex = data_[idx];
        const long t = ++step_;
        for (std::size_t y = 0; y < num_labels_; ++y) {
          CatchUp(bias_[y], t - 1, 1.0);
          scores[y] = bias_[y].value;
        }
        for (const auto& [f, x] : ex.features) {
          for (std::size_t y = 0; y < num_labels_; ++y) {
            Entry& e = weights_[f * num_labels_ + y];
            CatchUp(e, t - 1, decay_);
            scores[y] += e.value * x;
          }
        }
        for (std::size_t y = 0; y < num_labels_; ++y) {
          const double target = y == ex.label ? 1.0 : -1.0;
          const bool violated = target * scores[y] < 1.0;
          Entry& b = bias_[y];
          if (violated) b.value += lr * target;
          b.sum += b.value;
          b.last = t;
          for (const auto& [f, x] : ex.features) {
            Entry& e = weights_[f * num_labels_ + y];
            e.value *= decay_;
            if (violated) e.value += lr * target * x;
            e.sum += e.value;
            e.last = t;
          }
        }
      }
      Flush();
      if (losses) losses->push_back(HingeLoss(Averaged(), examples));
    }
    return Averaged();
  }

 private:
  struct Entry {
    double value = 0.0;
    double sum = 0.0;
    long last = 0;
  };
  struct Sparse {
    std::size_t label = 0;
    std::vector<std::pair<std::size_t, double>> features;
  };

  // Brings `e` current through step `t` assuming only shrinkage since e.last.
  static void CatchUp(Entry& e, long t, double d) {
    const long n = t - e.last;
    if (n <= 0) return;
    if (e.value != 0.0) {
      if (d == 1.0) {
        e.sum += e.value * static_cast<double>(n);
      } else {
        const double dn = std::pow(d, static_cast<double>(n));
        e.sum += e.value * d * (1.0 - dn) / (1.0 - d);
        e.value *= dn;
      }
    }
    e.last = t;
  }

  void Flush() {
    for (Entry& e : weights_) CatchUp(e, step_, decay_);
    for (Entry& b : bias_) CatchUp(b, step_, 1.0);
  }

  LinearModel Averaged() const {
    LinearModel model(labels_, config_);
    const double t = step_ > 0 ? static_cast<double>(step_) : 1.0;
    for (std::size_t y = 0; y < num_labels_; ++y) model.bias_[y] = bias_[y].sum / t;
    for (std::size_t f = 0; f < names_.size(); ++f) {
      std::vector<double> row(num_labels_);
      bool any = false;
      for (std::size_t y = 0; y < num_labels_; ++y) {
        row[y] = weights_[f * num_labels_ + y].sum / t;
        any = any || row[y] != 0.0;
      }
      if (any) model.weights_.emplace(names_[f], std::move(row));
    }
    return model;
  }

  TrainConfig config_;
  std::vector<std::string> labels_;
  std::size_t num_labels_;
  std::vector<std::string> names_;
  std::vector<Sparse> data_;
  std::vector<Entry> weights_;
  std::vector<Entry> bias_;
  long step_ = 0;
  double decay_ = 1.0;
};

LinearModel Train(std::span<const LabeledExample> examples, const TrainConfig& config,
                  std::vector<std::string> labels, std::vector<double>* epoch_losses) {
  std::vector<std::string> seen;
  for (const auto& ex : examples) {
    if (std::find(seen.begin(), seen.end(), ex.label) == seen.end()) seen.push_back(ex.label);
  }
  if (seen.size() < 2) {
    throw DegenerateData("training needs at least two distinct labels, got " +
                         std::to_string(seen.size()));
  }
  if (labels.empty()) labels = seen;
  if (config.epochs < 1) throw std::invalid_argument("epochs must be positive");
  Trainer trainer(examples, config, std::move(labels));
  return trainer.Run(examples, epoch_losses);
}

}  // namespace ddparse
