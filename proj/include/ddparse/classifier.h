#ifndef DDPARSE_CLASSIFIER_H_
#define DDPARSE_CLASSIFIER_H_

// One-vs-rest linear SVM trained by averaged stochastic subgradient descent
// on the hinge loss.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ddparse/features.h"

namespace ddparse {

struct TrainConfig {
  int epochs = 10;
  // Step size for epoch e (0-based) is learning_rate / (1 + e).
  double learning_rate = 0.1;
  double l2 = 1e-5;
  std::uint64_t seed = 42;
};

struct LabeledExample {
  FeatureVector features;
  std::string label;
};

class LinearModel {
 public:
  LinearModel() = default;
  // All-zero model over `labels`.
  explicit LinearModel(std::vector<std::string> labels, TrainConfig meta = {});

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& bias() const { return bias_; }
  const TrainConfig& train_meta() const { return meta_; }
  std::size_t num_features() const { return weights_.size(); }

  // Index of `label`, or labels().size() if absent.
  std::size_t LabelIndex(const std::string& label) const;

  // w_y . x + b_y for every label, in label order. Unknown features add 0.
  std::vector<double> Scores(const FeatureVector& fv) const;
  // Argmax of Scores; ties go to the lowest label index.
  const std::string& Predict(const FeatureVector& fv) const;
  // Same, restricted to labels with allowed[i] true (an empty mask allows
  // every label). Returns the index.
  std::size_t PredictIndex(const FeatureVector& fv, std::span<const bool> allowed) const;

  double Weight(const std::string& feature, std::size_t label) const;
  void SetWeight(const std::string& feature, std::size_t label, double value);
  void SetBias(std::size_t label, double value) { bias_.at(label) = value; }

  // Versioned text format; see Save for the layout.
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  // Throws FormatError on malformed input, VersionMismatch on an unknown
  // version header.
  static LinearModel Load(std::istream& in);
  static LinearModel Load(const std::filesystem::path& path);

 private:
  friend class Trainer;

  std::vector<std::string> labels_;
  std::vector<double> bias_;
  // feature -> one weight per label
  std::unordered_map<std::string, std::vector<double>> weights_;
  TrainConfig meta_;
};

// Mean over examples of the summed one-vs-rest hinge losses.
double HingeLoss(const LinearModel& model, std::span<const LabeledExample> examples);

// Trains a model. `labels` fixes the label order; when empty, labels are
// ordered by first appearance. Throws DegenerateData if fewer than two
// distinct labels occur, std::invalid_argument on empty feature vectors or
// labels outside `labels`. When `epoch_losses` is given it receives the
// HingeLoss of the averaged model after every epoch.
LinearModel Train(std::span<const LabeledExample> examples, const TrainConfig& config,
                  std::vector<std::string> labels = {},
                  std::vector<double>* epoch_losses = nullptr);

// Model I/O entry points.
void SaveModel(const LinearModel& model, const std::filesystem::path& path);
LinearModel LoadModel(const std::filesystem::path& path);

}  // namespace ddparse

#endif  // DDPARSE_CLASSIFIER_H_
