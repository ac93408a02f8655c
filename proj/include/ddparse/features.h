#ifndef DDPARSE_FEATURES_H_
#define DDPARSE_FEATURES_H_

#include <map>
#include <span>
#include <string>

#include "ddparse/transition.h"
#include "ddparse/treebank.h"

namespace ddparse {

// Sparse feature vector keyed by feature name. Zero weights are never stored.
class FeatureVector {
 public:
  void Add(const std::string& name, double value = 1.0);
  const std::map<std::string, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool Contains(const std::string& name) const { return entries_.count(name) != 0; }
  // Copy with every value multiplied by `factor` (factor != 0).
  FeatureVector Scaled(double factor) const;
  // "name=value" records, one per line, in name order.
  std::string Serialize() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::map<std::string, double> entries_;
};

// Stage-1 features over stack top (s0), second (s1) and buffer front (b0).
// `edus` is the document's EDU list with the root at index 0.
FeatureVector ExtractStructureFeatures(const ParserState& state, std::span<const Edu> edus);

// Stage-2 features for one attached arc.
FeatureVector ExtractRelationFeatures(const Arc& arc, std::span<const Edu> edus);

}  // namespace ddparse

#endif  // DDPARSE_FEATURES_H_
