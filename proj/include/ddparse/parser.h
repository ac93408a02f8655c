#ifndef DDPARSE_PARSER_H_
#define DDPARSE_PARSER_H_

// Two-stage discourse dependency parser: a greedy arc-standard structure
// parser followed by a per-arc relation classifier.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ddparse/classifier.h"
#include "ddparse/relations.h"
#include "ddparse/treebank.h"

namespace ddparse {

struct ParserModel {
  LinearModel action_model;    // labels: SHIFT, LEFT_ARC, RIGHT_ARC
  LinearModel relation_model;  // labels: relation inventory subset
  Granularity granularity = Granularity::kFine;

  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static ParserModel Load(std::istream& in);
  static ParserModel Load(const std::filesystem::path& path);
};

struct TrainSummary {
  int n_docs = 0;
  int n_structure_examples = 0;
  int n_relation_examples = 0;
  int n_skipped_nonprojective = 0;
  int n_relation_labels = 0;
};

// (state features, oracle action) pairs along the gold derivation.
// Throws NonProjective.
std::vector<LabeledExample> StructureExamples(const DiscourseTree& tree);
// (arc features, gold relation) for every gold arc.
std::vector<LabeledExample> RelationExamples(const DiscourseTree& tree, Granularity g);

// Trees without an arc-standard derivation contribute relation examples
// only. Throws EmptyCorpus, NoTrainableTrees.
ParserModel TrainParser(const std::vector<DiscourseTree>& corpus, const TrainConfig& config,
                        Granularity granularity = Granularity::kFine,
                        TrainSummary* summary = nullptr);

struct ParseOptions {
  // Forbid attaching the first EDU to anything but the root. Used for the
  // second half of a topic split.
  bool anchor_first_edu = false;
};

// Greedy masked decoding. Arcs come back unlabeled, sorted by dependent.
DiscourseTree ParseStructure(const DiscourseTree& doc, const ParserModel& model,
                             const ParseOptions& options = {});

// Labels every arc; arcs from the root always get the root relation.
DiscourseTree LabelRelations(DiscourseTree tree, const ParserModel& model);

DiscourseTree Parse(const DiscourseTree& doc, const ParserModel& model);

// Uniform choice among legal actions at every step; every non-root arc is
// labeled with the most frequent relation.
DiscourseTree RandomParse(const DiscourseTree& doc, std::uint64_t seed,
                          Granularity granularity = Granularity::kFine);

}  // namespace ddparse

#endif  // DDPARSE_PARSER_H_
