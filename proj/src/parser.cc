#include "ddparse/parser.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <random>

#include "ddparse/errors.h"
#include "ddparse/features.h"
#include "ddparse/random.h"
#include "ddparse/transition.h"

namespace ddparse {

namespace {

constexpr const char* kParserHeader = "ddparse-parser v1";

std::vector<std::string> ActionLabels() {
  std::vector<std::string> out;
  for (Action a : kAllActions) out.emplace_back(ActionName(a));
  return out;
}

}  // namespace

void ParserModel::Save(std::ostream& out) const {
  out << kParserHeader << '\n';
  out << "granularity " << GranularityName(granularity) << '\n';
  action_model.Save(out);
  relation_model.Save(out);
}

void ParserModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  Save(out);
}

ParserModel ParserModel::Load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty parser model");
  if (line.rfind("ddparse-parser ", 0) != 0) throw FormatError("not a parser model");
  if (line != kParserHeader) throw VersionMismatch("unsupported parser model '" + line + "'");
  if (!std::getline(in, line) || line.rfind("granularity ", 0) != 0) {
    throw FormatError("missing granularity line");
  }
  ParserModel model;
  try {
    model.granularity = ParseGranularity(line.substr(12));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  model.action_model = LinearModel::Load(in);
  model.relation_model = LinearModel::Load(in);
  if (model.action_model.labels() != ActionLabels()) {
    throw FormatError("action model labels must be SHIFT, LEFT_ARC, RIGHT_ARC");
  }
  return model;
}

ParserModel ParserModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return Load(in);
}

std::vector<LabeledExample> StructureExamples(const DiscourseTree& tree) {
  const auto actions = OracleActions(tree);
  std::vector<LabeledExample> out;
  out.reserve(actions.size());
  ParserState state = ParserState::Initial(tree.size());
  for (Action a : actions) {
    out.push_back({ExtractStructureFeatures(state, tree.edus), std::string(ActionName(a))});
    state = state.Apply(a);
  }
  return out;
}

std::vector<LabeledExample> RelationExamples(const DiscourseTree& tree, Granularity g) {
  std::vector<LabeledExample> out;
  out.reserve(tree.arcs.size());
  for (const Arc& arc : tree.arcs) {
    if (arc.relation.empty()) continue;
    out.push_back({ExtractRelationFeatures(arc, tree.edus), ToGranularity(arc.relation, g)});
  }
  return out;
}

ParserModel TrainParser(const std::vector<DiscourseTree>& corpus, const TrainConfig& config,
                        Granularity granularity, TrainSummary* summary) {
  if (corpus.empty()) throw EmptyCorpus();
  TrainSummary local;
  std::vector<LabeledExample> structure;
  std::vector<LabeledExample> relation;
  for (const auto& tree : corpus) {
    if (!tree.annotated()) continue;
    ++local.n_docs;
    try {
      auto ex = StructureExamples(tree);
      std::move(ex.begin(), ex.end(), std::back_inserter(structure));
    } catch (const NonProjective&) {
      ++local.n_skipped_nonprojective;
    }
    auto rel = RelationExamples(tree, granularity);
    std::move(rel.begin(), rel.end(), std::back_inserter(relation));
  }
  if (structure.empty()) throw NoTrainableTrees();

  ParserModel model;
  model.granularity = granularity;
  model.action_model = Train(structure, config, ActionLabels());

  std::vector<std::string> labels;
  for (const auto& ex : relation) {
    if (std::find(labels.begin(), labels.end(), ex.label) == labels.end()) {
      labels.push_back(ex.label);
    }
  }
  std::stable_sort(labels.begin(), labels.end(), [&](const auto& a, const auto& b) {
    return InventoryIndex(a, granularity) < InventoryIndex(b, granularity);
  });
  if (labels.size() >= 2) {
    model.relation_model = Train(relation, config, labels);
  } else {
    // Nothing to discriminate; a constant model still round-trips.
    if (labels.empty()) labels.emplace_back(kRootRelation);
    model.relation_model = LinearModel(labels, config);
  }

  local.n_structure_examples = static_cast<int>(structure.size());
  local.n_relation_examples = static_cast<int>(relation.size());
  local.n_relation_labels = static_cast<int>(labels.size());
  if (summary) *summary = local;
  return model;
}

DiscourseTree ParseStructure(const DiscourseTree& doc, const ParserModel& model,
                             const ParseOptions& options) {
  ParserState state = ParserState::Initial(doc.size());
  bool allowed[3];
  while (!state.IsTerminal()) {
    ActionSet legal = state.LegalActions();
    if (options.anchor_first_edu && state.StackItem(1) == 1 && legal.size() > 1) {
      legal.Remove(Action::kLeftArc);
    }
    for (Action a : kAllActions) allowed[static_cast<int>(a)] = legal.Contains(a);
    const Action next = legal.size() == 1
                            ? legal.ToVector().front()
                            : static_cast<Action>(model.action_model.PredictIndex(
                                  ExtractStructureFeatures(state, doc.edus), allowed));
    state = state.Apply(next);
  }
  DiscourseTree out;
  out.doc_id = doc.doc_id;
  out.edus = doc.edus;
  for (const auto& [h, d] : state.arcs()) out.arcs.push_back(Arc{h, d, ""});
  out.SortArcs();
  return out;
}

DiscourseTree LabelRelations(DiscourseTree tree, const ParserModel& model) {
  const LinearModel& rel = model.relation_model;
  const auto& labels = rel.labels();
  // Only the root arc may carry the root relation.
  std::unique_ptr<bool[]> allowed(new bool[labels.size()]);
  bool any = false;
  for (std::size_t y = 0; y < labels.size(); ++y) {
    allowed[y] = labels[y] != kRootRelation;
    any = any || allowed[y];
  }
  for (Arc& arc : tree.arcs) {
    if (arc.head == kRootId) {
      arc.relation = std::string(kRootRelation);
    } else if (any) {
      arc.relation = labels[rel.PredictIndex(ExtractRelationFeatures(arc, tree.edus),
                                             std::span<const bool>(allowed.get(), labels.size()))];
    } else {
      arc.relation = ToGranularity(kDefaultRelation, model.granularity);
    }
  }
  return tree;
}

DiscourseTree Parse(const DiscourseTree& doc, const ParserModel& model) {
  return LabelRelations(ParseStructure(doc, model), model);
}

DiscourseTree RandomParse(const DiscourseTree& doc, std::uint64_t seed, Granularity granularity) {
  std::mt19937_64 rng(seed);
  ParserState state = ParserState::Initial(doc.size());
  while (!state.IsTerminal()) {
    const auto legal = state.LegalActions().ToVector();
    state = state.Apply(legal[UniformIndex(rng, legal.size())]);
  }
  DiscourseTree out;
  out.doc_id = doc.doc_id;
  out.edus = doc.edus;
  const std::string relation = ToGranularity(kDefaultRelation, granularity);
  for (const auto& [h, d] : state.arcs()) {
    out.arcs.push_back(Arc{h, d, h == kRootId ? std::string(kRootRelation) : relation});
  }
  out.SortArcs();
  return out;
}

}  // namespace ddparse
