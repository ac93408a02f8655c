#include "ddparse/relations.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace ddparse {
namespace {

// fine label -> coarse class
const std::vector<std::pair<std::string, std::string>>& FineToCoarse() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"attribution", "attribution"},
      {"bg-compare", "background"},
      {"bg-general", "background"},
      {"bg-goal", "background"},
      {"cause", "cause-effect"},
      {"comparison", "comparison"},
      {"condition", "condition"},
      {"contrast", "contrast"},
      {"elab-addition", "elaboration"},
      {"elab-aspect", "elaboration"},
      {"elab-definition", "elaboration"},
      {"elab-enum_member", "elaboration"},
      {"elab-example", "elaboration"},
      {"elab-process_step", "elaboration"},
      {"enablement", "enablement"},
      {"evaluation", "evaluation"},
      {"exp-evidence", "explain"},
      {"exp-reason", "explain"},
      {"joint", "joint"},
      {"manner-means", "manner-means"},
      {"progression", "progression"},
      {"result", "cause-effect"},
      {"same-unit", "same-unit"},
      {"summary", "summary"},
      {"temporal", "temporal"},
      {std::string(kRootRelation), std::string(kRootRelation)},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& RelationInventory(Granularity g) {
  static const std::vector<std::string> fine = [] {
    std::vector<std::string> out;
    for (const auto& [f, c] : FineToCoarse()) out.push_back(f);
    return out;
  }();
  static const std::vector<std::string> coarse = [] {
    std::vector<std::string> out;
    for (const auto& [f, c] : FineToCoarse()) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    // keep ROOT last
    std::stable_partition(out.begin(), out.end(),
                          [](const std::string& s) { return s != kRootRelation; });
    std::sort(out.begin(), out.end() - 1);
    return out;
  }();
  return g == Granularity::kFine ? fine : coarse;
}

std::string ToCoarse(std::string_view label) {
  for (const auto& [f, c] : FineToCoarse()) {
    if (f == label) return c;
  }
  return std::string(label);
}

std::string ToGranularity(std::string_view label, Granularity g) {
  return g == Granularity::kCoarse ? ToCoarse(label) : std::string(label);
}

bool IsKnownRelation(std::string_view label) {
  for (Granularity g : {Granularity::kFine, Granularity::kCoarse}) {
    if (InventoryIndex(label, g) < RelationInventory(g).size()) return true;
  }
  return false;
}

std::size_t InventoryIndex(std::string_view label, Granularity g) {
  const auto& inv = RelationInventory(g);
  return static_cast<std::size_t>(std::find(inv.begin(), inv.end(), label) - inv.begin());
}

std::string_view GranularityName(Granularity g) {
  return g == Granularity::kFine ? "fine" : "coarse";
}

Granularity ParseGranularity(std::string_view name) {
  if (name == "fine") return Granularity::kFine;
  if (name == "coarse") return Granularity::kCoarse;
  throw std::invalid_argument("unknown granularity: " + std::string(name));
}

}  // namespace ddparse
