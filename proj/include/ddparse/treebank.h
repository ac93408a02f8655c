#ifndef DDPARSE_TREEBANK_H_
#define DDPARSE_TREEBANK_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ddparse {

inline constexpr int kRootId = 0;
inline constexpr int kNoHead = -1;

// One elementary discourse unit. Id 0 is the artificial root.
struct Edu {
  int id = 0;
  std::string text;
  int sentence_index = 0;
  bool ends_with_period = false;

  bool is_root() const { return id == kRootId; }
  friend bool operator==(const Edu&, const Edu&) = default;
};

// head -> dependent with a relation label ("" while unlabeled).
struct Arc {
  int head = kNoHead;
  int dependent = 0;
  std::string relation;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// A document: EDUs (edus[0] is always the artificial root, edus[i].id == i)
// and, when annotated, one arc per real EDU.
struct DiscourseTree {
  std::string doc_id;
  std::vector<Edu> edus;
  std::vector<Arc> arcs;

  // Number of real EDUs.
  int size() const { return static_cast<int>(edus.size()) - 1; }
  bool annotated() const { return !arcs.empty(); }

  // Head per id (index 0 and unattached EDUs hold kNoHead). If an EDU has
  // several heads the last arc wins; use ValidateTree to detect that.
  std::vector<int> Heads() const;
  // Relation per id, "" where absent.
  std::vector<std::string> Relations() const;
  // Dependents of the artificial root in ascending order.
  std::vector<int> RootDependents() const;
  // Arcs sorted by dependent.
  void SortArcs();

  friend bool operator==(const DiscourseTree&, const DiscourseTree&) = default;
};

Edu RootEdu();

// Builds an unannotated document; ids are assigned 1..k in order and the
// root is prepended.
DiscourseTree MakeDocument(std::string doc_id, std::vector<Edu> real_edus);

struct Violation {
  enum class Kind { kRootDependent, kUnknownId, kMultipleHeads, kHeadless, kCycle, kDisconnected };
  Kind kind;
  int edu;

  std::string ToString() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Structural checks on the arcs: dependent != root, ids in range, exactly one
// head per real EDU, no cycles (self-loops included), every EDU reaches the
// root. Violations are reported in that rule order, each sorted by EDU id.
std::vector<Violation> ValidateTree(const DiscourseTree& tree);

// True iff no two arcs cross with EDUs laid out by id and the root at 0.
// Precondition: ValidateTree(tree) is empty.
bool IsProjective(const DiscourseTree& tree);

// Reads one document record. Throws ParseError / ValidationError.
DiscourseTree ReadDocument(std::string_view json_text, const std::string& source_name);
DiscourseTree LoadDocument(const std::filesystem::path& file);

// Loads every *.json file of a directory (or a single file), ordered by
// filename.
std::vector<DiscourseTree> LoadCorpus(const std::filesystem::path& path);

// Canonical serialization: 2-space indented JSON, fixed key order, trailing
// newline. Unannotated EDUs are written with parent -1 and relation "".
std::string WriteDocument(const DiscourseTree& tree);
void SaveDocument(const DiscourseTree& tree, const std::filesystem::path& file);
// Writes <doc_id>.json per document into `dir` (created if missing).
void SaveCorpus(const std::vector<DiscourseTree>& corpus, const std::filesystem::path& dir);

struct RelationCount {
  std::string relation;
  long count = 0;
  double percentage = 0.0;
};

struct CorpusStats {
  long n_docs = 0;
  long n_edus = 0;  // including one artificial root per document
  long n_relations = 0;
  double avg_edus_per_doc = 0.0;
  double avg_edus_per_sentence = 0.0;
  double avg_chars_per_edu = 0.0;
  // Sorted by count descending, then by name.
  std::vector<RelationCount> relation_freq;

  std::string ToTable() const;
};

// Throws EmptyCorpus on an empty input.
CorpusStats ComputeCorpusStats(const std::vector<DiscourseTree>& corpus);

}  // namespace ddparse

#endif  // DDPARSE_TREEBANK_H_
