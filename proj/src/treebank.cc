#include "ddparse/treebank.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ddparse/errors.h"
#include "ddparse/relations.h"
#include "ddparse/text.h"
#include "json.hpp"

namespace ddparse {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<int> DiscourseTree::Heads() const {
  std::vector<int> heads(edus.size(), kNoHead);
  for (const Arc& arc : arcs) {
    if (arc.dependent > 0 && arc.dependent < static_cast<int>(heads.size())) {
      heads[arc.dependent] = arc.head;
    }
  }
  return heads;
}

std::vector<std::string> DiscourseTree::Relations() const {
  std::vector<std::string> rels(edus.size());
  for (const Arc& arc : arcs) {
    if (arc.dependent > 0 && arc.dependent < static_cast<int>(rels.size())) {
      rels[arc.dependent] = arc.relation;
    }
  }
  return rels;
}

std::vector<int> DiscourseTree::RootDependents() const {
  std::vector<int> out;
  for (const Arc& arc : arcs) {
    if (arc.head == kRootId) out.push_back(arc.dependent);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void DiscourseTree::SortArcs() {
  std::stable_sort(arcs.begin(), arcs.end(),
                   [](const Arc& a, const Arc& b) { return a.dependent < b.dependent; });
}

Edu RootEdu() { return Edu{kRootId, "", 0, false}; }

DiscourseTree MakeDocument(std::string doc_id, std::vector<Edu> real_edus) {
  DiscourseTree tree;
  tree.doc_id = std::move(doc_id);
  tree.edus.reserve(real_edus.size() + 1);
  tree.edus.push_back(RootEdu());
  int id = 1;
  for (Edu& edu : real_edus) {
    edu.id = id++;
    tree.edus.push_back(std::move(edu));
  }
  return tree;
}

std::string Violation::ToString() const {
  const char* name = "";
  switch (kind) {
    case Kind::kRootDependent: name = "root-dependent"; break;
    case Kind::kUnknownId: name = "unknown-id"; break;
    case Kind::kMultipleHeads: name = "multiple-heads"; break;
    case Kind::kHeadless: name = "headless"; break;
    case Kind::kCycle: name = "cycle"; break;
    case Kind::kDisconnected: name = "disconnected"; break;
  }
  return std::string(name) + "(" + std::to_string(edu) + ")";
}

std::vector<Violation> ValidateTree(const DiscourseTree& tree) {
  using Kind = Violation::Kind;
  const int k = tree.size();
  std::vector<Violation> out;
  std::vector<std::vector<int>> heads_of(k + 1);

  std::set<int> unknown;
  bool root_dependent = false;
  for (const Arc& arc : tree.arcs) {
    if (arc.dependent == kRootId) {
      root_dependent = true;
      continue;
    }
    if (arc.dependent < 0 || arc.dependent > k) {
      unknown.insert(arc.dependent);
      continue;
    }
    if (arc.head < 0 || arc.head > k) {
      unknown.insert(arc.head);
      continue;
    }
    heads_of[arc.dependent].push_back(arc.head);
  }
  if (root_dependent) out.push_back({Kind::kRootDependent, kRootId});
  for (int id : unknown) out.push_back({Kind::kUnknownId, id});

  std::vector<int> head(k + 1, kNoHead);
  for (int d = 1; d <= k; ++d) {
    if (heads_of[d].size() > 1) out.push_back({Kind::kMultipleHeads, d});
    if (heads_of[d].size() == 1) head[d] = heads_of[d][0];
  }
  for (int d = 1; d <= k; ++d) {
    if (heads_of[d].empty()) out.push_back({Kind::kHeadless, d});
  }

  // Walk head chains of single-headed EDUs.
  enum State { kUnvisited, kOnPath, kReachesRoot, kBlocked, kInCycle, kIntoCycle };
  std::vector<State> state(k + 1, kUnvisited);
  state[kRootId] = kReachesRoot;
  for (int start = 1; start <= k; ++start) {
    if (state[start] != kUnvisited) continue;
    std::vector<int> path;
    int node = start;
    State outcome = kBlocked;
    while (true) {
      if (node != kRootId && head[node] == kNoHead) {
        if (state[node] == kUnvisited) state[node] = kBlocked;
        outcome = kBlocked;
        break;
      }
      if (state[node] == kOnPath) {
        // nodes from `node` onward in path form a cycle
        auto it = std::find(path.begin(), path.end(), node);
        for (auto c = it; c != path.end(); ++c) state[*c] = kInCycle;
        path.erase(it, path.end());
        outcome = kIntoCycle;
        break;
      }
      if (state[node] != kUnvisited) {
        outcome = state[node] == kInCycle ? kIntoCycle : state[node];
        break;
      }
      state[node] = kOnPath;
      path.push_back(node);
      node = head[node];
    }
    for (int p : path) state[p] = outcome;
  }
  for (int d = 1; d <= k; ++d) {
    if (state[d] == kInCycle) out.push_back({Kind::kCycle, d});
  }
  for (int d = 1; d <= k; ++d) {
    if (state[d] == kIntoCycle) out.push_back({Kind::kDisconnected, d});
  }
  return out;
}

bool IsProjective(const DiscourseTree& tree) {
  const auto heads = tree.Heads();
  auto dominates = [&](int ancestor, int node) {
    for (int steps = 0; node != kNoHead && steps <= tree.size(); ++steps) {
      if (node == ancestor) return true;
      if (node == kRootId) return false;
      node = heads[node];
    }
    return false;
  };
  // An arc is projective iff its head dominates every node inside its span.
  for (const Arc& arc : tree.arcs) {
    const int lo = std::min(arc.head, arc.dependent);
    const int hi = std::max(arc.head, arc.dependent);
    for (int m = lo + 1; m < hi; ++m) {
      if (!dominates(arc.head, m)) return false;
    }
  }
  return true;
}

namespace {

template <typename T>
T Field(const ordered_json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

DiscourseTree ReadDocument(std::string_view json_text, const std::string& source_name) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, e.what());
  }
  if (!root.is_object()) throw ParseError(source_name, "top level is not an object");
  DiscourseTree tree;
  tree.doc_id = Field<std::string>(root, "doc_id", source_name);
  auto edus_it = root.find("edus");
  if (edus_it == root.end() || !edus_it->is_array()) {
    throw ParseError(source_name, "missing array 'edus'");
  }

  tree.edus.push_back(RootEdu());
  std::vector<int> parents;
  std::vector<std::string> relations;
  for (const auto& entry : *edus_it) {
    if (!entry.is_object()) throw ParseError(source_name, "edu entry is not an object");
    Edu edu;
    edu.id = Field<int>(entry, "id", source_name);
    edu.text = Field<std::string>(entry, "text", source_name);
    edu.sentence_index = Field<int>(entry, "sentence", source_name);
    edu.ends_with_period = Field<bool>(entry, "ends_with_period", source_name);
    parents.push_back(Field<int>(entry, "parent", source_name));
    relations.push_back(Field<std::string>(entry, "relation", source_name));
    tree.edus.push_back(std::move(edu));
  }

  const std::string& id = tree.doc_id;
  const int k = tree.size();
  if (k == 0) throw ValidationError(id, "empty-document");
  for (int i = 1; i <= k; ++i) {
    if (tree.edus[i].id != i) throw ValidationError(id, "non-consecutive-ids");
    if (i > 1 && tree.edus[i].sentence_index < tree.edus[i - 1].sentence_index) {
      throw ValidationError(id, "sentence-order");
    }
  }
  const auto annotated = std::count_if(parents.begin(), parents.end(),
                                       [](int p) { return p != kNoHead; });
  if (annotated == 0) return tree;
  if (annotated != k) throw ValidationError(id, "partial-annotation");

  for (int i = 1; i <= k; ++i) {
    const std::string& rel = relations[i - 1];
    if (!rel.empty() && !IsKnownRelation(rel)) {
      throw ValidationError(id, "unknown-relation(" + rel + ")");
    }
    if (parents[i - 1] == kRootId && !rel.empty() && rel != kRootRelation) {
      throw ValidationError(id, "root-relation(" + std::to_string(i) + ")");
    }
    tree.arcs.push_back(Arc{parents[i - 1], i, rel});
  }
  const auto violations = ValidateTree(tree);
  if (!violations.empty()) throw ValidationError(id, violations.front().ToString());
  return tree;
}

DiscourseTree LoadDocument(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError(file.string(), "cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return ReadDocument(buf.str(), file.string());
}

std::vector<DiscourseTree> LoadCorpus(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                return a.filename().string() < b.filename().string();
              });
  } else {
    throw ParseError(path.string(), "no such file or directory");
  }
  std::vector<DiscourseTree> corpus;
  corpus.reserve(files.size());
  for (const auto& f : files) corpus.push_back(LoadDocument(f));
  return corpus;
}

std::string WriteDocument(const DiscourseTree& tree) {
  const auto heads = tree.Heads();
  const auto rels = tree.Relations();
  ordered_json doc;
  doc["doc_id"] = tree.doc_id;
  ordered_json edus = ordered_json::array();
  for (int i = 1; i <= tree.size(); ++i) {
    const Edu& e = tree.edus[i];
    ordered_json entry;
    entry["id"] = e.id;
    entry["text"] = e.text;
    entry["parent"] = heads[i];
    entry["relation"] = rels[i];
    entry["sentence"] = e.sentence_index;
    entry["ends_with_period"] = e.ends_with_period;
    edus.push_back(std::move(entry));
  }
  doc["edus"] = std::move(edus);
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

void SaveDocument(const DiscourseTree& tree, const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + file.string());
  out << WriteDocument(tree);
}

void SaveCorpus(const std::vector<DiscourseTree>& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& tree : corpus) SaveDocument(tree, dir / (tree.doc_id + ".json"));
}

CorpusStats ComputeCorpusStats(const std::vector<DiscourseTree>& corpus) {
  if (corpus.empty()) throw EmptyCorpus();
  CorpusStats stats;
  stats.n_docs = static_cast<long>(corpus.size());
  long real_edus = 0;
  long sentences = 0;
  double chars = 0;
  std::map<std::string, long> freq;
  for (const auto& tree : corpus) {
    real_edus += tree.size();
    stats.n_relations += static_cast<long>(tree.arcs.size());
    std::set<int> sent_ids;
    for (int i = 1; i <= tree.size(); ++i) {
      sent_ids.insert(tree.edus[i].sentence_index);
      chars += static_cast<double>(text::CharCount(tree.edus[i].text));
    }
    sentences += static_cast<long>(sent_ids.size());
    for (const Arc& arc : tree.arcs) ++freq[arc.relation];
  }
  stats.n_edus = real_edus + stats.n_docs;
  stats.avg_edus_per_doc = static_cast<double>(real_edus) / stats.n_docs;
  stats.avg_edus_per_sentence = sentences ? static_cast<double>(real_edus) / sentences : 0.0;
  stats.avg_chars_per_edu = real_edus ? chars / real_edus : 0.0;
  for (const auto& [rel, count] : freq) {
    stats.relation_freq.push_back(
        {rel, count, 100.0 * static_cast<double>(count) / stats.n_relations});
  }
  std::stable_sort(stats.relation_freq.begin(), stats.relation_freq.end(),
                   [](const RelationCount& a, const RelationCount& b) {
                     return a.count > b.count;
                   });
  return stats;
}

std::string CorpusStats::ToTable() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "documents            %ld\n", n_docs);
  out << line;
  std::snprintf(line, sizeof line, "edus (incl. roots)   %ld\n", n_edus);
  out << line;
  std::snprintf(line, sizeof line, "relations            %ld\n", n_relations);
  out << line;
  std::snprintf(line, sizeof line, "edus per document    %.2f\n", avg_edus_per_doc);
  out << line;
  std::snprintf(line, sizeof line, "edus per sentence    %.2f\n", avg_edus_per_sentence);
  out << line;
  std::snprintf(line, sizeof line, "chars per edu        %.2f\n", avg_chars_per_edu);
  out << line;
  if (!relation_freq.empty()) {
    out << "\nrelation             count   percent\n";
    for (const auto& r : relation_freq) {
      std::snprintf(line, sizeof line, "%-20s %5ld %9.2f\n", r.relation.c_str(), r.count,
                    r.percentage);
      out << line;
    }
  }
  return out.str();
}

}  // namespace ddparse
