#include "ddparse/eval.h"

#include <cstdio>
#include <sstream>

#include "ddparse/errors.h"
#include "json.hpp"

namespace ddparse {

namespace {

void CheckComparable(const DiscourseTree& pred, const DiscourseTree& gold) {
  if (pred.size() != gold.size()) {
    throw Mismatch(gold.doc_id + ": predicted tree has " + std::to_string(pred.size()) +
                   " EDUs, gold has " + std::to_string(gold.size()));
  }
}

DocScore ScoreDocument(const DiscourseTree& pred, const DiscourseTree& gold, Granularity g) {
  CheckComparable(pred, gold);
  if (pred.doc_id != gold.doc_id) {
    throw Mismatch("document order differs: " + pred.doc_id + " vs " + gold.doc_id);
  }
  DocScore score;
  score.doc_id = gold.doc_id;
  score.n_edus = gold.size();
  const auto ph = pred.Heads();
  const auto gh = gold.Heads();
  const auto pr = pred.Relations();
  const auto gr = gold.Relations();
  for (int i = 1; i <= gold.size(); ++i) {
    if (ph[i] != gh[i] || gh[i] == kNoHead) continue;
    ++score.head_correct;
    if (!gr[i].empty() && ToGranularity(pr[i], g) == ToGranularity(gr[i], g)) {
      ++score.labeled_correct;
    }
  }
  score.topic_correct = pred.RootDependents() == gold.RootDependents();
  return score;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

nlohmann::ordered_json ReportJson(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["averaging"] = "micro";
  j["uas"] = r.uas;
  j["las"] = r.las;
  j["topic_acc"] = r.topic_acc;
  j["n_edus_scored"] = r.n_edus_scored;
  auto docs = nlohmann::ordered_json::array();
  for (const auto& d : r.per_doc) {
    nlohmann::ordered_json e;
    e["doc_id"] = d.doc_id;
    e["n_edus"] = d.n_edus;
    e["uas"] = d.uas();
    e["las"] = d.las();
    e["topic_correct"] = d.topic_correct;
    docs.push_back(std::move(e));
  }
  j["per_doc"] = std::move(docs);
  return j;
}

}  // namespace

double Uas(const DiscourseTree& pred, const DiscourseTree& gold) {
  CheckComparable(pred, gold);
  DiscourseTree p = pred;
  p.doc_id = gold.doc_id;
  return ScoreDocument(p, gold, Granularity::kFine).uas();
}

double Las(const DiscourseTree& pred, const DiscourseTree& gold, Granularity g) {
  CheckComparable(pred, gold);
  DiscourseTree p = pred;
  p.doc_id = gold.doc_id;
  return ScoreDocument(p, gold, g).las();
}

EvalReport Evaluate(const std::vector<DiscourseTree>& preds,
                    const std::vector<DiscourseTree>& golds, Granularity g) {
  if (preds.size() != golds.size()) {
    throw Mismatch("corpus sizes differ: " + std::to_string(preds.size()) + " predicted vs " +
                   std::to_string(golds.size()) + " gold");
  }
  EvalReport report;
  long heads = 0;
  long labeled = 0;
  long topics = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    DocScore s = ScoreDocument(preds[i], golds[i], g);
    report.n_edus_scored += s.n_edus;
    heads += s.head_correct;
    labeled += s.labeled_correct;
    topics += s.topic_correct;
    report.per_doc.push_back(std::move(s));
  }
  if (report.n_edus_scored > 0) {
    report.uas = static_cast<double>(heads) / report.n_edus_scored;
    report.las = static_cast<double>(labeled) / report.n_edus_scored;
  }
  if (!golds.empty()) report.topic_acc = static_cast<double>(topics) / golds.size();
  return report;
}

double TopicEduAccuracy(const std::vector<DiscourseTree>& preds,
                        const std::vector<DiscourseTree>& golds) {
  return Evaluate(preds, golds).topic_acc;
}

std::pair<double, double> Agreement(const std::vector<DiscourseTree>& annotation_a,
                                    const std::vector<DiscourseTree>& annotation_b,
                                    Granularity g) {
  const EvalReport r = Evaluate(annotation_a, annotation_b, g);
  return {r.uas, r.las};
}

std::string EvalReport::ToTable() const {
  std::ostringstream out;
  out << "metric      value\n";
  out << "UAS         " << Fixed(uas) << '\n';
  out << "LAS         " << Fixed(las) << '\n';
  out << "topic-acc   " << Fixed(topic_acc) << '\n';
  out << "edus        " << n_edus_scored << '\n';
  out << "(micro-averaged over " << per_doc.size() << " documents)\n";
  return out.str();
}

std::string EvalReport::ToJson() const { return ReportJson(*this).dump(2) + "\n"; }

std::vector<PipelineConfig> AblationGrid(const PipelineConfig& base) {
  PipelineConfig c = base;
  c.pronoun_fix = c.punct_fix = c.two_part = false;
  std::vector<PipelineConfig> grid;
  grid.push_back(c);
  c.pronoun_fix = true;
  grid.push_back(c);
  c.punct_fix = true;
  grid.push_back(c);
  c.two_part = true;
  grid.push_back(c);
  return grid;
}

std::vector<std::string> AblationRowNames() {
  return {"Direct parsing", "+ Relative Pronoun Adjustment", "+ Punctuation Modification",
          "+ Two-part Parsing"};
}

std::vector<AblationRow> AblationReport(const std::vector<DiscourseTree>& corpus,
                                        const ParserModel& model, TranslationAdapter& adapter,
                                        const PipelineConfig& base, Granularity g) {
  const auto grid = AblationGrid(base);
  const auto names = AblationRowNames();
  std::vector<AblationRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<DiscourseTree> preds;
    preds.reserve(corpus.size());
    for (const auto& doc : corpus) preds.push_back(RunPipeline(doc, grid[i], model, adapter));
    rows.push_back({names[i], grid[i], Evaluate(preds, corpus, g)});
  }
  return rows;
}

std::string AblationTable(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-32s %6s %6s %9s\n", "configuration", "UAS", "LAS",
                "topic-acc");
  out << line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof line, "%-32s %6.3f %6.3f %9.3f\n", row.name.c_str(),
                  row.report.uas, row.report.las, row.report.topic_acc);
    out << line;
  }
  return out.str();
}

std::string AblationJson(const std::vector<AblationRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["config"] = row.name;
    j["pronoun_fix"] = row.config.pronoun_fix;
    j["punct_fix"] = row.config.punct_fix;
    j["two_part"] = row.config.two_part;
    j["report"] = ReportJson(row.report);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace ddparse
