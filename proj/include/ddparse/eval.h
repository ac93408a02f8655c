#ifndef DDPARSE_EVAL_H_
#define DDPARSE_EVAL_H_

#include <string>
#include <utility>
#include <vector>

#include "ddparse/parser.h"
#include "ddparse/pipeline.h"
#include "ddparse/relations.h"
#include "ddparse/translation.h"
#include "ddparse/treebank.h"

namespace ddparse {

// Single-document attachment scores over real EDUs. Relations are compared
// after mapping to `g`. Throw Mismatch when the EDU sets differ.
double Uas(const DiscourseTree& pred, const DiscourseTree& gold);
double Las(const DiscourseTree& pred, const DiscourseTree& gold,
           Granularity g = Granularity::kFine);

struct DocScore {
  std::string doc_id;
  int n_edus = 0;
  int head_correct = 0;
  int labeled_correct = 0;
  bool topic_correct = false;

  double uas() const { return n_edus ? static_cast<double>(head_correct) / n_edus : 0.0; }
  double las() const { return n_edus ? static_cast<double>(labeled_correct) / n_edus : 0.0; }
};

// Corpus scores are micro-averaged (pooled over EDUs); per_doc carries the
// per-document counts for macro views.
struct EvalReport {
  double uas = 0.0;
  double las = 0.0;
  double topic_acc = 0.0;
  int n_edus_scored = 0;
  std::vector<DocScore> per_doc;

  std::string ToTable() const;
  std::string ToJson() const;
};

// Documents are paired by position; doc ids and EDU counts must agree.
EvalReport Evaluate(const std::vector<DiscourseTree>& preds,
                    const std::vector<DiscourseTree>& golds,
                    Granularity g = Granularity::kFine);

// Fraction of documents whose set of root dependents matches exactly.
double TopicEduAccuracy(const std::vector<DiscourseTree>& preds,
                        const std::vector<DiscourseTree>& golds);

// Micro (uas, las) of annotation_a against annotation_b.
std::pair<double, double> Agreement(const std::vector<DiscourseTree>& annotation_a,
                                    const std::vector<DiscourseTree>& annotation_b,
                                    Granularity g = Granularity::kFine);

struct AblationRow {
  std::string name;
  PipelineConfig config;
  EvalReport report;
};

// Cumulative toggle grid: direct parsing, + relative pronoun adjustment,
// + punctuation modification, + two-part parsing.
std::vector<PipelineConfig> AblationGrid(const PipelineConfig& base);
std::vector<std::string> AblationRowNames();

// Runs the pipeline over `corpus` once per grid row and scores it against
// the corpus' own gold arcs. Propagates AdapterError.
std::vector<AblationRow> AblationReport(const std::vector<DiscourseTree>& corpus,
                                        const ParserModel& model, TranslationAdapter& adapter,
                                        const PipelineConfig& base = {},
                                        Granularity g = Granularity::kFine);

std::string AblationTable(const std::vector<AblationRow>& rows);
std::string AblationJson(const std::vector<AblationRow>& rows);

}  // namespace ddparse

#endif  // DDPARSE_EVAL_H_
