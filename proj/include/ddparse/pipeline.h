#ifndef DDPARSE_PIPELINE_H_
#define DDPARSE_PIPELINE_H_

// Zero-shot pipeline: translate every EDU on its own, repair the obvious
// translation artifacts, parse the English side and copy the tree back onto
// the source EDUs (ids correspond one to one).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddparse/parser.h"
#include "ddparse/translation.h"
#include "ddparse/treebank.h"

namespace ddparse {

// Placeholder text for an EDU emptied by pronoun movement.
inline constexpr std::string_view kEmptyEduText = "<EMPTY>";

const std::vector<std::string>& DefaultTopicCues();
const std::vector<std::string>& DefaultRelativePronouns();

struct PipelineConfig {
  bool punct_fix = true;
  bool pronoun_fix = true;
  bool two_part = true;
  std::vector<std::string> topic_cues = DefaultTopicCues();
  std::vector<std::string> relative_pronouns = DefaultRelativePronouns();
  std::string source_lang = "zh";
  std::string target_lang = "en";
};

// One translated EDU per source EDU (root included at index 0) with the same
// id, sentence index and source punctuation flag. Throws AdapterError.
std::vector<Edu> TranslateEdus(const DiscourseTree& doc, TranslationAdapter& adapter,
                               const std::string& source_lang = "zh",
                               const std::string& target_lang = "en");

// Only EDUs whose source counterpart ends with a period may keep sentence
// final periods; the others get commas instead. Abbreviation periods
// ("e.g.", "etc.") inside the EDU are kept. Throws AlignmentError.
std::vector<Edu> AdjustPunctuation(std::vector<Edu> english, const std::vector<Edu>& source);

// Moves a relative pronoun/subordinator that ends an EDU to the front of the
// next EDU of the same sentence.
std::vector<Edu> AdjustRelativePronouns(
    std::vector<Edu> english,
    const std::vector<std::string>& pronouns = DefaultRelativePronouns());

// First sentence whose first EDU starts with a cue word.
std::optional<int> DetectTopicSentence(const DiscourseTree& doc,
                                       const std::vector<std::string>& cues = DefaultTopicCues());

// Parses the EDUs before `split_sentence` and the rest separately. The
// first EDU of the split sentence heads the second part and attaches to the
// root; the first part's root attaches to it. Falls back to ParseStructure
// when the split sentence is missing or starts the document.
DiscourseTree TwoPartParse(const DiscourseTree& doc, int split_sentence,
                           const ParserModel& model);

struct PipelineResult {
  DiscourseTree tree;     // over the source EDUs
  DiscourseTree english;  // translated, adjusted EDUs with the same arcs
  std::optional<int> topic_sentence;
};

// Throws AdapterError.
PipelineResult RunPipelineDetailed(const DiscourseTree& source_doc, const PipelineConfig& config,
                                   const ParserModel& model, TranslationAdapter& adapter);
DiscourseTree RunPipeline(const DiscourseTree& source_doc, const PipelineConfig& config,
                          const ParserModel& model, TranslationAdapter& adapter);

}  // namespace ddparse

#endif  // DDPARSE_PIPELINE_H_
