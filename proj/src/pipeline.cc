#include "ddparse/pipeline.h"

#include <algorithm>
#include <array>

#include "ddparse/errors.h"
#include "ddparse/text.h"

namespace ddparse {

const std::vector<std::string>& DefaultTopicCues() {
  static const std::vector<std::string> cues = {"该文", "本文", "该研究", "本研究", "该方法"};
  return cues;
}

const std::vector<std::string>& DefaultRelativePronouns() {
  static const std::vector<std::string> words = {"that", "which", "who", "whom",
                                                 "whose", "where", "when"};
  return words;
}

std::vector<Edu> TranslateEdus(const DiscourseTree& doc, TranslationAdapter& adapter,
                               const std::string& source_lang, const std::string& target_lang) {
  std::vector<Edu> out;
  out.reserve(doc.edus.size());
  for (const Edu& edu : doc.edus) {
    if (edu.is_root()) {
      out.push_back(edu);
      continue;
    }
    Edu translated = edu;
    try {
      translated.text = adapter.Translate(edu.text, source_lang, target_lang);
    } catch (const std::exception& e) {
      throw AdapterError(edu.id, e.what());
    }
    if (text::Trim(translated.text).empty()) throw AdapterError(edu.id, "empty translation");
    out.push_back(std::move(translated));
  }
  return out;
}

namespace {

bool AsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsAbbreviation(std::string_view token) {
  static const std::array<std::string_view, 18> known = {
      "etc.", "al.", "vs.", "fig.", "figs.", "eq.", "eqs.", "cf.", "dr.",
      "mr.", "mrs.", "ms.", "no.", "approx.", "resp.", "sec.", "ref.", "refs."};
  const std::string lower = text::AsciiLower(token);
  if (std::find(known.begin(), known.end(), lower) != known.end()) return true;
  // Dotted forms such as "e.g." or "U.S.".
  return lower.size() > 1 && lower.find('.') < lower.size() - 1;
}

std::string ReplaceFinalPeriods(const std::string& s) {
  std::size_t end = s.size();
  while (end > 0 && AsciiSpace(s[end - 1])) --end;
  std::string out = s;
  for (std::size_t i = 0; i < end; ++i) {
    if (s[i] != '.') continue;
    if (i + 1 == end) {
      out[i] = ',';
      continue;
    }
    if (!AsciiSpace(s[i + 1])) continue;
    std::size_t start = i;
    while (start > 0 && !AsciiSpace(s[start - 1])) --start;
    if (!IsAbbreviation(std::string_view(s).substr(start, i + 1 - start))) out[i] = ',';
  }
  return out;
}

bool HasWordCharacter(std::string_view s) {
  for (char32_t cp : text::Decode(s)) {
    if (!text::IsSpace(cp) && !text::IsPunct(cp)) return true;
  }
  return false;
}

// Splits off a trailing relative pronoun. Returns false when `edu` does not
// end with one.
bool TakeTrailingWord(const std::string& edu, const std::vector<std::string>& words,
                      std::string& rest, std::string& word) {
  const std::string trimmed = text::Trim(edu);
  const auto cps = text::Decode(trimmed);
  std::size_t word_end = cps.size();
  while (word_end > 0 && text::IsPunct(cps[word_end - 1])) --word_end;
  std::size_t word_start = word_end;
  while (word_start > 0 && !text::IsSpace(cps[word_start - 1])) --word_start;
  if (word_start == word_end) return false;
  std::string candidate;
  for (std::size_t i = word_start; i < word_end; ++i) candidate += text::Encode(cps[i]);
  const std::string lower = text::AsciiLower(candidate);
  if (std::find(words.begin(), words.end(), lower) == words.end()) return false;

  std::string head;
  for (std::size_t i = 0; i < word_start; ++i) head += text::Encode(cps[i]);
  std::string tail;
  for (std::size_t i = word_end; i < cps.size(); ++i) tail += text::Encode(cps[i]);
  rest = text::Trim(head) + tail;
  if (!HasWordCharacter(rest)) rest = std::string(kEmptyEduText);
  word = candidate;
  return true;
}

void CheckAligned(const std::vector<Edu>& a, const std::vector<Edu>& b) {
  if (a.size() != b.size()) {
    throw AlignmentError("EDU lists differ in length: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id) throw AlignmentError("EDU ids differ at position " + std::to_string(i));
  }
}

}  // namespace

std::vector<Edu> AdjustPunctuation(std::vector<Edu> english, const std::vector<Edu>& source) {
  CheckAligned(english, source);
  for (std::size_t i = 0; i < english.size(); ++i) {
    if (english[i].is_root() || source[i].ends_with_period) continue;
    english[i].text = ReplaceFinalPeriods(english[i].text);
  }
  return english;
}

std::vector<Edu> AdjustRelativePronouns(std::vector<Edu> english,
                                        const std::vector<std::string>& pronouns) {
  for (std::size_t i = 1; i + 1 < english.size(); ++i) {
    Edu& cur = english[i];
    Edu& next = english[i + 1];
    if (cur.sentence_index != next.sentence_index) continue;
    std::string rest;
    std::string word;
    while (cur.text != kEmptyEduText && TakeTrailingWord(cur.text, pronouns, rest, word)) {
      cur.text = rest;
      const std::string following = text::Trim(next.text);
      next.text = following.empty() || following == kEmptyEduText ? word : word + " " + following;
    }
  }
  return english;
}

std::optional<int> DetectTopicSentence(const DiscourseTree& doc,
                                       const std::vector<std::string>& cues) {
  for (int i = 1; i <= doc.size(); ++i) {
    const Edu& edu = doc.edus[i];
    if (i > 1 && doc.edus[i - 1].sentence_index == edu.sentence_index) continue;
    const std::string start = text::Trim(edu.text);
    for (const auto& cue : cues) {
      if (!cue.empty() && text::StartsWith(start, cue)) return edu.sentence_index;
    }
  }
  return std::nullopt;
}

DiscourseTree TwoPartParse(const DiscourseTree& doc, int split_sentence,
                           const ParserModel& model) {
  int split = 0;
  for (int i = 1; i <= doc.size(); ++i) {
    if (doc.edus[i].sentence_index == split_sentence) {
      split = i;
      break;
    }
  }
  if (split <= 1) return ParseStructure(doc, model);

  auto part = [&](int first, int last) {
    std::vector<Edu> edus(doc.edus.begin() + first, doc.edus.begin() + last + 1);
    return MakeDocument(doc.doc_id, std::move(edus));
  };
  const DiscourseTree before = ParseStructure(part(1, split - 1), model);
  ParseOptions anchored;
  anchored.anchor_first_edu = true;
  const DiscourseTree after = ParseStructure(part(split, doc.size()), model, anchored);

  DiscourseTree out;
  out.doc_id = doc.doc_id;
  out.edus = doc.edus;
  for (const Arc& arc : before.arcs) {
    const int head = arc.head == kRootId ? split : arc.head;
    out.arcs.push_back(Arc{head, arc.dependent, ""});
  }
  const int offset = split - 1;
  for (const Arc& arc : after.arcs) {
    const int head = arc.head == kRootId ? kRootId : arc.head + offset;
    out.arcs.push_back(Arc{head, arc.dependent + offset, ""});
  }
  out.SortArcs();
  return out;
}

PipelineResult RunPipelineDetailed(const DiscourseTree& source_doc, const PipelineConfig& config,
                                   const ParserModel& model, TranslationAdapter& adapter) {
  std::vector<Edu> english =
      TranslateEdus(source_doc, adapter, config.source_lang, config.target_lang);
  if (config.punct_fix) english = AdjustPunctuation(std::move(english), source_doc.edus);
  if (config.pronoun_fix) {
    english = AdjustRelativePronouns(std::move(english), config.relative_pronouns);
  }

  PipelineResult result;
  result.english.doc_id = source_doc.doc_id;
  result.english.edus = std::move(english);
  result.topic_sentence = DetectTopicSentence(source_doc, config.topic_cues);

  DiscourseTree structure = config.two_part && result.topic_sentence
                                ? TwoPartParse(result.english, *result.topic_sentence, model)
                                : ParseStructure(result.english, model);
  DiscourseTree labeled = LabelRelations(std::move(structure), model);
  result.english.arcs = labeled.arcs;

  result.tree.doc_id = source_doc.doc_id;
  result.tree.edus = source_doc.edus;
  result.tree.arcs = std::move(labeled.arcs);
  return result;
}

DiscourseTree RunPipeline(const DiscourseTree& source_doc, const PipelineConfig& config,
                          const ParserModel& model, TranslationAdapter& adapter) {
  return RunPipelineDetailed(source_doc, config, model, adapter).tree;
}

}  // namespace ddparse
