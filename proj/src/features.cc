#include "ddparse/features.h"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "ddparse/text.h"

namespace ddparse {

void FeatureVector::Add(const std::string& name, double value) {
  if (value == 0.0) return;
  double& slot = entries_[name];
  slot += value;
  if (slot == 0.0) entries_.erase(name);
}

FeatureVector FeatureVector::Scaled(double factor) const {
  FeatureVector out;
  for (const auto& [name, value] : entries_) out.Add(name, value * factor);
  return out;
}

std::string FeatureVector::Serialize() const {
  std::ostringstream out;
  char buf[32];
  for (const auto& [name, value] : entries_) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << name << '=' << buf << '\n';
  }
  return out.str();
}

namespace {

constexpr const char* kNone = "NONE";
constexpr const char* kRootWord = "<ROOT>";
constexpr const char* kEmptyWord = "<EMPTY>";

const char* LengthBucket(std::size_t n) {
  if (n <= 3) {
    static const char* small[] = {"0", "1", "2", "3"};
    return small[n];
  }
  if (n <= 6) return "4-6";
  if (n <= 10) return "7-10";
  return "11+";
}

std::string DistanceBucket(int d) {
  return LengthBucket(static_cast<std::size_t>(std::abs(d)));
}

std::string SignedDistance(int d) { return (d < 0 ? "-" : "+") + DistanceBucket(d); }

struct EduView {
  bool present = false;
  bool root = false;
  int sentence = 0;
  bool period = false;
  std::string first;
  std::string last;
  std::string first2;
  std::size_t length = 0;
};

EduView View(int id, std::span<const Edu> edus) {
  EduView v;
  if (id < 0 || id >= static_cast<int>(edus.size())) {
    v.first = v.last = v.first2 = kNone;
    return v;
  }
  v.present = true;
  const Edu& edu = edus[id];
  if (edu.is_root()) {
    v.root = true;
    v.first = v.last = v.first2 = kRootWord;
    return v;
  }
  v.sentence = edu.sentence_index;
  v.period = edu.ends_with_period;
  const auto tokens = text::Tokenize(edu.text);
  v.length = tokens.size();
  if (tokens.empty()) {
    v.first = v.last = v.first2 = kEmptyWord;
    return v;
  }
  v.first = text::AsciiLower(tokens.front());
  v.last = text::AsciiLower(tokens.back());
  v.first2 = v.first + "_" + (tokens.size() > 1 ? text::AsciiLower(tokens[1]) : kNone);
  return v;
}

void AddUnit(FeatureVector& fv, const std::string& p, const EduView& v) {
  fv.Add(p + ".first=" + v.first);
  if (!v.present) return;
  fv.Add(p + ".is_root=" + (v.root ? "true" : "false"));
  if (v.root) return;
  fv.Add(p + ".last=" + v.last);
  fv.Add(p + ".first2=" + v.first2);
  fv.Add(p + ".len=" + LengthBucket(v.length));
  fv.Add(p + ".period=" + (v.period ? "true" : "false"));
}

bool Real(const EduView& v) { return v.present && !v.root; }

}  // namespace

FeatureVector ExtractStructureFeatures(const ParserState& state, std::span<const Edu> edus) {
  const int s0_id = state.StackItem(0);
  const int s1_id = state.StackItem(1);
  const int b0_id = state.BufferFront();
  const EduView s0 = View(s0_id, edus);
  const EduView s1 = View(s1_id, edus);
  const EduView b0 = View(b0_id, edus);

  FeatureVector fv;
  AddUnit(fv, "s0", s0);
  AddUnit(fv, "s1", s1);
  AddUnit(fv, "b0", b0);

  auto pair = [&](const std::string& name, const EduView& a, int a_id, const EduView& b,
                  int b_id, int sign) {
    if (Real(a) && Real(b)) {
      fv.Add("same_sentence(" + name + ")=" + (a.sentence == b.sentence ? "true" : "false"));
      fv.Add("dist(" + name + ")=" + SignedDistance(sign * (b_id - a_id)));
    } else {
      fv.Add("same_sentence(" + name + ")=" + kNone);
      fv.Add("dist(" + name + ")=" + kNone);
    }
  };
  pair("s0,s1", s0, s0_id, s1, s1_id, -1);
  pair("s0,b0", s0, s0_id, b0, b0_id, 1);

  fv.Add("s0.first&s1.first=" + s0.first + "|" + s1.first);
  fv.Add("s0.first&b0.first=" + s0.first + "|" + b0.first);
  fv.Add("s1.first&b0.first=" + s1.first + "|" + b0.first);
  return fv;
}

FeatureVector ExtractRelationFeatures(const Arc& arc, std::span<const Edu> edus) {
  const EduView head = View(arc.head, edus);
  const EduView dep = View(arc.dependent, edus);
  FeatureVector fv;
  fv.Add(std::string("head.is_root=") + (head.root ? "true" : "false"));
  fv.Add("head.first=" + head.first);
  fv.Add("dep.first=" + dep.first);
  fv.Add("dep.last=" + dep.last);
  fv.Add("dep.first2=" + dep.first2);
  fv.Add(std::string("dep.len=") + LengthBucket(dep.length));
  fv.Add(std::string("dep.period=") + (dep.period ? "true" : "false"));
  const std::string direction = arc.head < arc.dependent ? "right" : "left";
  fv.Add("direction=" + direction);
  fv.Add("dist=" + DistanceBucket(arc.dependent - arc.head));
  if (!head.root) {
    fv.Add("head.last=" + head.last);
    fv.Add("head.first2=" + head.first2);
    fv.Add(std::string("head.period=") + (head.period ? "true" : "false"));
    fv.Add(std::string("same_sentence=") + (head.sentence == dep.sentence ? "true" : "false"));
  } else {
    fv.Add(std::string("same_sentence=") + kNone);
  }
  fv.Add("head.first&dep.first=" + head.first + "|" + dep.first);
  fv.Add("direction&dep.first=" + direction + "|" + dep.first);
  return fv;
}

}  // namespace ddparse
