#include "ddparse/transition.h"

#include <stdexcept>
#include <string>

#include "ddparse/errors.h"

namespace ddparse {

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kShift: return "SHIFT";
    case Action::kLeftArc: return "LEFT_ARC";
    case Action::kRightArc: return "RIGHT_ARC";
  }
  return "?";
}

Action ParseAction(std::string_view name) {
  for (Action a : kAllActions) {
    if (ActionName(a) == name) return a;
  }
  throw std::invalid_argument("unknown action: " + std::string(name));
}

std::vector<Action> ActionSet::ToVector() const {
  std::vector<Action> out;
  for (Action a : kAllActions) {
    if (Contains(a)) out.push_back(a);
  }
  return out;
}

ParserState ParserState::Initial(int k) {
  if (k < 1) throw InvalidCount("EDU count must be at least 1, got " + std::to_string(k));
  ParserState s;
  s.k_ = k;
  s.next_ = 1;
  s.stack_.reserve(k + 1);
  s.stack_.push_back(kRootId);
  s.arcs_.reserve(k);
  return s;
}

std::vector<int> ParserState::buffer() const {
  std::vector<int> out;
  for (int i = next_; i <= k_; ++i) out.push_back(i);
  return out;
}

bool ParserState::IsTerminal() const {
  return BufferEmpty() && stack_.size() == 1 && stack_[0] == kRootId;
}

int ParserState::StackItem(int depth) const {
  const int n = static_cast<int>(stack_.size());
  return depth < n ? stack_[n - 1 - depth] : -1;
}

ActionSet ParserState::LegalActions() const {
  if (IsTerminal()) throw TerminalState();
  ActionSet legal;
  if (!BufferEmpty()) legal.Add(Action::kShift);
  if (stack_.size() >= 2) {
    const int second = StackItem(1);
    if (second != kRootId) legal.Add(Action::kLeftArc);
    if (second != kRootId || BufferEmpty()) legal.Add(Action::kRightArc);
  }
  return legal;
}

ParserState ParserState::Apply(Action a) const {
  if (IsTerminal() || !LegalActions().Contains(a)) {
    throw IllegalAction(std::string(ActionName(a)) + " is not legal (stack size " +
                        std::to_string(stack_.size()) + ", buffer size " +
                        std::to_string(k_ - next_ + 1) + ")");
  }
  ParserState s = *this;
  switch (a) {
    case Action::kShift:
      s.stack_.push_back(s.next_++);
      break;
    case Action::kLeftArc: {
      const int top = s.stack_.back();
      const int second = s.stack_[s.stack_.size() - 2];
      s.arcs_.emplace_back(top, second);
      s.stack_.erase(s.stack_.end() - 2);
      break;
    }
    case Action::kRightArc: {
      const int top = s.stack_.back();
      const int second = s.stack_[s.stack_.size() - 2];
      s.arcs_.emplace_back(second, top);
      s.stack_.pop_back();
      break;
    }
  }
  return s;
}

std::vector<Action> OracleActions(const DiscourseTree& tree) {
  const int k = tree.size();
  const auto gold = tree.Heads();
  std::vector<int> pending(k + 1, 0);  // unattached gold dependents per EDU
  for (int d = 1; d <= k; ++d) {
    if (gold[d] == kNoHead) throw NonProjective(tree.doc_id);
    ++pending[gold[d]];
  }

  std::vector<Action> actions;
  actions.reserve(2 * k);
  ParserState state = ParserState::Initial(k);
  while (!state.IsTerminal()) {
    const ActionSet legal = state.LegalActions();
    const int top = state.StackItem(0);
    const int second = state.StackItem(1);
    Action next = Action::kShift;
    if (legal.Contains(Action::kLeftArc) && gold[second] == top) {
      next = Action::kLeftArc;
      --pending[top];
    } else if (legal.Contains(Action::kRightArc) && gold[top] == second &&
               pending[top] == 0) {
      next = Action::kRightArc;
      --pending[second];
    } else if (!legal.Contains(Action::kShift)) {
      throw NonProjective(tree.doc_id);
    }
    actions.push_back(next);
    state = state.Apply(next);
  }
  return actions;
}

DiscourseTree Replay(const DiscourseTree& doc, const std::vector<Action>& actions) {
  ParserState state = ParserState::Initial(doc.size());
  for (Action a : actions) state = state.Apply(a);
  DiscourseTree out;
  out.doc_id = doc.doc_id;
  out.edus = doc.edus;
  for (const auto& [h, d] : state.arcs()) out.arcs.push_back(Arc{h, d, ""});
  out.SortArcs();
  return out;
}

}  // namespace ddparse
