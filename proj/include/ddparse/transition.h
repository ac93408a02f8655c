#ifndef DDPARSE_TRANSITION_H_
#define DDPARSE_TRANSITION_H_

// Arc-standard transition system over EDUs.
//
//  - SHIFT moves the buffer front onto the stack.
//  - LEFT_ARC attaches the second stack item to the top and removes it.
//  - RIGHT_ARC attaches the top to the second stack item and pops it.
//
// The artificial root starts on the stack and may only take its dependent
// once the buffer is empty, so every complete derivation has one root arc.

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "ddparse/treebank.h"

namespace ddparse {

// Declaration order is the tie-break order used by greedy decoding.
enum class Action : int { kShift = 0, kLeftArc = 1, kRightArc = 2 };
inline constexpr std::array<Action, 3> kAllActions = {Action::kShift, Action::kLeftArc,
                                                      Action::kRightArc};

std::string_view ActionName(Action a);
// Throws std::invalid_argument on unknown names.
Action ParseAction(std::string_view name);

class ActionSet {
 public:
  void Add(Action a) { bits_ |= Bit(a); }
  bool Contains(Action a) const { return (bits_ & Bit(a)) != 0; }
  void Remove(Action a) { bits_ &= ~Bit(a); }
  bool empty() const { return bits_ == 0; }
  int size() const { return __builtin_popcount(bits_); }
  std::vector<Action> ToVector() const;
  friend bool operator==(const ActionSet&, const ActionSet&) = default;

 private:
  static unsigned Bit(Action a) { return 1u << static_cast<int>(a); }
  unsigned bits_ = 0;
};

// Immutable arc-standard configuration.
class ParserState {
 public:
  // Throws InvalidCount if k < 1.
  static ParserState Initial(int k);

  int num_edus() const { return k_; }
  // Bottom to top.
  const std::vector<int>& stack() const { return stack_; }
  std::vector<int> buffer() const;
  // (head, dependent) in attachment order.
  const std::vector<std::pair<int, int>>& arcs() const { return arcs_; }

  bool IsTerminal() const;
  // depth 0 = top; -1 when absent.
  int StackItem(int depth) const;
  // -1 when the buffer is empty.
  int BufferFront() const { return next_ <= k_ ? next_ : -1; }
  bool BufferEmpty() const { return next_ > k_; }

  // Throws TerminalState.
  ActionSet LegalActions() const;
  // Throws IllegalAction when `a` is not legal here.
  ParserState Apply(Action a) const;

  friend bool operator==(const ParserState&, const ParserState&) = default;

 private:
  ParserState() = default;

  int k_ = 0;
  int next_ = 1;
  std::vector<int> stack_;
  std::vector<std::pair<int, int>> arcs_;
};

inline ParserState InitialState(int k) { return ParserState::Initial(k); }
inline ActionSet LegalActions(const ParserState& s) { return s.LegalActions(); }
inline ParserState Apply(const ParserState& s, Action a) { return s.Apply(a); }

// Static oracle. Throws NonProjective when the gold arcs cannot be derived
// (crossing arcs, or more than one dependent of the root).
std::vector<Action> OracleActions(const DiscourseTree& tree);

// Replays actions from the initial state and returns the unlabeled tree.
// Throws IllegalAction.
DiscourseTree Replay(const DiscourseTree& doc, const std::vector<Action>& actions);

}  // namespace ddparse

#endif  // DDPARSE_TRANSITION_H_
