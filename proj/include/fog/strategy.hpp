#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fog/exec.hpp"
#include "fog/game.hpp"
#include "fog/grammar.hpp"
#include "fog/term.hpp"

namespace fog {

// A prefix-closed set of plays, stored as a trie keyed by move pairs. The
// empty play is the root, so prefix closure and membership of (eps,eps) hold
// by construction. Children are ordered by rule index, which makes every
// traversal (and therefore every reported witness) deterministic.
class PlaySet {
 public:
  PlaySet();  // the singleton {(eps,eps)}

  static PlaySet from_plays(std::span<const Play> plays);
  static PlaySet from_plays(std::initializer_list<Play> plays) {
    return from_plays(std::span<const Play>(plays.begin(), plays.size()));
  }

  bool contains(const Play& alpha) const;

  // { beta | alpha . beta in S }. Throws Error when alpha is not in S.
  PlaySet residual(const Play& alpha) const;

  // Move pairs that extend alpha by one round. Throws Error when alpha is
  // not in S.
  MovePairSet moves_after(const Play& alpha) const;

  // All plays, shortest first, ties by rule index (length-lex order).
  std::vector<Play> plays() const;

  // Plays with no extension in S.
  std::vector<Play> maximal_plays() const;

  // Visits every play together with its one-round extensions, in length-lex
  // order.
  void for_each_node(
      const std::function<void(const Play&, const MovePairSet&)>& fn) const;

  std::size_t size() const { return nodes_.size(); }  // number of plays
  int max_length() const;

  bool operator==(const PlaySet& other) const;

 private:
  struct Node {
    std::map<MovePair, int> children;
  };
  std::vector<Node> nodes_;  // 0 = root

  int node_at(const Play& alpha) const;  // -1 when absent
  void insert(const Play& alpha);
};

// Strategy file format: one play per line, rounds separated by spaces, each
// round `leftRule:rightRule`. '#' comments and blank lines are skipped; the
// result is the prefix closure of the listed plays.
struct PlaySetParseResult {
  std::optional<PlaySet> set;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return set.has_value(); }
};
PlaySetParseResult parse_playset(const Grammar& g, std::string_view text);
std::string playset_to_text(const Grammar& g, const PlaySet& s);
std::string play_to_string(const Grammar& g, const Play& alpha);  // "" for eps

// A strategy given by a move generator instead of an explicit play set; the
// representation for strategies whose play set is unbounded. Checkers only
// ever see finite materializations.
struct IntensionalStrategy {
  TermPair base;
  std::function<MovePairSet(const Grammar&, const TermPair&)> moves_at;
};

// Pairs every rule enabled on both sides with itself. On a position (T,T)
// this is the usual identity strategy.
IntensionalStrategy identity_strategy(const Grammar& g, const Term& t);

// The plays of s of length <= depth, as a trie. Moves that are not actually
// playable at their position are dropped.
PlaySet materialize(const Grammar& g, const IntensionalStrategy& s, int depth);

enum class Condition { none, dq1, dq2, dq3, dq4, dq_prime4, dq_dprime4, char2 };
std::string_view condition_name(Condition c);  // "DQ4", "DQ'4", "CHAR-2", ...

struct StrategyVerdict {
  bool accepted = false;
  Condition violated = Condition::none;
  std::optional<Play> witness;
  // Maximum play length; set when check_finite_prefix accepts.
  int prefix_depth = -1;
};

// {accepted, violated_condition, witness} with nulls where absent.
nlohmann::ordered_json verdict_to_json(const Grammar& g, const StrategyVerdict& v);

// Defender-quasi-strategy check: every play must be valid from p (DQ3), and
// at every play the residual is trivial, or the reached position is not
// level-1 equivalent, or the continuation moves are full for it (DQ4).
// DQ1/DQ2 hold by construction of PlaySet. The witness is the length-lex
// least play violating the first failed condition.
StrategyVerdict check_dq(const Grammar& g, const TermPair& p, const PlaySet& s);

// Defender-strategy check: as check_dq, but a trivial residual no longer
// excuses a play (DQ'4).
StrategyVerdict check_d(const Grammar& g, const TermPair& p, const PlaySet& s);

// Winning-strategy check: every reached position must be level-1 equivalent
// with full continuation moves (DQ''4); in particular every maximal play
// must end in a position with no enabled rules at all.
StrategyVerdict check_winning(const Grammar& g, const TermPair& p, const PlaySet& s);

// Winning check for an intensional strategy: materializes up to depth_cap
// and throws Error when the play space is still growing at the cap.
StrategyVerdict check_winning(const Grammar& g, const IntensionalStrategy& s,
                              int depth_cap);

// Decides whether s is a depth-n truncation of some defender strategy, for
// n the maximum play length of s: s must pass check_dq and every maximal
// play must either have length n or end in a non-level-1 position (reported
// as CHAR-2 otherwise).
StrategyVerdict check_finite_prefix(const Grammar& g, const TermPair& p,
                                    const PlaySet& s);

// Extension order: s2 adds plays only below maximal elements of s1.
bool extension_leq(const PlaySet& s1, const PlaySet& s2);

// Views each play as a pair of rule words and composes the two relations,
// inverting the first: the result holds the plays whose word pair lies in
// { (u,w) | exists v: (v,u) in s_a and (v,w) in s_b }. Word pairs of unequal
// length have no play form and are dropped. Returns a prefix closure.
PlaySet indstr(const PlaySet& s_a, const PlaySet& s_b);

// Rounds the defender survives playing within s against an attacker that
// attacks optimally w.r.t. the unconstrained game (always choosing an attack
// that realizes the position's equivalence level). A position with no
// enabled rules on either side is never lost (Infinite); a position whose
// move set in s is not full is lost immediately (Exact(0)). When the
// reachable term space does not close within `budget` states the attacker's
// level-optimal choices are unknown, and the value of the unrestricted
// min-max game is reported as a lower bound (AtLeast).
EqLevel strategy_eq_level(const Grammar& g, const TermPair& p, const PlaySet& s,
                          std::size_t budget, Exec exec = Exec::parallel);
EqLevel strategy_eq_level(const Grammar& g, const IntensionalStrategy& s,
                          std::size_t budget, Exec exec = Exec::parallel);

// Lifts pairs of label words to a play set from a start position, resolving
// each label to the unique enabled rule carrying it. Throws Error when a
// label resolves to no rule or to more than one.
PlaySet playset_from_label_words(
    const Grammar& g, const TermPair& start,
    std::span<const std::pair<std::vector<int>, std::vector<int>>> word_pairs);

}  // namespace fog
