#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fog/exec.hpp"
#include "fog/grammar.hpp"
#include "fog/term.hpp"

namespace fog {

// One game round: the rule fired on the left term paired with the rule fired
// on the right term.
using MovePair = std::pair<int, int>;

// A play is a sequence of rounds.
using Play = std::vector<MovePair>;

// A finite set of move pairs, kept sorted and duplicate-free.
using MovePairSet = std::vector<MovePair>;

MovePairSet make_move_pair_set(std::vector<MovePair> pairs);

// An equivalence level: an exact natural number, infinity (bisimilar), or a
// lower bound reported when exploration ran out of budget.
class EqLevel {
 public:
  enum class Kind { exact, infinite, at_least };

  static EqLevel exact(unsigned n) { return EqLevel(Kind::exact, n); }
  static EqLevel infinite() { return EqLevel(Kind::infinite, 0); }
  static EqLevel at_least(unsigned n) { return EqLevel(Kind::at_least, n); }

  Kind kind() const { return kind_; }
  unsigned n() const { return n_; }
  bool is_exact(unsigned m) const { return kind_ == Kind::exact && n_ == m; }
  bool is_infinite() const { return kind_ == Kind::infinite; }

  bool operator==(const EqLevel&) const = default;

  std::string to_string() const;  // "Exact(3)" | "Infinite" | "AtLeast(7)"

 private:
  EqLevel(Kind k, unsigned n) : kind_(k), n_(n) {}
  Kind kind_;
  unsigned n_;
};

// True iff, played from p, every step of alpha fires a rule enabled on the
// respective side and both rules of each step carry the same action.
bool is_play(const Grammar& g, const TermPair& p, const Play& alpha);

// The position reached from p after alpha. Throws Error unless is_play.
TermPair next_pair(const Grammar& g, const TermPair& p, const Play& alpha);

// Level-1 equivalence: both terms enable the same set of actions.
bool sim1(const Grammar& g, const TermPair& p);

// True iff the move-pair set answers every attack at p: each rule enabled on
// the left occurs as a left component with its partner enabled on the right,
// and symmetrically. Throws Error when a pair in `moves` has mismatched
// actions.
bool full_for(const Grammar& g, const MovePairSet& moves, const TermPair& p);

// Stratified equivalence: level 0 relates everything; p is at level n+1 iff
// every attack on either side has a same-action response whose successor
// pair is at level n.
bool strat_equiv(const Grammar& g, const TermPair& p, unsigned n);

// The equivalence level of p: Exact(n) iff p is at level n but not n+1,
// Infinite iff bisimilar. Decided by exploring the terms reachable from both
// sides (capped at `budget` states) and refining the universal partition;
// when the exploration does not close, AtLeast(d) reports the deepest level
// that the complete part of the exploration still certifies.
EqLevel eq_level(const Grammar& g, const TermPair& p, std::size_t budget,
                 Exec exec = Exec::parallel);

}  // namespace fog
