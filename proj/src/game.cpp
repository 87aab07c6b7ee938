#include "fog/game.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "fog/refinement.hpp"

namespace fog {

MovePairSet make_move_pair_set(std::vector<MovePair> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::string EqLevel::to_string() const {
  switch (kind_) {
    case Kind::exact:
      return "Exact(" + std::to_string(n_) + ")";
    case Kind::infinite:
      return "Infinite";
    case Kind::at_least:
      return "AtLeast(" + std::to_string(n_) + ")";
  }
  return "?";
}

namespace {

bool rule_enabled(const Grammar& g, const Term& t, int rule) {
  return !t.is_bot() && rule >= 0 && rule < static_cast<int>(g.rules().size()) &&
         g.rules()[static_cast<std::size_t>(rule)].head == t.head();
}

std::set<int> enabled_actions(const Grammar& g, const Term& t) {
  std::set<int> actions;
  if (t.is_bot()) return actions;
  for (int r : g.rules_for_head(t.head())) {
    actions.insert(g.rules()[static_cast<std::size_t>(r)].action);
  }
  return actions;
}

}  // namespace

bool is_play(const Grammar& g, const TermPair& p, const Play& alpha) {
  TermPair current = p;
  for (const MovePair& mv : alpha) {
    if (!rule_enabled(g, current.left, mv.first) ||
        !rule_enabled(g, current.right, mv.second) ||
        act(g, mv.first) != act(g, mv.second)) {
      return false;
    }
    current.left = apply_rule(g, current.left, mv.first);
    current.right = apply_rule(g, current.right, mv.second);
  }
  return true;
}

TermPair next_pair(const Grammar& g, const TermPair& p, const Play& alpha) {
  TermPair current = p;
  for (const MovePair& mv : alpha) {
    if (!rule_enabled(g, current.left, mv.first) ||
        !rule_enabled(g, current.right, mv.second) ||
        act(g, mv.first) != act(g, mv.second)) {
      throw Error("not a play from the given position");
    }
    current.left = apply_rule(g, current.left, mv.first);
    current.right = apply_rule(g, current.right, mv.second);
  }
  return current;
}

bool sim1(const Grammar& g, const TermPair& p) {
  return enabled_actions(g, p.left) == enabled_actions(g, p.right);
}

bool full_for(const Grammar& g, const MovePairSet& moves, const TermPair& p) {
  for (const MovePair& mv : moves) {
    if (act(g, mv.first) != act(g, mv.second)) {
      throw Error("move pair with mismatched actions");
    }
  }
  auto covered = [&](int rule, bool left_side) {
    for (const MovePair& mv : moves) {
      int attacker = left_side ? mv.first : mv.second;
      int responder = left_side ? mv.second : mv.first;
      const Term& other = left_side ? p.right : p.left;
      if (attacker == rule && rule_enabled(g, other, responder)) return true;
    }
    return false;
  };
  if (!p.left.is_bot()) {
    for (int r : g.rules_for_head(p.left.head())) {
      if (!covered(r, true)) return false;
    }
  }
  if (!p.right.is_bot()) {
    for (int r : g.rules_for_head(p.right.head())) {
      if (!covered(r, false)) return false;
    }
  }
  return true;
}

namespace {

struct PairLevelKey {
  Term left;
  Term right;
  unsigned n;
  bool operator==(const PairLevelKey&) const = default;
};

struct PairLevelHash {
  std::size_t operator()(const PairLevelKey& k) const {
    std::size_t h = k.left.hash();
    h = h * 31 + k.right.hash();
    return h * 31 + k.n;
  }
};

using LevelMemo = std::unordered_map<PairLevelKey, bool, PairLevelHash>;

bool strat_equiv_memo(const Grammar& g, const TermPair& p, unsigned n, LevelMemo& memo);

// Every attack by a rule of `attacker` must have a same-action response on
// `defender` whose successor pair stays at level n-1.
bool side_covered(const Grammar& g, const Term& attacker, const Term& defender,
                  bool attacker_is_left, unsigned n, LevelMemo& memo) {
  if (attacker.is_bot()) return true;
  for (int r : g.rules_for_head(attacker.head())) {
    Term attacked = apply_rule(g, attacker, r);
    bool answered = false;
    if (!defender.is_bot()) {
      for (int q : g.rules_for_head(defender.head())) {
        if (act(g, q) != act(g, r)) continue;
        Term response = apply_rule(g, defender, q);
        TermPair child = attacker_is_left ? TermPair{attacked, response}
                                          : TermPair{response, attacked};
        if (strat_equiv_memo(g, child, n - 1, memo)) {
          answered = true;
          break;
        }
      }
    }
    if (!answered) return false;
  }
  return true;
}

bool strat_equiv_memo(const Grammar& g, const TermPair& p, unsigned n, LevelMemo& memo) {
  if (n == 0) return true;
  PairLevelKey key{p.left, p.right, n};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  bool value = side_covered(g, p.left, p.right, true, n, memo) &&
               side_covered(g, p.right, p.left, false, n, memo);
  memo.emplace(std::move(key), value);
  return value;
}

}  // namespace

bool strat_equiv(const Grammar& g, const TermPair& p, unsigned n) {
  if (!term_well_formed(g, p.left) || !term_well_formed(g, p.right)) {
    throw Error("term references a nonterminal not in the grammar");
  }
  LevelMemo memo;
  return strat_equiv_memo(g, p, n, memo);
}

EqLevel eq_level(const Grammar& g, const TermPair& p, std::size_t budget, Exec exec) {
  if (budget == 0) throw Error("budget must be positive");
  if (p.left == p.right) {
    if (!term_well_formed(g, p.left)) {
      throw Error("term references a nonterminal not in the grammar");
    }
    return EqLevel::infinite();
  }
  Term roots[2] = {p.left, p.right};
  Lts lts = explore(g, roots, budget);
  int u = lts.state_of(p.left);
  int v = lts.state_of(p.right);

  std::vector<int> current(lts.states.size(), 0);
  unsigned round = 0;
  // On a capped exploration the partition is only meaningful for as many
  // rounds as there are fully expanded levels.
  unsigned round_limit = lts.closed ? static_cast<unsigned>(lts.states.size()) + 1
                                    : static_cast<unsigned>(lts.complete_depth);
  while (round < round_limit) {
    std::vector<int> next = refine_round(lts, current, exec);
    ++round;
    if (next[static_cast<std::size_t>(u)] != next[static_cast<std::size_t>(v)]) {
      return EqLevel::exact(round - 1);
    }
    if (next == current) {
      // Stable partition: further rounds cannot separate the roots. Only a
      // closed exploration makes that a proof of bisimilarity.
      break;
    }
    current = std::move(next);
  }
  if (lts.closed) return EqLevel::infinite();
  return EqLevel::at_least(static_cast<unsigned>(lts.complete_depth));
}

}  // namespace fog
