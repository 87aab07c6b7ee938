#pragma once

// Seeded random instances for the property suites: small unary grammars
// (optionally acyclic), terms over them, and defender strategies grown
// against the game semantics.

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fog/game.hpp"
#include "fog/grammar.hpp"
#include "fog/strategy.hpp"

namespace testgen {

// Up to four unary nonterminals, up to ten rules, right-hand sides of depth
// at most one. With `acyclic` set, applications only mention nonterminals of
// strictly larger index, so every play terminates.
inline fog::Grammar random_grammar(std::mt19937& rng, bool acyclic) {
  std::uniform_int_distribution<int> nts_dist(1, 4);
  int nts = nts_dist(rng);
  std::uniform_int_distribution<int> rules_dist(1, 10);
  int rules = rules_dist(rng);
  std::uniform_int_distribution<int> label_dist(0, 2);

  std::ostringstream out;
  out << "actions a b\n";
  out << "labels x->a y->a z->b\n";  // two labels share an action
  out << "nt";
  for (int i = 0; i < nts; ++i) out << " N" << i << ":1";
  out << "\n";
  const char* labels[3] = {"x", "y", "z"};
  for (int r = 0; r < rules; ++r) {
    std::uniform_int_distribution<int> head_dist(0, nts - 1);
    int head = head_dist(rng);
    out << "rule r" << (r + 1) << " N" << head << "(v) " << labels[label_dist(rng)]
        << " ";
    int lo = acyclic ? head + 1 : 0;
    bool can_apply = lo < nts;
    std::uniform_int_distribution<int> shape_dist(0, can_apply ? 3 : 1);
    switch (shape_dist(rng)) {
      case 0:
        out << "v";
        break;
      case 1:
        out << "bot";
        break;
      default: {
        std::uniform_int_distribution<int> target_dist(lo, nts - 1);
        out << "N" << target_dist(rng) << "("
            << (shape_dist(rng) % 2 ? "v" : "bot") << ")";
        break;
      }
    }
    out << "\n";
  }
  fog::GrammarParseResult result = fog::parse_grammar(out.str());
  if (!result.ok()) throw fog::Error("random grammar failed to parse");
  return std::move(*result.grammar);
}

inline fog::Term random_term(std::mt19937& rng, const fog::Grammar& g, int max_depth) {
  std::uniform_int_distribution<int> stop(0, 2);
  if (max_depth == 0 || stop(rng) == 0) return fog::Term::bot();
  std::uniform_int_distribution<int> nt_dist(
      0, static_cast<int>(g.nonterminals().size()) - 1);
  return fog::Term::app(nt_dist(rng), {random_term(rng, g, max_depth - 1)});
}

inline fog::TermPair random_pair(std::mt19937& rng, const fog::Grammar& g,
                                 int max_depth = 3) {
  return {random_term(rng, g, max_depth), random_term(rng, g, max_depth)};
}

// A full response set at p: every attack on either side is paired with one
// same-action response, chosen at random. Empty when p is not level-1
// equivalent (some attack has no response).
inline std::vector<fog::MovePair> random_full_moves(std::mt19937& rng,
                                                    const fog::Grammar& g,
                                                    const fog::TermPair& p) {
  std::vector<fog::MovePair> moves;
  auto cover = [&](const fog::Term& attacker, const fog::Term& defender,
                   bool attacker_left) {
    if (attacker.is_bot()) return true;
    for (int r : fog::enabled_rules(g, attacker)) {
      std::vector<int> responses;
      if (!defender.is_bot()) {
        for (int q : fog::enabled_rules(g, defender)) {
          if (fog::act(g, q) == fog::act(g, r)) responses.push_back(q);
        }
      }
      if (responses.empty()) return false;
      std::uniform_int_distribution<std::size_t> pick(0, responses.size() - 1);
      int q = responses[pick(rng)];
      moves.push_back(attacker_left ? fog::MovePair{r, q} : fog::MovePair{q, r});
    }
    return true;
  };
  if (!cover(p.left, p.right, true)) return {};
  if (!cover(p.right, p.left, false)) return {};
  return fog::make_move_pair_set(std::move(moves));
}

// Grows a play set that check_dq accepts by construction: at every kept node
// the continuation is either empty (allowed by DQ4) or a full response set.
inline void grow_dq_strategy(std::mt19937& rng, const fog::Grammar& g,
                             const fog::TermPair& p, int depth, fog::Play& prefix,
                             std::vector<fog::Play>& plays) {
  if (plays.size() > 20000) throw fog::Error("dq-strategy sample too large");
  plays.push_back(prefix);
  if (depth == 0) return;
  if (!fog::sim1(g, p)) return;
  std::uniform_int_distribution<int> stop(0, 3);
  if (stop(rng) == 0) return;
  for (const fog::MovePair& mv : random_full_moves(rng, g, p)) {
    fog::TermPair child{fog::apply_rule(g, p.left, mv.first),
                        fog::apply_rule(g, p.right, mv.second)};
    prefix.push_back(mv);
    grow_dq_strategy(rng, g, child, depth - 1, prefix, plays);
    prefix.pop_back();
  }
}

// May fail on a pathological sample (guarded blow-up); callers resample.
inline std::optional<fog::PlaySet> random_dq_strategy(std::mt19937& rng,
                                                      const fog::Grammar& g,
                                                      const fog::TermPair& p,
                                                      int depth = 4) {
  std::vector<fog::Play> plays;
  fog::Play prefix;
  try {
    grow_dq_strategy(rng, g, p, depth, prefix, plays);
  } catch (const fog::Error&) {
    return std::nullopt;
  }
  return fog::PlaySet::from_plays(plays);
}

// Grows a defender strategy on an acyclic grammar: at every level-1
// equivalent node the full response set is mandatory, so check_d accepts the
// result. Termination comes from acyclicity.
inline void grow_d_strategy(std::mt19937& rng, const fog::Grammar& g,
                            const fog::TermPair& p, fog::Play& prefix,
                            std::vector<fog::Play>& plays) {
  if (plays.size() > 20000) throw fog::Error("d-strategy sample too large");
  plays.push_back(prefix);
  if (!fog::sim1(g, p)) return;
  for (const fog::MovePair& mv : random_full_moves(rng, g, p)) {
    fog::TermPair child{fog::apply_rule(g, p.left, mv.first),
                        fog::apply_rule(g, p.right, mv.second)};
    prefix.push_back(mv);
    grow_d_strategy(rng, g, child, prefix, plays);
    prefix.pop_back();
  }
}

// May fail on a pathological sample (guarded blow-up); callers resample.
inline std::optional<fog::PlaySet> random_d_strategy(std::mt19937& rng,
                                                     const fog::Grammar& g,
                                                     const fog::TermPair& p) {
  std::vector<fog::Play> plays;
  fog::Play prefix;
  try {
    grow_d_strategy(rng, g, p, prefix, plays);
  } catch (const fog::Error&) {
    return std::nullopt;
  }
  return fog::PlaySet::from_plays(plays);
}

// A random trie over a tiny move alphabet, for order-theoretic properties.
inline fog::PlaySet random_playset(std::mt19937& rng, int max_plays = 5,
                                   int max_len = 4) {
  std::uniform_int_distribution<int> plays_dist(0, max_plays);
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> rule_dist(0, 2);
  std::vector<fog::Play> plays;
  int n = plays_dist(rng);
  for (int i = 0; i < n; ++i) {
    fog::Play play;
    int len = len_dist(rng);
    for (int j = 0; j < len; ++j) play.emplace_back(rule_dist(rng), rule_dist(rng));
    plays.push_back(std::move(play));
  }
  return fog::PlaySet::from_plays(plays);
}

// Extends s below one of its maximal plays, which preserves the extension
// order by construction.
inline fog::PlaySet random_extension(std::mt19937& rng, const fog::PlaySet& s,
                                     int extra = 2) {
  std::vector<fog::Play> plays = s.plays();
  std::vector<fog::Play> maximal = s.maximal_plays();
  std::uniform_int_distribution<std::size_t> pick(0, maximal.size() - 1);
  std::uniform_int_distribution<int> rule_dist(0, 2);
  std::uniform_int_distribution<int> len_dist(1, extra);
  fog::Play base = maximal[pick(rng)];
  int len = len_dist(rng);
  for (int j = 0; j < len; ++j) base.emplace_back(rule_dist(rng), rule_dist(rng));
  plays.push_back(std::move(base));
  return fog::PlaySet::from_plays(plays);
}

}  // namespace testgen
