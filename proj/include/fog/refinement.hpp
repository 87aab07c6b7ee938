#pragma once

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "fog/exec.hpp"
#include "fog/grammar.hpp"
#include "fog/term.hpp"

namespace fog {

struct LtsEdge {
  int action;
  int rule;
  int target;
  bool operator==(const LtsEdge&) const = default;
};

// The labelled transition system induced by a grammar on the terms reachable
// from a set of roots. States are discovered breadth-first and numbered in
// discovery order.
//
// When the exploration hits the state cap before the frontier empties,
// `closed` is false and only levels 0..complete_depth are guaranteed to be
// fully discovered (with outgoing edges recorded for every state strictly
// above the last complete level).
struct Lts {
  std::vector<Term> states;
  std::vector<std::vector<LtsEdge>> edges;
  std::vector<int> depth;  // BFS depth per state
  bool closed = false;
  int complete_depth = 0;
  std::unordered_map<Term, int, TermHash> index;

  int state_of(const Term& t) const {
    auto it = index.find(t);
    return it == index.end() ? -1 : it->second;
  }
};

// Exploration is dedup-bound and runs serially in both modes.
Lts explore(const Grammar& g, std::span<const Term> roots, std::size_t max_states);

// One synchronous refinement round: states are regrouped by their signature
// {(action, block of successor)} w.r.t. the current partition. Block ids are
// assigned in first-occurrence order of state index, so both kernels return
// byte-identical partitions. After r rounds two states share a block iff the
// game cannot tell them apart within r rounds.
std::vector<int> refine_round_serial(const Lts& lts, const std::vector<int>& blocks);
std::vector<int> refine_round_parallel(const Lts& lts, const std::vector<int>& blocks);

inline std::vector<int> refine_round(const Lts& lts, const std::vector<int>& blocks,
                                     Exec exec) {
  return exec == Exec::serial ? refine_round_serial(lts, blocks)
                              : refine_round_parallel(lts, blocks);
}

// Partitions after each round, starting from the universal partition
// (rounds[0] is the partition after one round). Stops at the fixpoint or
// after max_rounds, whichever comes first.
struct RefinementTrace {
  std::vector<std::vector<int>> rounds;
  bool reached_fixpoint = false;

  // First round separating u and v minus one, i.e. the number of rounds the
  // two states are indistinguishable; -1 encodes "never separated".
  int separation_level(int u, int v) const;
};

RefinementTrace refine_to_fixpoint(const Lts& lts, Exec exec, std::size_t max_rounds);

}  // namespace fog
