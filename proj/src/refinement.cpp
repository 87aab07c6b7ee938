#include "fog/refinement.hpp"

#include <algorithm>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fog {

namespace {

// Successors of one state, in rule declaration order.
std::vector<LtsEdge> expand(const Grammar& g, const Term& t,
                            std::vector<Term>& targets_out) {
  std::vector<LtsEdge> edges;
  if (t.is_bot()) return edges;
  for (int r : g.rules_for_head(t.head())) {
    const Rule& rule = g.rules()[static_cast<std::size_t>(r)];
    targets_out.push_back(apply_rule(g, t, r));
    edges.push_back({rule.action, r, -1});  // target resolved after dedup
  }
  return edges;
}

constexpr std::size_t kParallelThreshold = 4096;

}  // namespace

Lts explore(const Grammar& g, std::span<const Term> roots, std::size_t max_states) {
  Lts lts;
  for (const Term& root : roots) {
    if (!term_well_formed(g, root)) {
      throw Error("term references a nonterminal not in the grammar");
    }
    if (lts.index.emplace(root, static_cast<int>(lts.states.size())).second) {
      lts.states.push_back(root);
      lts.depth.push_back(0);
    }
  }
  lts.edges.resize(lts.states.size());

  std::size_t level_begin = 0;
  std::size_t level_end = lts.states.size();
  int depth = 0;
  bool capped = false;

  while (level_begin < level_end && !capped) {
    lts.edges.resize(level_end);
    std::size_t level_size = level_end - level_begin;
    std::vector<std::vector<LtsEdge>> edges(level_size);
    std::vector<std::vector<Term>> targets(level_size);

    for (std::size_t i = 0; i < level_size; ++i) {
      edges[i] = expand(g, lts.states[level_begin + i], targets[i]);
    }

    for (std::size_t i = 0; i < level_size && !capped; ++i) {
      for (std::size_t j = 0; j < edges[i].size(); ++j) {
        const Term& target = targets[i][j];
        auto [it, inserted] =
            lts.index.emplace(target, static_cast<int>(lts.states.size()));
        if (inserted) {
          if (lts.states.size() >= max_states) {
            lts.index.erase(it);
            capped = true;
            break;
          }
          lts.states.push_back(target);
          lts.depth.push_back(depth + 1);
        }
        edges[i][j].target = it->second;
      }
      if (!capped) lts.edges[level_begin + i] = std::move(edges[i]);
    }
    if (capped) break;
    ++depth;
    level_begin = level_end;
    level_end = lts.states.size();
  }

  lts.edges.resize(lts.states.size());
  lts.closed = !capped;
  // With a capped exploration only states strictly below the level being
  // expanded are guaranteed fully expanded.
  lts.complete_depth = depth;
  return lts;
}

namespace {

using Signature = std::vector<std::pair<int, int>>;  // (action, block), sorted

struct SigHash {
  std::size_t operator()(const Signature& sig) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto [a, b] : sig) {
      h = (h ^ static_cast<std::size_t>(a)) * 0x100000001b3ull;
      h = (h ^ static_cast<std::size_t>(b)) * 0x100000001b3ull;
    }
    return h;
  }
};

Signature signature_of(const Lts& lts, const std::vector<int>& blocks, std::size_t s) {
  Signature sig;
  sig.reserve(lts.edges[s].size());
  for (const LtsEdge& e : lts.edges[s]) {
    sig.emplace_back(e.action, blocks[static_cast<std::size_t>(e.target)]);
  }
  std::sort(sig.begin(), sig.end());
  sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
  return sig;
}

// Deterministic regrouping shared by both kernels: block ids are handed out
// in first-occurrence order of the state index.
std::vector<int> group_by_signature(std::vector<Signature>& sigs) {
  std::vector<int> next(sigs.size(), -1);
  std::unordered_map<Signature, int, SigHash> block_of;
  block_of.reserve(sigs.size());
  int blocks = 0;
  for (std::size_t s = 0; s < sigs.size(); ++s) {
    auto [it, inserted] = block_of.emplace(std::move(sigs[s]), blocks);
    if (inserted) ++blocks;
    next[s] = it->second;
  }
  return next;
}

}  // namespace

std::vector<int> refine_round_serial(const Lts& lts, const std::vector<int>& blocks) {
  std::vector<Signature> sigs(lts.states.size());
  for (std::size_t s = 0; s < lts.states.size(); ++s) {
    sigs[s] = signature_of(lts, blocks, s);
  }
  return group_by_signature(sigs);
}

// The parallel kernel flattens all signatures into one arena (offsets from
// the per-state edge counts), sorts and hashes each range in place, and only
// the final regrouping scan stays sequential.
std::vector<int> refine_round_parallel(const Lts& lts, const std::vector<int>& blocks) {
  std::size_t n = lts.states.size();
  if (n < kParallelThreshold) return refine_round_serial(lts, blocks);

  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t s = 0; s < n; ++s) offset[s + 1] = offset[s] + lts.edges[s].size();
  std::vector<std::pair<int, int>> arena(offset[n]);
  std::vector<std::size_t> length(n);
  std::vector<std::size_t> hash(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t s = 0; s < n; ++s) {
    auto* begin = arena.data() + offset[s];
    std::size_t count = 0;
    for (const LtsEdge& e : lts.edges[s]) {
      begin[count++] = {e.action, blocks[static_cast<std::size_t>(e.target)]};
    }
    std::sort(begin, begin + count);
    count = static_cast<std::size_t>(std::unique(begin, begin + count) - begin);
    length[s] = count;
    std::size_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < count; ++i) {
      h = (h ^ static_cast<std::size_t>(begin[i].first)) * 0x100000001b3ull;
      h = (h ^ static_cast<std::size_t>(begin[i].second)) * 0x100000001b3ull;
    }
    hash[s] = h;
  }

  // Group by hash, confirming equality on the flat ranges; block ids are
  // assigned in first-occurrence order of the state index, exactly as in the
  // serial kernel. Open addressing over block representatives keeps the
  // sequential scan tight.
  std::vector<int> next(n, -1);
  std::size_t cap = 16;
  while (cap < 2 * n) cap <<= 1;
  std::vector<int> table(cap, -1);
  struct Rep {
    std::size_t state;
    int block;
  };
  std::vector<Rep> reps;
  int block_count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t pos = hash[s] & (cap - 1);
    while (true) {
      if (table[pos] < 0) {
        table[pos] = static_cast<int>(reps.size());
        reps.push_back({s, block_count});
        next[s] = block_count++;
        break;
      }
      const Rep& rep = reps[static_cast<std::size_t>(table[pos])];
      if (hash[rep.state] == hash[s] && length[rep.state] == length[s] &&
          std::equal(arena.begin() + static_cast<long>(offset[rep.state]),
                     arena.begin() + static_cast<long>(offset[rep.state] + length[s]),
                     arena.begin() + static_cast<long>(offset[s]))) {
        next[s] = rep.block;
        break;
      }
      pos = (pos + 1) & (cap - 1);
    }
  }
  return next;
}

int RefinementTrace::separation_level(int u, int v) const {
  if (u == v) return -1;
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    if (rounds[r][static_cast<std::size_t>(u)] !=
        rounds[r][static_cast<std::size_t>(v)]) {
      return static_cast<int>(r);
    }
  }
  return -1;
}

RefinementTrace refine_to_fixpoint(const Lts& lts, Exec exec, std::size_t max_rounds) {
  RefinementTrace trace;
  std::vector<int> current(lts.states.size(), 0);
  for (std::size_t r = 0; r < max_rounds; ++r) {
    std::vector<int> next = refine_round(lts, current, exec);
    if (next == current) {
      trace.reached_fixpoint = true;
      return trace;
    }
    trace.rounds.push_back(next);
    current = std::move(next);
  }
  return trace;
}

}  // namespace fog
