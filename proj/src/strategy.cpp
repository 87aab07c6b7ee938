#include "fog/strategy.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>

#include "fog/refinement.hpp"

namespace fog {

PlaySet::PlaySet() : nodes_(1) {}

int PlaySet::node_at(const Play& alpha) const {
  int node = 0;
  for (const MovePair& mv : alpha) {
    auto it = nodes_[static_cast<std::size_t>(node)].children.find(mv);
    if (it == nodes_[static_cast<std::size_t>(node)].children.end()) return -1;
    node = it->second;
  }
  return node;
}

void PlaySet::insert(const Play& alpha) {
  int node = 0;
  for (const MovePair& mv : alpha) {
    auto& children = nodes_[static_cast<std::size_t>(node)].children;
    auto it = children.find(mv);
    if (it == children.end()) {
      int fresh = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      it = nodes_[static_cast<std::size_t>(node)].children.emplace(mv, fresh).first;
    }
    node = it->second;
  }
}

PlaySet PlaySet::from_plays(std::span<const Play> plays) {
  PlaySet s;
  for (const Play& p : plays) s.insert(p);
  return s;
}

bool PlaySet::contains(const Play& alpha) const { return node_at(alpha) >= 0; }

PlaySet PlaySet::residual(const Play& alpha) const {
  int node = node_at(alpha);
  if (node < 0) throw Error("residual of a play not in the set");
  PlaySet out;
  // Copy the subtree rooted at `node`.
  std::deque<std::pair<int, int>> queue{{node, 0}};  // (source, destination)
  while (!queue.empty()) {
    auto [src, dst] = queue.front();
    queue.pop_front();
    for (const auto& [mv, child] : nodes_[static_cast<std::size_t>(src)].children) {
      int fresh = static_cast<int>(out.nodes_.size());
      out.nodes_.emplace_back();
      out.nodes_[static_cast<std::size_t>(dst)].children.emplace(mv, fresh);
      queue.emplace_back(child, fresh);
    }
  }
  return out;
}

MovePairSet PlaySet::moves_after(const Play& alpha) const {
  int node = node_at(alpha);
  if (node < 0) throw Error("play not in the set");
  MovePairSet moves;
  for (const auto& [mv, child] : nodes_[static_cast<std::size_t>(node)].children) {
    moves.push_back(mv);
  }
  return moves;
}

void PlaySet::for_each_node(
    const std::function<void(const Play&, const MovePairSet&)>& fn) const {
  // Breadth-first with ordered children: plays are visited shortest first,
  // ties resolved by rule index (length-lex order).
  std::deque<std::pair<int, Play>> queue{{0, Play{}}};
  while (!queue.empty()) {
    auto [node, play] = std::move(queue.front());
    queue.pop_front();
    MovePairSet moves;
    for (const auto& [mv, child] : nodes_[static_cast<std::size_t>(node)].children) {
      moves.push_back(mv);
      Play extended = play;
      extended.push_back(mv);
      queue.emplace_back(child, std::move(extended));
    }
    fn(play, moves);
  }
}

std::vector<Play> PlaySet::plays() const {
  std::vector<Play> out;
  for_each_node([&](const Play& p, const MovePairSet&) { out.push_back(p); });
  return out;
}

std::vector<Play> PlaySet::maximal_plays() const {
  std::vector<Play> out;
  for_each_node([&](const Play& p, const MovePairSet& moves) {
    if (moves.empty()) out.push_back(p);
  });
  return out;
}

int PlaySet::max_length() const {
  int best = 0;
  for_each_node([&](const Play& p, const MovePairSet&) {
    best = std::max(best, static_cast<int>(p.size()));
  });
  return best;
}

bool PlaySet::operator==(const PlaySet& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  std::deque<std::pair<int, int>> queue{{0, 0}};
  while (!queue.empty()) {
    auto [a, b] = queue.front();
    queue.pop_front();
    const auto& ca = nodes_[static_cast<std::size_t>(a)].children;
    const auto& cb = other.nodes_[static_cast<std::size_t>(b)].children;
    if (ca.size() != cb.size()) return false;
    auto ita = ca.begin();
    auto itb = cb.begin();
    for (; ita != ca.end(); ++ita, ++itb) {
      if (ita->first != itb->first) return false;
      queue.emplace_back(ita->second, itb->second);
    }
  }
  return true;
}

std::string play_to_string(const Grammar& g, const Play& alpha) {
  std::string out;
  for (const MovePair& mv : alpha) {
    if (!out.empty()) out += ' ';
    out += rule_to_string(g, mv.first);
    out += ':';
    out += rule_to_string(g, mv.second);
  }
  return out;
}

PlaySetParseResult parse_playset(const Grammar& g, std::string_view text) {
  PlaySetParseResult result;
  std::vector<Play> plays;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    Play play;
    std::size_t i = 0;
    bool line_ok = true;
    while (i < line.size() && line_ok) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      if (line[i] == '#') break;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
             line[i] != '#') {
        ++i;
      }
      std::string_view step = line.substr(start, i - start);
      auto colon = step.find(':');
      if (colon == std::string_view::npos) {
        result.diagnostics.push_back({line_no, static_cast<int>(start) + 1,
                                      "expected leftRule:rightRule"});
        line_ok = false;
        break;
      }
      int left = g.rule_index(step.substr(0, colon));
      int right = g.rule_index(step.substr(colon + 1));
      if (left < 0 || right < 0) {
        result.diagnostics.push_back(
            {line_no, static_cast<int>(start) + 1,
             "unknown rule id in '" + std::string(step) + "'"});
        line_ok = false;
        break;
      }
      play.emplace_back(left, right);
    }
    if (line_ok && !play.empty()) plays.push_back(std::move(play));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (result.diagnostics.empty()) result.set = PlaySet::from_plays(plays);
  return result;
}

std::string playset_to_text(const Grammar& g, const PlaySet& s) {
  std::string out;
  for (const Play& p : s.maximal_plays()) {
    if (p.empty()) continue;
    out += play_to_string(g, p);
    out += '\n';
  }
  return out;
}

IntensionalStrategy identity_strategy(const Grammar& g, const Term& t) {
  if (!term_well_formed(g, t)) {
    throw Error("term references a nonterminal not in the grammar");
  }
  IntensionalStrategy s;
  s.base = TermPair{t, t};
  s.moves_at = [](const Grammar& gr, const TermPair& p) {
    MovePairSet moves;
    if (p.left.is_bot() || p.right.is_bot()) return moves;
    for (int r : gr.rules_for_head(p.left.head())) {
      if (p.right.head() == gr.rules()[static_cast<std::size_t>(r)].head) {
        moves.emplace_back(r, r);
      }
    }
    return make_move_pair_set(std::move(moves));
  };
  return s;
}

namespace {

bool rule_enabled(const Grammar& g, const Term& t, int rule) {
  return !t.is_bot() && rule >= 0 && rule < static_cast<int>(g.rules().size()) &&
         g.rules()[static_cast<std::size_t>(rule)].head == t.head();
}

MovePairSet playable_moves(const Grammar& g, const MovePairSet& moves,
                           const TermPair& p) {
  MovePairSet out;
  for (const MovePair& mv : moves) {
    if (rule_enabled(g, p.left, mv.first) && rule_enabled(g, p.right, mv.second) &&
        act(g, mv.first) == act(g, mv.second)) {
      out.push_back(mv);
    }
  }
  return out;
}

// Collect the plays of an intensional strategy up to `depth`; when
// `watch_growth` is set, reports whether some depth-`depth` position still
// has playable moves (the play space is not exhausted).
void collect_plays(const Grammar& g, const IntensionalStrategy& s, const TermPair& p,
                   int depth, Play& prefix, std::vector<Play>& out,
                   bool watch_growth, bool& grew) {
  out.push_back(prefix);
  MovePairSet moves = playable_moves(g, s.moves_at(g, p), p);
  if (depth == 0) {
    if (watch_growth && !moves.empty()) grew = true;
    return;
  }
  for (const MovePair& mv : moves) {
    TermPair child{apply_rule(g, p.left, mv.first), apply_rule(g, p.right, mv.second)};
    prefix.push_back(mv);
    collect_plays(g, s, child, depth - 1, prefix, out, watch_growth, grew);
    prefix.pop_back();
  }
}

}  // namespace

PlaySet materialize(const Grammar& g, const IntensionalStrategy& s, int depth) {
  if (depth < 0) throw Error("negative materialization depth");
  std::vector<Play> plays;
  Play prefix;
  bool grew = false;
  collect_plays(g, s, s.base, depth, prefix, plays, false, grew);
  return PlaySet::from_plays(plays);
}

nlohmann::ordered_json verdict_to_json(const Grammar& g, const StrategyVerdict& v) {
  nlohmann::ordered_json doc;
  doc["accepted"] = v.accepted;
  if (v.violated == Condition::none) {
    doc["violated_condition"] = nullptr;
  } else {
    doc["violated_condition"] = std::string(condition_name(v.violated));
  }
  if (v.witness) {
    doc["witness"] = play_to_string(g, *v.witness);
  } else {
    doc["witness"] = nullptr;
  }
  return doc;
}

std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::none: return "none";
    case Condition::dq1: return "DQ1";
    case Condition::dq2: return "DQ2";
    case Condition::dq3: return "DQ3";
    case Condition::dq4: return "DQ4";
    case Condition::dq_prime4: return "DQ'4";
    case Condition::dq_dprime4: return "DQ''4";
    case Condition::char2: return "CHAR-2";
  }
  return "?";
}

namespace {

enum class Mode { dq, d, winning };

// Shared checker for the three fourth conditions. DQ1 and DQ2 hold by
// construction of the trie. DQ3 is verified over the whole set first; only
// then are the condition-4 variants evaluated, node by node in length-lex
// order, so the reported witness is the least play violating the first
// failed condition.
StrategyVerdict check_conditions(const Grammar& g, const TermPair& p, const PlaySet& s,
                                 Mode mode) {
  StrategyVerdict verdict;

  std::optional<Play> bad_play;
  s.for_each_node([&](const Play& alpha, const MovePairSet&) {
    if (bad_play) return;
    if (!is_play(g, p, alpha)) bad_play = alpha;
  });
  if (bad_play) {
    verdict.violated = Condition::dq3;
    verdict.witness = std::move(bad_play);
    return verdict;
  }

  std::optional<Play> bad_node;
  s.for_each_node([&](const Play& alpha, const MovePairSet& moves) {
    if (bad_node) return;
    TermPair reached = next_pair(g, p, alpha);
    bool trivial_residual = moves.empty();
    bool level1 = sim1(g, reached);
    bool full = level1 && full_for(g, moves, reached);
    bool ok = false;
    switch (mode) {
      case Mode::dq:
        ok = trivial_residual || !level1 || full;
        break;
      case Mode::d:
        ok = !level1 || full;
        break;
      case Mode::winning:
        ok = full;
        break;
    }
    if (!ok) bad_node = alpha;
  });
  if (bad_node) {
    verdict.violated = mode == Mode::dq        ? Condition::dq4
                       : mode == Mode::d       ? Condition::dq_prime4
                                               : Condition::dq_dprime4;
    verdict.witness = std::move(bad_node);
    return verdict;
  }
  verdict.accepted = true;
  return verdict;
}

}  // namespace

StrategyVerdict check_dq(const Grammar& g, const TermPair& p, const PlaySet& s) {
  return check_conditions(g, p, s, Mode::dq);
}

StrategyVerdict check_d(const Grammar& g, const TermPair& p, const PlaySet& s) {
  return check_conditions(g, p, s, Mode::d);
}

StrategyVerdict check_winning(const Grammar& g, const TermPair& p, const PlaySet& s) {
  return check_conditions(g, p, s, Mode::winning);
}

StrategyVerdict check_winning(const Grammar& g, const IntensionalStrategy& s,
                              int depth_cap) {
  if (depth_cap < 0) throw Error("negative depth cap");
  std::vector<Play> plays;
  Play prefix;
  bool grew = false;
  collect_plays(g, s, s.base, depth_cap, prefix, plays, true, grew);
  if (grew) {
    throw Error("play-space exploration exceeds the depth cap " +
                std::to_string(depth_cap));
  }
  return check_winning(g, s.base, PlaySet::from_plays(plays));
}

StrategyVerdict check_finite_prefix(const Grammar& g, const TermPair& p,
                                    const PlaySet& s) {
  StrategyVerdict verdict = check_dq(g, p, s);
  if (!verdict.accepted) return verdict;
  int n = s.max_length();
  for (const Play& beta : s.maximal_plays()) {
    if (static_cast<int>(beta.size()) == n) continue;
    if (!sim1(g, next_pair(g, p, beta))) continue;
    verdict.accepted = false;
    verdict.violated = Condition::char2;
    verdict.witness = beta;
    return verdict;
  }
  verdict.prefix_depth = n;
  return verdict;
}

bool extension_leq(const PlaySet& s1, const PlaySet& s2) {
  for (const Play& alpha : s1.plays()) {
    if (!s2.contains(alpha)) return false;
  }
  std::vector<Play> maximal = s1.maximal_plays();
  auto extends_maximal = [&](const Play& alpha) {
    for (const Play& beta : maximal) {
      if (beta.size() <= alpha.size() &&
          std::equal(beta.begin(), beta.end(), alpha.begin())) {
        return true;
      }
    }
    return false;
  };
  for (const Play& alpha : s2.plays()) {
    if (s1.contains(alpha)) continue;
    if (!extends_maximal(alpha)) return false;
  }
  return true;
}

PlaySet indstr(const PlaySet& s_a, const PlaySet& s_b) {
  using Word = std::vector<int>;
  auto word_view = [](const PlaySet& s) {
    // left word -> set of right words
    std::map<Word, std::vector<Word>> rel;
    for (const Play& p : s.plays()) {
      Word left, right;
      left.reserve(p.size());
      right.reserve(p.size());
      for (const MovePair& mv : p) {
        left.push_back(mv.first);
        right.push_back(mv.second);
      }
      rel[left].push_back(right);
    }
    return rel;
  };
  auto rel_a = word_view(s_a);
  auto rel_b = word_view(s_b);
  std::vector<Play> plays;
  for (const auto& [v, rights_a] : rel_a) {
    auto it = rel_b.find(v);
    if (it == rel_b.end()) continue;
    for (const Word& u : rights_a) {
      for (const Word& w : it->second) {
        if (u.size() != w.size()) continue;  // no play realizes the word pair
        Play play;
        play.reserve(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) play.emplace_back(u[i], w[i]);
        plays.push_back(std::move(play));
      }
    }
  }
  return PlaySet::from_plays(plays);
}

PlaySet playset_from_label_words(
    const Grammar& g, const TermPair& start,
    std::span<const std::pair<std::vector<int>, std::vector<int>>> word_pairs) {
  auto lift = [&](const Term& from, const std::vector<int>& labels) {
    std::vector<int> rules;
    Term current = from;
    for (int label : labels) {
      if (current.is_bot()) throw Error("label word runs past a dead term");
      int found = -1;
      for (int r : g.rules_for_head(current.head())) {
        if (g.rules()[static_cast<std::size_t>(r)].tlabel != label) continue;
        if (found >= 0) throw Error("label resolves to more than one rule");
        found = r;
      }
      if (found < 0) throw Error("label resolves to no enabled rule");
      rules.push_back(found);
      current = apply_rule(g, current, found);
    }
    return rules;
  };
  std::vector<Play> plays;
  for (const auto& [left_word, right_word] : word_pairs) {
    if (left_word.size() != right_word.size()) {
      throw Error("label words of unequal length");
    }
    std::vector<int> left = lift(start.left, left_word);
    std::vector<int> right = lift(start.right, right_word);
    Play play;
    for (std::size_t i = 0; i < left.size(); ++i) play.emplace_back(left[i], right[i]);
    plays.push_back(std::move(play));
  }
  return PlaySet::from_plays(plays);
}

// ---------------------------------------------------------------------------
// Strategy-relative equivalence level.
// ---------------------------------------------------------------------------

namespace {

constexpr long long kInf = LLONG_MAX / 4;

long long plus_one(long long v) { return v >= kInf ? kInf : v + 1; }

// Equivalence levels of state pairs, read off one refinement trace: the
// level is the number of initial rounds in which the two states share a
// block.
class PairLevels {
 public:
  PairLevels(const Lts& lts, Exec exec)
      : trace_(refine_to_fixpoint(lts, exec, lts.states.size() + 1)) {}

  long long level(int u, int v) const {
    int sep = trace_.separation_level(u, v);
    return sep < 0 ? kInf : sep;
  }

 private:
  RefinementTrace trace_;
};

struct Attack {
  bool on_left;
  int rule;
};

// Attacks that realize the position's equivalence level: those whose best
// same-action response leads to a pair of level exactly one less (with "no
// response" counting as level -1).
std::vector<Attack> optimal_attacks(const Lts& lts, const PairLevels& levels, int u,
                                    int v) {
  std::vector<Attack> attacks;
  std::vector<long long> bests;
  long long min_best = kInf;
  auto consider = [&](bool on_left) {
    int attacker = on_left ? u : v;
    int defender = on_left ? v : u;
    for (const LtsEdge& e : lts.edges[static_cast<std::size_t>(attacker)]) {
      long long best = -1;
      for (const LtsEdge& d : lts.edges[static_cast<std::size_t>(defender)]) {
        if (d.action != e.action) continue;
        long long child = on_left ? levels.level(e.target, d.target)
                                  : levels.level(d.target, e.target);
        best = std::max(best, child);
      }
      attacks.push_back({on_left, e.rule});
      bests.push_back(best);
      min_best = std::min(min_best, best);
    }
  };
  consider(true);
  consider(false);
  std::vector<Attack> optimal;
  for (std::size_t i = 0; i < attacks.size(); ++i) {
    if (bests[i] == min_best) optimal.push_back(attacks[i]);
  }
  return optimal;
}

int edge_target(const Lts& lts, int state, int rule) {
  for (const LtsEdge& e : lts.edges[static_cast<std::size_t>(state)]) {
    if (e.rule == rule) return e.target;
  }
  return -1;
}

bool moves_full_for(const Lts& lts, const MovePairSet& moves, int u, int v) {
  auto covered = [&](int rule, bool left_side) {
    for (const MovePair& mv : moves) {
      if ((left_side ? mv.first : mv.second) == rule) return true;
    }
    return false;
  };
  for (const LtsEdge& e : lts.edges[static_cast<std::size_t>(u)]) {
    if (!covered(e.rule, true)) return false;
  }
  for (const LtsEdge& e : lts.edges[static_cast<std::size_t>(v)]) {
    if (!covered(e.rule, false)) return false;
  }
  return true;
}

// Survival value of the defender constrained to the trie below `node`,
// against level-optimal attacks. Terminates because the trie has no cycles.
long long survival_value(const Grammar& g, const Lts& lts, const PairLevels& levels,
                         const PlaySet& s, const Play& node, int u, int v) {
  bool dead = lts.edges[static_cast<std::size_t>(u)].empty() &&
              lts.edges[static_cast<std::size_t>(v)].empty();
  if (dead) return kInf;
  MovePairSet moves;
  for (const MovePair& mv : s.moves_after(node)) {
    int lu = edge_target(lts, u, mv.first);
    int rv = edge_target(lts, v, mv.second);
    if (lu < 0 || rv < 0) continue;
    if (act(g, mv.first) != act(g, mv.second)) continue;
    moves.push_back(mv);
  }
  if (!moves_full_for(lts, moves, u, v)) return 0;
  long long worst = kInf;
  for (const Attack& attack : optimal_attacks(lts, levels, u, v)) {
    long long best = -1;
    for (const MovePair& mv : moves) {
      if ((attack.on_left ? mv.first : mv.second) != attack.rule) continue;
      Play child = node;
      child.push_back(mv);
      best = std::max(best, survival_value(g, lts, levels, s, child,
                                           edge_target(lts, u, mv.first),
                                           edge_target(lts, v, mv.second)));
    }
    worst = std::min(worst, best);  // full set: best >= some response
  }
  return plus_one(worst);
}

// Fallback when the term space does not close within budget: the value of
// the unrestricted min-max game (attacker picks any attack), a lower bound
// for the value against a level-optimal attacker.
long long naive_survival_value(const Grammar& g, const PlaySet& s, const Play& node,
                               const TermPair& p) {
  bool left_dead = p.left.is_bot();
  bool right_dead = p.right.is_bot();
  if (left_dead && right_dead) return kInf;
  MovePairSet moves = playable_moves(g, s.moves_after(node), p);
  if (!full_for(g, moves, p)) return 0;
  long long worst = kInf;
  auto consider = [&](bool on_left) {
    const Term& attacker = on_left ? p.left : p.right;
    if (attacker.is_bot()) return;
    for (int r : g.rules_for_head(attacker.head())) {
      long long best = -1;
      for (const MovePair& mv : moves) {
        if ((on_left ? mv.first : mv.second) != r) continue;
        Play child = node;
        child.push_back(mv);
        TermPair q{apply_rule(g, p.left, mv.first), apply_rule(g, p.right, mv.second)};
        best = std::max(best, naive_survival_value(g, s, child, q));
      }
      worst = std::min(worst, best);
    }
  };
  consider(true);
  consider(false);
  return plus_one(worst);
}

EqLevel to_eq_level(long long value, bool exact) {
  if (value >= kInf) return EqLevel::infinite();
  unsigned n = static_cast<unsigned>(value);
  return exact ? EqLevel::exact(n) : EqLevel::at_least(n);
}

}  // namespace

EqLevel strategy_eq_level(const Grammar& g, const TermPair& p, const PlaySet& s,
                          std::size_t budget, Exec exec) {
  if (!term_well_formed(g, p.left) || !term_well_formed(g, p.right)) {
    throw Error("term references a nonterminal not in the grammar");
  }
  Term roots[2] = {p.left, p.right};
  Lts lts = explore(g, roots, budget);
  if (!lts.closed) {
    long long value = naive_survival_value(g, s, Play{}, p);
    return to_eq_level(value, /*exact=*/value >= kInf);
  }
  PairLevels levels(lts, exec);
  long long value = survival_value(g, lts, levels, s, Play{}, lts.state_of(p.left),
                                   lts.state_of(p.right));
  return to_eq_level(value, /*exact=*/true);
}

EqLevel strategy_eq_level(const Grammar& g, const IntensionalStrategy& s,
                          std::size_t budget, Exec exec) {
  const TermPair& p = s.base;
  Term roots[2] = {p.left, p.right};
  Lts lts = explore(g, roots, budget);

  // Product graph of positions reachable while the defender follows s.
  std::unordered_map<TermPair, int, TermPairHash> index;
  std::vector<TermPair> states{p};
  std::vector<MovePairSet> moves;
  index.emplace(p, 0);
  bool capped = false;
  for (std::size_t i = 0; i < states.size(); ++i) {
    TermPair current = states[i];
    MovePairSet playable = playable_moves(g, s.moves_at(g, current), current);
    for (const MovePair& mv : playable) {
      TermPair child{apply_rule(g, current.left, mv.first),
                     apply_rule(g, current.right, mv.second)};
      if (index.emplace(child, static_cast<int>(states.size())).second) {
        if (states.size() >= budget) {
          capped = true;
          break;
        }
        states.push_back(child);
      }
    }
    moves.push_back(std::move(playable));
    if (capped) break;
  }

  bool exact = lts.closed && !capped;
  std::optional<PairLevels> levels;
  if (exact) levels.emplace(lts, exec);

  // Value iteration from below; finite survival values are bounded by the
  // number of product states, so anything still above that bound after
  // n+1 sweeps is infinite.
  std::size_t n = states.size();
  std::vector<long long> value(n, 0), next(n, 0);
  auto one_step = [&](const std::vector<long long>& prev, std::size_t i) -> long long {
    const TermPair& q = states[static_cast<std::size_t>(i)];
    bool dead = q.left.is_bot() && q.right.is_bot();
    if (dead) return kInf;
    const MovePairSet& mset =
        i < moves.size() ? moves[i] : MovePairSet{};  // unexpanded frontier: no moves
    if (!full_for(g, mset, q)) return 0;
    auto child_value = [&](const MovePair& mv) -> long long {
      TermPair child{apply_rule(g, q.left, mv.first), apply_rule(g, q.right, mv.second)};
      auto it = index.find(child);
      return it == index.end() ? 0 : prev[static_cast<std::size_t>(it->second)];
    };
    long long worst = kInf;
    auto consider_attack = [&](bool on_left, int rule) {
      long long best = -1;
      for (const MovePair& mv : mset) {
        if ((on_left ? mv.first : mv.second) != rule) continue;
        best = std::max(best, child_value(mv));
      }
      worst = std::min(worst, best);
    };
    if (exact) {
      for (const Attack& a : optimal_attacks(lts, *levels, lts.state_of(q.left),
                                             lts.state_of(q.right))) {
        consider_attack(a.on_left, a.rule);
      }
    } else {
      if (!q.left.is_bot()) {
        for (int r : g.rules_for_head(q.left.head())) consider_attack(true, r);
      }
      if (!q.right.is_bot()) {
        for (int r : g.rules_for_head(q.right.head())) consider_attack(false, r);
      }
    }
    return plus_one(worst);
  };
  for (std::size_t sweep = 0; sweep <= n + 1; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) next[i] = one_step(value, i);
    if (next == value) break;
    value.swap(next);
  }
  long long root = value[0];
  if (root > static_cast<long long>(n)) root = kInf;
  return to_eq_level(root, /*exact=*/exact || root >= kInf);
}

}  // namespace fog
