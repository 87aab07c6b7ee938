#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fog/term.hpp"

namespace fog {

// Raised on violated preconditions (applying a disabled rule, taking the
// residual of an absent play, out-of-range indices, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Action {
  std::string name;
};

// Intermediate rule label; every label maps to exactly one action.
struct TLabel {
  std::string name;
  int action = -1;
};

struct NonTerminal {
  std::string name;
  int arity = 0;
};

// Right-hand side of a rule: a finite term over the head's variables.
struct RhsNode {
  enum class Tag { bot, var, app };
  Tag tag = Tag::bot;
  int index = 0;  // var: 0-based variable index; app: nonterminal index
  std::vector<RhsNode> args;
};

struct Rule {
  std::string id;
  int head = -1;  // nonterminal index
  RhsNode rhs;
  int tlabel = -1;
  int action = -1;  // always the action of tlabel
};

// A first-order grammar: ranked nonterminals, actions, labels with their
// action map, and an ordered rule list. Rule order is declaration order and
// is the iteration order everywhere. Immutable once parsed.
class Grammar {
 public:
  const std::vector<NonTerminal>& nonterminals() const { return nonterminals_; }
  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<TLabel>& tlabels() const { return tlabels_; }
  const std::vector<Rule>& rules() const { return rules_; }

  // Name lookups; -1 when absent.
  int nonterminal_index(std::string_view name) const;
  int action_index(std::string_view name) const;
  int tlabel_index(std::string_view name) const;
  int rule_index(std::string_view id) const;

  // Rule indices whose head is the given nonterminal, in declaration order.
  std::span<const int> rules_for_head(int nonterminal) const;

 private:
  friend class GrammarParser;
  std::vector<NonTerminal> nonterminals_;
  std::vector<Action> actions_;
  std::vector<TLabel> tlabels_;
  std::vector<Rule> rules_;
  std::vector<std::vector<int>> rules_by_head_;
  std::unordered_map<std::string, int> nt_by_name_;
  std::unordered_map<std::string, int> action_by_name_;
  std::unordered_map<std::string, int> tlabel_by_name_;
  std::unordered_map<std::string, int> rule_by_id_;
};

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;
};

struct GrammarParseResult {
  std::optional<Grammar> grammar;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return grammar.has_value(); }
};

// Parses the line-oriented grammar format:
//   actions a b l1
//   labels x->a y->a z->b l1->l1
//   nt A:1 B:1 L1:0
//   rule r1 A(v) y C(v)
// '#' starts a comment. Diagnostics carry 1-based line/column.
GrammarParseResult parse_grammar(std::string_view text);

struct TermParseResult {
  std::optional<Term> term;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return term.has_value(); }
};

// Parses `bot`, `L1`, `A(bot)`, nested applications. Variables are rejected
// (they only occur inside rules).
TermParseResult parse_term(const Grammar& g, std::string_view text);

std::string term_to_string(const Grammar& g, const Term& t);
std::string rule_to_string(const Grammar& g, int rule);

// True when every application in t names a nonterminal of g with matching
// arity.
bool term_well_formed(const Grammar& g, const Term& t);

// Rules enabled on t: exactly those whose head equals the root of t, in
// declaration order. bot enables nothing. Throws Error when t mentions a
// nonterminal g does not have.
std::vector<int> enabled_rules(const Grammar& g, const Term& t);

// Rewrites t by rule, substituting t's arguments for the rule's variables.
// Throws Error when the rule is not enabled on t.
Term apply_rule(const Grammar& g, const Term& t, int rule);

// The action of a rule (label composed with the label-to-action map).
int act(const Grammar& g, int rule);

// True iff some rule sequence u applicable from t has actions exactly `word`.
// BFS over (term, position) pairs; each step consumes one action.
bool word_reachable(const Grammar& g, const Term& t, std::span<const int> word);

}  // namespace fog
