#include "fog/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace fog {

int Grammar::nonterminal_index(std::string_view name) const {
  auto it = nt_by_name_.find(std::string(name));
  return it == nt_by_name_.end() ? -1 : it->second;
}

int Grammar::action_index(std::string_view name) const {
  auto it = action_by_name_.find(std::string(name));
  return it == action_by_name_.end() ? -1 : it->second;
}

int Grammar::tlabel_index(std::string_view name) const {
  auto it = tlabel_by_name_.find(std::string(name));
  return it == tlabel_by_name_.end() ? -1 : it->second;
}

int Grammar::rule_index(std::string_view id) const {
  auto it = rule_by_id_.find(std::string(id));
  return it == rule_by_id_.end() ? -1 : it->second;
}

std::span<const int> Grammar::rules_for_head(int nonterminal) const {
  if (nonterminal < 0 || nonterminal >= static_cast<int>(rules_by_head_.size())) {
    throw Error("nonterminal index out of range");
  }
  return rules_by_head_[nonterminal];
}

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// True for `v`, `v1`, `v2`, ...: names reserved for rule variables.
bool variable_like(std::string_view name) {
  if (name.empty() || name[0] != 'v') return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// 0-based variable index, or -1 when the token is not a variable.
int variable_index(std::string_view name) {
  if (!variable_like(name)) return -1;
  if (name.size() == 1) return 0;  // bare `v` means v1
  int idx = 0;
  for (char c : name.substr(1)) idx = idx * 10 + (c - '0');
  return idx - 1;
}

// Recursive-descent parser for the textual term syntax, shared by rule
// right-hand sides (variables allowed) and standalone terms (variables
// rejected). Positions are reported as columns relative to `col_base`.
class TermScanner {
 public:
  TermScanner(const Grammar& g, std::string_view text, int line, int col_base,
              bool allow_vars, int max_var, std::vector<Diagnostic>& diags)
      : g_(g),
        text_(text),
        line_(line),
        col_base_(col_base),
        allow_vars_(allow_vars),
        max_var_(max_var),
        diags_(diags) {}

  std::optional<RhsNode> parse() {
    auto node = parse_node();
    if (!node) return std::nullopt;
    skip_space();
    if (pos_ != text_.size()) {
      fail("trailing input after term");
      return std::nullopt;
    }
    return node;
  }

 private:
  std::optional<RhsNode> parse_node() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ == start) {
      fail("expected a term");
      return std::nullopt;
    }
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "bot") return RhsNode{RhsNode::Tag::bot, 0, {}};
    if (int vi = variable_index(name); vi >= 0) {
      if (!allow_vars_) {
        fail("variables are only allowed inside rules", start);
        return std::nullopt;
      }
      if (vi >= max_var_) {
        fail("variable index exceeds the head arity", start);
        return std::nullopt;
      }
      return RhsNode{RhsNode::Tag::var, vi, {}};
    }
    int nt = g_.nonterminal_index(name);
    if (nt < 0) {
      fail("unknown nonterminal '" + std::string(name) + "'", start);
      return std::nullopt;
    }
    RhsNode node{RhsNode::Tag::app, nt, {}};
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      while (true) {
        auto arg = parse_node();
        if (!arg) return std::nullopt;
        node.args.push_back(std::move(*arg));
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        break;
      }
      if (pos_ >= text_.size() || text_[pos_] != ')') {
        fail("expected ')'");
        return std::nullopt;
      }
      ++pos_;
    }
    int arity = g_.nonterminals()[nt].arity;
    if (static_cast<int>(node.args.size()) != arity) {
      std::ostringstream msg;
      msg << "arity mismatch: " << g_.nonterminals()[nt].name << " takes " << arity
          << " argument" << (arity == 1 ? "" : "s") << ", got " << node.args.size();
      fail(msg.str(), start);
      return std::nullopt;
    }
    return node;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void fail(std::string msg) { fail(std::move(msg), pos_); }
  void fail(std::string msg, std::size_t at) {
    diags_.push_back({line_, col_base_ + static_cast<int>(at), std::move(msg)});
  }

  const Grammar& g_;
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int col_base_;
  bool allow_vars_;
  int max_var_;
  std::vector<Diagnostic>& diags_;
};

Term rhs_to_term(const RhsNode& rhs, std::span<const Term> args) {
  switch (rhs.tag) {
    case RhsNode::Tag::bot:
      return Term::bot();
    case RhsNode::Tag::var:
      return args[static_cast<std::size_t>(rhs.index)];
    case RhsNode::Tag::app: {
      std::vector<Term> children;
      children.reserve(rhs.args.size());
      for (const RhsNode& a : rhs.args) children.push_back(rhs_to_term(a, args));
      return Term::app(rhs.index, std::move(children));
    }
  }
  throw Error("corrupt rhs node");
}

struct LineToken {
  std::string_view text;
  int column;  // 1-based
};

std::vector<LineToken> tokenize(std::string_view line) {
  std::vector<LineToken> out;
  std::size_t i = 0;
  while (i < line.size()) {
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
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

}  // namespace

class GrammarParser {
 public:
  GrammarParseResult run(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
      ++line_no;
      parse_line(line, line_no);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    finalize();
    GrammarParseResult result;
    result.diagnostics = std::move(diags_);
    if (result.diagnostics.empty()) result.grammar = std::move(g_);
    return result;
  }

 private:
  void parse_line(std::string_view line, int line_no) {
    auto tokens = tokenize(line);
    if (tokens.empty()) return;
    std::string_view kw = tokens[0].text;
    if (kw == "actions") {
      for (std::size_t i = 1; i < tokens.size(); ++i) declare_action(tokens[i], line_no);
    } else if (kw == "labels") {
      for (std::size_t i = 1; i < tokens.size(); ++i) declare_label(tokens[i], line_no);
    } else if (kw == "nt") {
      for (std::size_t i = 1; i < tokens.size(); ++i)
        declare_nonterminal(tokens[i], line_no);
    } else if (kw == "rule") {
      declare_rule(tokens, line_no);
    } else {
      diags_.push_back({line_no, tokens[0].column,
                        "unknown directive '" + std::string(kw) + "'"});
    }
  }

  void declare_action(LineToken tok, int line) {
    std::string name(tok.text);
    if (g_.action_by_name_.count(name)) {
      diags_.push_back({line, tok.column, "duplicate action '" + name + "'"});
      return;
    }
    g_.action_by_name_[name] = static_cast<int>(g_.actions_.size());
    g_.actions_.push_back({name});
  }

  void declare_label(LineToken tok, int line) {
    auto arrow = tok.text.find("->");
    if (arrow == std::string_view::npos) {
      diags_.push_back({line, tok.column,
                        "label '" + std::string(tok.text) +
                            "' is not mapped to an action (expected name->action)"});
      return;
    }
    std::string name(tok.text.substr(0, arrow));
    std::string action(tok.text.substr(arrow + 2));
    if (name.empty() || action.empty()) {
      diags_.push_back({line, tok.column, "malformed label mapping"});
      return;
    }
    if (g_.tlabel_by_name_.count(name)) {
      diags_.push_back({line, tok.column, "duplicate label '" + name + "'"});
      return;
    }
    int ai = g_.action_index(action);
    if (ai < 0) {
      diags_.push_back({line, tok.column, "label '" + name +
                                              "' maps to undeclared action '" +
                                              action + "'"});
      return;
    }
    g_.tlabel_by_name_[name] = static_cast<int>(g_.tlabels_.size());
    g_.tlabels_.push_back({name, ai});
  }

  void declare_nonterminal(LineToken tok, int line) {
    auto colon = tok.text.rfind(':');
    if (colon == std::string_view::npos) {
      diags_.push_back(
          {line, tok.column, "nonterminal declaration needs an arity (name:arity)"});
      return;
    }
    std::string name(tok.text.substr(0, colon));
    std::string_view arity_str = tok.text.substr(colon + 1);
    if (name.empty() || arity_str.empty() ||
        !std::all_of(arity_str.begin(), arity_str.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      diags_.push_back({line, tok.column, "malformed nonterminal declaration"});
      return;
    }
    if (name == "bot" || variable_like(name)) {
      diags_.push_back({line, tok.column, "'" + name + "' is a reserved name"});
      return;
    }
    if (g_.nt_by_name_.count(name)) {
      diags_.push_back({line, tok.column, "duplicate nonterminal '" + name + "'"});
      return;
    }
    int arity = 0;
    for (char c : arity_str) arity = arity * 10 + (c - '0');
    g_.nt_by_name_[name] = static_cast<int>(g_.nonterminals_.size());
    g_.nonterminals_.push_back({name, arity});
  }

  // rule <id> <head> <label> <rhs>
  void declare_rule(const std::vector<LineToken>& tokens, int line) {
    if (tokens.size() != 5) {
      diags_.push_back({line, tokens[0].column,
                        "rule needs exactly: rule <id> <head> <label> <rhs>"});
      return;
    }
    std::string id(tokens[1].text);
    if (g_.rule_by_id_.count(id)) {
      diags_.push_back({line, tokens[1].column, "duplicate rule id '" + id + "'"});
      return;
    }

    // Head: N or N(v1,...,vn) with the variables in positional order.
    std::vector<Diagnostic> head_diags;
    TermScanner head_scan(g_, tokens[2].text, line, tokens[2].column,
                          /*allow_vars=*/true, /*max_var=*/1 << 20, head_diags);
    auto head = head_scan.parse();
    if (!head) {
      diags_.insert(diags_.end(), head_diags.begin(), head_diags.end());
      return;
    }
    if (head->tag != RhsNode::Tag::app) {
      diags_.push_back({line, tokens[2].column, "rule head must be a nonterminal"});
      return;
    }
    int head_nt = head->index;
    int arity = g_.nonterminals_[head_nt].arity;
    bool head_ok = static_cast<int>(head->args.size()) == arity;
    for (int i = 0; head_ok && i < arity; ++i) {
      const RhsNode& a = head->args[static_cast<std::size_t>(i)];
      head_ok = a.tag == RhsNode::Tag::var && a.index == i;
    }
    if (!head_ok) {
      diags_.push_back({line, tokens[2].column,
                        "rule head must list the variables v1..vn in order"});
      return;
    }

    int tl = g_.tlabel_index(tokens[3].text);
    if (tl < 0) {
      diags_.push_back({line, tokens[3].column,
                        "undeclared label '" + std::string(tokens[3].text) + "'"});
      return;
    }

    std::vector<Diagnostic> rhs_diags;
    TermScanner rhs_scan(g_, tokens[4].text, line, tokens[4].column,
                         /*allow_vars=*/true, /*max_var=*/arity, rhs_diags);
    auto rhs = rhs_scan.parse();
    if (!rhs) {
      diags_.insert(diags_.end(), rhs_diags.begin(), rhs_diags.end());
      return;
    }

    Rule rule;
    rule.id = id;
    rule.head = head_nt;
    rule.rhs = std::move(*rhs);
    rule.tlabel = tl;
    rule.action = g_.tlabels_[static_cast<std::size_t>(tl)].action;
    g_.rule_by_id_[id] = static_cast<int>(g_.rules_.size());
    g_.rules_.push_back(std::move(rule));
  }

  void finalize() {
    g_.rules_by_head_.assign(g_.nonterminals_.size(), {});
    for (std::size_t i = 0; i < g_.rules_.size(); ++i) {
      g_.rules_by_head_[static_cast<std::size_t>(g_.rules_[i].head)].push_back(
          static_cast<int>(i));
    }
  }

  Grammar g_;
  std::vector<Diagnostic> diags_;
};

GrammarParseResult parse_grammar(std::string_view text) {
  return GrammarParser().run(text);
}

TermParseResult parse_term(const Grammar& g, std::string_view text) {
  TermParseResult result;
  TermScanner scan(g, text, 1, 1, /*allow_vars=*/false, 0, result.diagnostics);
  auto node = scan.parse();
  if (node) result.term = rhs_to_term(*node, {});
  return result;
}

std::string term_to_string(const Grammar& g, const Term& t) {
  if (t.is_bot()) return "bot";
  std::string out = g.nonterminals()[static_cast<std::size_t>(t.head())].name;
  if (!t.args().empty()) {
    out += '(';
    bool first = true;
    for (const Term& a : t.args()) {
      if (!first) out += ',';
      first = false;
      out += term_to_string(g, a);
    }
    out += ')';
  }
  return out;
}

std::string rule_to_string(const Grammar& g, int rule) {
  if (rule < 0 || rule >= static_cast<int>(g.rules().size())) {
    throw Error("unknown rule index");
  }
  return g.rules()[static_cast<std::size_t>(rule)].id;
}

bool term_well_formed(const Grammar& g, const Term& t) {
  if (t.is_bot()) return true;
  if (t.head() < 0 || t.head() >= static_cast<int>(g.nonterminals().size())) {
    return false;
  }
  if (t.args().size() !=
      static_cast<std::size_t>(g.nonterminals()[static_cast<std::size_t>(t.head())].arity)) {
    return false;
  }
  for (const Term& a : t.args()) {
    if (!term_well_formed(g, a)) return false;
  }
  return true;
}

std::vector<int> enabled_rules(const Grammar& g, const Term& t) {
  if (!term_well_formed(g, t)) {
    throw Error("term references a nonterminal not in the grammar");
  }
  if (t.is_bot()) return {};
  auto span = g.rules_for_head(t.head());
  return {span.begin(), span.end()};
}

Term apply_rule(const Grammar& g, const Term& t, int rule) {
  if (rule < 0 || rule >= static_cast<int>(g.rules().size())) {
    throw Error("unknown rule index");
  }
  const Rule& r = g.rules()[static_cast<std::size_t>(rule)];
  if (t.is_bot() || t.head() != r.head) {
    throw Error("rule " + r.id + " is not enabled on this term");
  }
  return rhs_to_term(r.rhs, t.args());
}

int act(const Grammar& g, int rule) {
  if (rule < 0 || rule >= static_cast<int>(g.rules().size())) {
    throw Error("unknown rule index");
  }
  return g.rules()[static_cast<std::size_t>(rule)].action;
}

bool word_reachable(const Grammar& g, const Term& t, std::span<const int> word) {
  for (int a : word) {
    if (a < 0 || a >= static_cast<int>(g.actions().size())) {
      throw Error("action index out of range");
    }
  }
  if (!term_well_formed(g, t)) {
    throw Error("term references a nonterminal not in the grammar");
  }
  struct State {
    Term term;
    std::size_t pos;
    bool operator==(const State&) const = default;
  };
  struct StateHash {
    std::size_t operator()(const State& s) const {
      return s.term.hash() * 31 + s.pos;
    }
  };
  std::unordered_set<State, StateHash> seen;
  std::deque<State> frontier;
  frontier.push_back({t, 0});
  seen.insert(frontier.back());
  while (!frontier.empty()) {
    State s = frontier.front();
    frontier.pop_front();
    if (s.pos == word.size()) return true;
    if (s.term.is_bot()) continue;
    for (int r : g.rules_for_head(s.term.head())) {
      if (g.rules()[static_cast<std::size_t>(r)].action != word[s.pos]) continue;
      State nxt{apply_rule(g, s.term, r), s.pos + 1};
      if (seen.insert(nxt).second) frontier.push_back(nxt);
    }
  }
  return false;
}

}  // namespace fog
