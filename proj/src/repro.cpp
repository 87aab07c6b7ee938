#include "fog/repro.hpp"

#include <algorithm>
#include <sstream>

namespace fog {

namespace {

const char* const kGrammarText = R"(# Ten ranked nonterminals over the actions {a, b, l1}.
# The labels x and y both map to action a, z maps to b.
actions a b l1
labels x->a y->a z->b l1->l1
nt A:1 A':1 A'':1 B:1 B':1 B'':1 C:1 D:1 E:1 L1:0
rule r1  A(v)   y  C(v)
rule r2  A(v)   x  A'(v)
rule r3  B(v)   x  C(v)
rule r4  B(v)   y  B'(v)
rule r5  C(v)   x  D(v)
rule r6  C(v)   y  E(v)
rule r7  A'(v)  x  A''(v)
rule r8  B'(v)  x  B''(v)
rule r9  A''(v) x  D(v)
rule r10 B''(v) x  E(v)
rule r11 D(v)   x  v
rule r12 E(v)   x  v
rule r13 E(v)   z  v
rule r14 L1     l1 bot
)";

Grammar parse_or_die(const std::string& text) {
  GrammarParseResult result = parse_grammar(text);
  if (!result.ok()) {
    std::string msg = "internal grammar failed to parse:";
    for (const Diagnostic& d : result.diagnostics) {
      msg += " [" + std::to_string(d.line) + ":" + std::to_string(d.column) + "] " +
             d.message;
    }
    throw Error(msg);
  }
  return std::move(*result.grammar);
}

Term term(const Grammar& g, const std::string& text) {
  TermParseResult result = parse_term(g, text);
  if (!result.ok()) throw Error("internal term failed to parse: " + text);
  return std::move(*result.term);
}

int rule(const Grammar& g, const std::string& id) {
  int r = g.rule_index(id);
  if (r < 0) throw Error("internal rule id unknown: " + id);
  return r;
}

}  // namespace

const std::string& counterexample_grammar_text() {
  static const std::string text = kGrammarText;
  return text;
}

Grammar counterexample_grammar() { return parse_or_die(counterexample_grammar_text()); }

std::string family_grammar_text(int k) {
  if (k < 1) throw Error("family depth k must be at least 1");
  std::ostringstream out;
  out << "# Depth-" << k << " variant: the D and E exits are stretched into\n"
      << "# chains of " << k << " fresh nonterminals each.\n";
  out << "actions a b l1\n";
  out << "labels x->a y->a z->b l1->l1\n";
  out << "nt A:1 A':1 A'':1 B:1 B':1 B'':1 C:1 D:1 E:1";
  for (int i = 1; i <= k; ++i) out << " D" << i << ":1 E" << i << ":1";
  out << " L1:0\n";
  out << "rule r1 A(v) y C(v)\n"
      << "rule r2 A(v) x A'(v)\n"
      << "rule r3 B(v) x C(v)\n"
      << "rule r4 B(v) y B'(v)\n"
      << "rule r5 C(v) x D(v)\n"
      << "rule r6 C(v) y E(v)\n"
      << "rule r7 A'(v) x A''(v)\n"
      << "rule r8 B'(v) x B''(v)\n"
      << "rule r9 A''(v) x D(v)\n"
      << "rule r10 B''(v) x E(v)\n";
  int next_id = 11;
  auto emit = [&](const std::string& head, const std::string& label,
                  const std::string& rhs) {
    out << "rule r" << next_id++ << " " << head << "(v) " << label << " " << rhs
        << "\n";
  };
  emit("D", "x", "D1(v)");
  emit("E", "x", "E1(v)");
  for (int i = 1; i < k; ++i) {
    emit("D" + std::to_string(i), "x", "D" + std::to_string(i + 1) + "(v)");
    emit("E" + std::to_string(i), "x", "E" + std::to_string(i + 1) + "(v)");
  }
  emit("D" + std::to_string(k), "x", "v");
  emit("E" + std::to_string(k), "x", "v");
  emit("E" + std::to_string(k), "z", "v");
  out << "rule r" << next_id++ << " L1 l1 bot\n";
  return out.str();
}

Grammar family_grammar(int k) { return parse_or_die(family_grammar_text(k)); }

std::map<std::string, PlaySet> counterexample_strategies(const Grammar& g) {
  auto mv = [&](const std::string& a, const std::string& b) {
    return MovePair{rule(g, a), rule(g, b)};
  };
  auto set = [&](std::vector<Play> plays) {
    return PlaySet::from_plays(plays);
  };

  std::map<std::string, PlaySet> out;
  out.emplace("S", set({{mv("r1", "r3"), mv("r5", "r6")},
                        {mv("r1", "r3"), mv("r6", "r5")},
                        {mv("r2", "r4"), mv("r7", "r8"), mv("r9", "r10")}}));
  out.emplace("S1", set({{mv("r5", "r6")}, {mv("r6", "r5")}}));
  out.emplace("S2", PlaySet());
  out.emplace("S3", set({{mv("r7", "r8"), mv("r9", "r10")}}));
  out.emplace("S4", set({{mv("r9", "r10")}}));
  out.emplace("S5", PlaySet());
  out.emplace("S6", indstr(out.at("S2"), out.at("S5")));
  out.emplace("Id_C,0", PlaySet());
  out.emplace("Id_C,1", materialize(g, identity_strategy(g, term(g, "C(L1)")), 1));
  out.emplace("Id_D,1", set({{mv("r14", "r14")}}));
  out.emplace("Id_D,2", materialize(g, identity_strategy(g, term(g, "D(L1)")), 2));
  out.emplace("Id_E,1", set({{mv("r14", "r14")}}));
  out.emplace("Id_E,2", materialize(g, identity_strategy(g, term(g, "E(L1)")), 2));
  return out;
}

IntensionalStrategy identity_on_c(const Grammar& g) {
  return identity_strategy(g, term(g, "C(L1)"));
}

Basis counterexample_basis(const Grammar& g) {
  auto diag = [&](const std::string& t) {
    Term value = term(g, t);
    return TermPair{value, value};
  };
  return Basis::of({diag("C(L1)"), diag("D(L1)"), diag("E(L1)")});
}

namespace {

std::string verdict_string(const StrategyVerdict& v, const Grammar& g) {
  if (v.accepted) {
    if (v.prefix_depth >= 0) {
      return "accepted(n=" + std::to_string(v.prefix_depth) + ")";
    }
    return "accepted";
  }
  std::string out = "rejected(";
  out += condition_name(v.violated);
  if (v.witness) {
    out += '@';
    std::string play = play_to_string(g, *v.witness);
    out += play.empty() ? "eps" : play;
  }
  out += ')';
  return out;
}

class ClaimList {
 public:
  void add(std::string id, std::string description, std::string expected,
           std::string computed, std::optional<std::string> witness = std::nullopt) {
    ClaimResult claim;
    claim.id = std::move(id);
    claim.description = std::move(description);
    claim.expected = std::move(expected);
    claim.computed = std::move(computed);
    claim.pass = claim.expected == claim.computed;
    claim.witness = std::move(witness);
    claims_.push_back(std::move(claim));
  }

  std::vector<ClaimResult> sorted() && {
    std::sort(claims_.begin(), claims_.end(),
              [](const ClaimResult& a, const ClaimResult& b) { return a.id < b.id; });
    return std::move(claims_);
  }

 private:
  std::vector<ClaimResult> claims_;
};

}  // namespace

std::vector<ClaimResult> run_repro(std::size_t budget, int k_min, int k_max, Exec exec) {
  if (budget < 10000) throw Error("repro budget must be at least 10000 states");
  if (k_min < 1 || k_max < k_min) throw Error("bad family depth range");

  Grammar g = counterexample_grammar();
  auto strategies = counterexample_strategies(g);
  const PlaySet& s = strategies.at("S");
  TermPair ab{term(g, "A(bot)"), term(g, "B(bot)")};
  TermPair ee_bot{term(g, "E(bot)"), term(g, "E(bot)")};
  TermPair ee_l1{term(g, "E(L1)"), term(g, "E(L1)")};

  ClaimList claims;

  claims.add("eqlv-ab", "equivalence level of (A(bot), B(bot))", "Exact(3)",
             eq_level(g, ab, budget, exec).to_string());

  {
    std::vector<int> aaab(4, g.action_index("a"));
    aaab[3] = g.action_index("b");
    bool from_a = word_reachable(g, ab.left, aaab);
    bool from_b = word_reachable(g, ab.right, aaab);
    claims.add("word-aaab", "the action word aaab distinguishes A(bot) from B(bot)",
               "A:false B:true",
               std::string("A:") + (from_a ? "true" : "false") +
                   " B:" + (from_b ? "true" : "false"),
               "aaab");
  }

  claims.add("prefix-s", "S is a finite strategy prefix for (A(bot), B(bot))",
             "accepted(n=3)", verdict_string(check_finite_prefix(g, ab, s), g));

  {
    auto mv = [&](const std::string& a, const std::string& b) {
      return MovePair{rule(g, a), rule(g, b)};
    };
    std::vector<Play> mutated{{mv("r1", "r3"), mv("r5", "r6")},
                              {mv("r2", "r4"), mv("r7", "r8"), mv("r9", "r10")}};
    claims.add("prefix-s-mutation",
               "dropping the play r1:r3 r6:r5 breaks fullness below r1:r3",
               "rejected(DQ4@r1:r3)",
               verdict_string(
                   check_finite_prefix(g, ab, PlaySet::from_plays(mutated)), g));
  }

  claims.add("strategy-eqlv-s6",
             "rounds survived by S6 at (E(bot), E(bot))", "Exact(0)",
             strategy_eq_level(g, ee_bot, strategies.at("S6"), budget, exec).to_string());
  claims.add("strategy-eqlv-s", "rounds survived by S at (A(bot), B(bot))", "Exact(3)",
             strategy_eq_level(g, ab, s, budget, exec).to_string());

  {
    EqLevel lhs = eq_level(g, ee_l1, budget, exec);
    EqLevel rhs = eq_level(g, ee_bot, budget, exec);
    bool holds = rhs.is_infinite() || (!lhs.is_infinite() && lhs.n() <= rhs.n());
    claims.add("ineq-14-instance",
               "level of (E(L1), E(L1)) is at most the level of (E(bot), E(bot))",
               "Infinite<=Infinite",
               lhs.to_string() + (holds ? "<=" : ">") + rhs.to_string());
  }
  {
    EqLevel lhs = eq_level(g, ee_l1, budget, exec);
    EqLevel rhs = strategy_eq_level(g, ee_bot, strategies.at("S6"), budget, exec);
    bool strict = lhs.is_infinite() ? !rhs.is_infinite()
                                    : !rhs.is_infinite() && lhs.n() > rhs.n();
    claims.add("ineq-15-instance",
               "level of (E(L1), E(L1)) exceeds the S6-relative level of "
               "(E(bot), E(bot))",
               "Infinite>Exact(0)",
               lhs.to_string() + (strict ? ">" : "<=") + rhs.to_string());
  }

  {
    TermPair dd{term(g, "D(L1)"), term(g, "D(L1)")};
    TermPair ee{term(g, "E(L1)"), term(g, "E(L1)")};
    TermPair cc{term(g, "C(L1)"), term(g, "C(L1)")};
    claims.add("winning-id-d2", "Id_D,2 wins the game at (D(L1), D(L1))", "accepted",
               verdict_string(check_winning(g, dd, strategies.at("Id_D,2")), g));
    claims.add("winning-id-e2", "Id_E,2 wins the game at (E(L1), E(L1))", "accepted",
               verdict_string(check_winning(g, ee, strategies.at("Id_E,2")), g));
    claims.add("prefix-id-c1", "Id_C,1 is a finite strategy prefix at (C(L1), C(L1))",
               "accepted(n=1)",
               verdict_string(check_finite_prefix(g, cc, strategies.at("Id_C,1")), g));
  }

  {
    auto mv = [&](const std::string& a, const std::string& b) {
      return MovePair{rule(g, a), rule(g, b)};
    };
    auto residual_claim = [&](const std::string& id, const PlaySet& from,
                              const Play& alpha, const std::string& expect_name) {
      bool equal = from.residual(alpha) == strategies.at(expect_name);
      claims.add(id, "residual at " + play_to_string(g, alpha) + " equals " + expect_name,
                 "equal", equal ? "equal" : "different");
    };
    residual_claim("residual-s1", s, {mv("r1", "r3")}, "S1");
    residual_claim("residual-s3", s, {mv("r2", "r4")}, "S3");
    residual_claim("residual-s4", strategies.at("S3"), {mv("r7", "r8")}, "S4");
  }

  claims.add("indstr-s2-s5", "composition of S2 and S5 is the trivial play set",
             "{(eps,eps)}",
             indstr(strategies.at("S2"), strategies.at("S5")) == PlaySet()
                 ? "{(eps,eps)}"
                 : "nontrivial");

  for (int k = k_min; k <= k_max; ++k) {
    Grammar fam = family_grammar(k);
    TermPair fam_ab{term(fam, "A(bot)"), term(fam, "B(bot)")};
    claims.add("family-k" + std::to_string(k),
               "equivalence level of (A(bot), B(bot)) in the depth-" +
                   std::to_string(k) + " variant",
               "Exact(" + std::to_string(3 + k) + ")",
               eq_level(fam, fam_ab, budget, exec).to_string());
  }

  {
    Basis basis = counterexample_basis(g);
    std::string computed;
    for (const TermPair& p : basis.pairs) {
      if (!computed.empty()) computed += ',';
      computed += eq_level(g, p, budget, exec).to_string();
    }
    claims.add("basis-reflexive", "all basis pairs are bisimilar",
               "Infinite,Infinite,Infinite", computed);
  }

  {
    // S spelled as pairs of label words, lifted through the grammar: the
    // lifting must reproduce the explicit play set.
    auto label = [&](char c) { return g.tlabel_index(std::string(1, c)); };
    auto word = [&](const std::string& w) {
      std::vector<int> out;
      for (char c : w) out.push_back(label(c));
      return out;
    };
    std::vector<std::pair<std::vector<int>, std::vector<int>>> generators = {
        {word("yx"), word("xy")}, {word("yy"), word("xx")}, {word("xxx"), word("yxx")}};
    bool equal = playset_from_label_words(g, ab, generators) == s;
    claims.add("s-construction", "S lifted from its label words matches its play set",
               "equal", equal ? "equal" : "different");
  }

  {
    StrategyVerdict prefix = check_finite_prefix(g, ab, s);
    bool axiom_ok = false;
    if (prefix.accepted) {
      SystemParams params = SystemParams::create(g, ab, s, counterexample_basis(g));
      Judgment axiom;
      axiom.form = 1;
      axiom.m = 0;
      axiom.pair = ab;
      axiom.strategy = s;
      axiom_ok = check_axiom(params, axiom) && check_judgment(g, axiom).valid;
    }
    EqLevel level = eq_level(g, ab, budget, exec);
    bool finite = level.kind() == EqLevel::Kind::exact;
    claims.add("non-soundness",
               "a well-formed certificate exists although the pair is not bisimilar",
               "certificate-accepted-and-level-finite",
               prefix.accepted && axiom_ok && finite
                   ? "certificate-accepted-and-level-finite"
                   : "inconsistent",
               level.to_string());
  }

  return std::move(claims).sorted();
}

bool all_pass(const std::vector<ClaimResult>& claims) {
  return std::all_of(claims.begin(), claims.end(),
                     [](const ClaimResult& c) { return c.pass; });
}

nlohmann::ordered_json repro_report(const std::vector<ClaimResult>& claims) {
  nlohmann::ordered_json doc;
  auto list = nlohmann::ordered_json::array();
  for (const ClaimResult& c : claims) {
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["description"] = c.description;
    entry["expected"] = c.expected;
    entry["computed"] = c.computed;
    entry["pass"] = c.pass;
    if (c.witness) entry["witness"] = *c.witness;
    list.push_back(std::move(entry));
  }
  doc["claims"] = std::move(list);
  doc["all_pass"] = all_pass(claims);
  return doc;
}

}  // namespace fog
