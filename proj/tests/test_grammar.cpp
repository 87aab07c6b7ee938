#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "fog/grammar.hpp"
#include "fog/refinement.hpp"
#include "fog/repro.hpp"
#include "support/random_gen.hpp"

namespace {

fog::Term term(const fog::Grammar& g, const std::string& text) {
  auto result = fog::parse_term(g, text);
  REQUIRE(result.ok());
  return *result.term;
}

std::vector<std::string> rule_ids(const fog::Grammar& g, const std::vector<int>& rules) {
  std::vector<std::string> ids;
  for (int r : rules) ids.push_back(fog::rule_to_string(g, r));
  return ids;
}

std::vector<int> word(const fog::Grammar& g, const std::string& letters) {
  std::vector<int> out;
  for (char c : letters) {
    int a = g.action_index(std::string(1, c));
    REQUIRE(a >= 0);
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("bundled grammar parses with the expected shape") {
  fog::Grammar g = fog::counterexample_grammar();
  CHECK(g.nonterminals().size() == 10);
  CHECK(g.rules().size() == 14);
  CHECK(g.actions().size() == 3);
  CHECK(g.tlabels().size() == 4);
  CHECK(g.nonterminal_index("A''") >= 0);
  CHECK(g.nonterminals()[static_cast<std::size_t>(g.nonterminal_index("L1"))].arity == 0);
}

TEST_CASE("bundled grammar file matches the built-in text") {
  std::ifstream in(FOG_DATA_DIR "/counterexample.fog", std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  fog::GrammarParseResult from_file = fog::parse_grammar(buffer.str());
  REQUIRE(from_file.ok());
  fog::Grammar g = fog::counterexample_grammar();
  CHECK(from_file.grammar->rules().size() == g.rules().size());
  for (std::size_t i = 0; i < g.rules().size(); ++i) {
    CHECK(from_file.grammar->rules()[i].id == g.rules()[i].id);
    CHECK(from_file.grammar->rules()[i].action == g.rules()[i].action);
  }
}

TEST_CASE("empty rule section still yields a grammar") {
  auto result = fog::parse_grammar("actions a\nlabels x->a\nnt A:1\n");
  REQUIRE(result.ok());
  CHECK(result.grammar->rules().empty());
}

TEST_CASE("parser diagnostics") {
  SUBCASE("arity mismatch in a rule rhs") {
    auto result = fog::parse_grammar(
        "actions a\nlabels y->a\nnt A:1 C:1\nrule r1 A(v) y C(v,v)\n");
    REQUIRE(!result.ok());
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].line == 4);
    CHECK(result.diagnostics[0].message.find("arity mismatch") != std::string::npos);
  }
  SUBCASE("duplicate rule id") {
    auto result = fog::parse_grammar(
        "actions a\nlabels y->a\nnt A:1\nrule r1 A(v) y v\nrule r1 A(v) y bot\n");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics[0].message.find("duplicate rule id") != std::string::npos);
  }
  SUBCASE("undeclared label") {
    auto result =
        fog::parse_grammar("actions a\nlabels y->a\nnt A:1\nrule r1 A(v) q v\n");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics[0].message.find("undeclared label") != std::string::npos);
  }
  SUBCASE("label mapped to undeclared action") {
    auto result = fog::parse_grammar("actions a\nlabels y->q\nnt A:1\n");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics[0].message.find("undeclared action") != std::string::npos);
  }
  SUBCASE("unmapped label") {
    auto result = fog::parse_grammar("actions a\nlabels y\nnt A:1\n");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics[0].message.find("not mapped") != std::string::npos);
  }
  SUBCASE("rule head variables must be positional") {
    auto result = fog::parse_grammar(
        "actions a\nlabels y->a\nnt A:2\nrule r1 A(v2,v1) y bot\n");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics[0].message.find("v1..vn in order") != std::string::npos);
  }
  SUBCASE("reserved names cannot be declared") {
    auto result = fog::parse_grammar("actions a\nlabels y->a\nnt bot:1 v2:0\n");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics.size() == 2);
  }
  SUBCASE("rhs variable exceeding the head arity") {
    auto result =
        fog::parse_grammar("actions a\nlabels y->a\nnt A:1\nrule r1 A(v) y v2\n");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics[0].message.find("exceeds the head arity") !=
          std::string::npos);
  }
  SUBCASE("unknown symbol in a term") {
    fog::Grammar g = fog::counterexample_grammar();
    auto result = fog::parse_term(g, "Q(bot)");
    REQUIRE(!result.ok());
    CHECK(result.diagnostics[0].message.find("unknown nonterminal") != std::string::npos);
  }
  SUBCASE("variables rejected outside rules") {
    fog::Grammar g = fog::counterexample_grammar();
    auto result = fog::parse_term(g, "A(v)");
    REQUIRE(!result.ok());
  }
}

TEST_CASE("term printing round-trips") {
  fog::Grammar g = fog::counterexample_grammar();
  for (const char* text : {"bot", "L1", "A(bot)", "C(A(L1))"}) {
    fog::Term t = term(g, text);
    CHECK(fog::term_to_string(g, t) == text);
  }
}

TEST_CASE("enabled_rules") {
  fog::Grammar g = fog::counterexample_grammar();
  CHECK(rule_ids(g, fog::enabled_rules(g, term(g, "A(bot)"))) ==
        std::vector<std::string>{"r1", "r2"});
  CHECK(fog::enabled_rules(g, fog::Term::bot()).empty());
  CHECK(rule_ids(g, fog::enabled_rules(g, term(g, "E(L1)"))) ==
        std::vector<std::string>{"r12", "r13"});
  CHECK_THROWS_AS(fog::enabled_rules(g, fog::Term::app(99, {fog::Term::bot()})),
                  fog::Error);
}

TEST_CASE("apply_rule") {
  fog::Grammar g = fog::counterexample_grammar();
  CHECK(fog::apply_rule(g, term(g, "A(bot)"), g.rule_index("r1")) == term(g, "C(bot)"));
  CHECK(fog::apply_rule(g, term(g, "D(L1)"), g.rule_index("r11")) == term(g, "L1"));
  CHECK(fog::apply_rule(g, term(g, "L1"), g.rule_index("r14")) == fog::Term::bot());
  CHECK_THROWS_AS(fog::apply_rule(g, term(g, "A(bot)"), g.rule_index("r14")),
                  fog::Error);
}

TEST_CASE("act is total on the rule set and matches the label map") {
  fog::Grammar g = fog::counterexample_grammar();
  CHECK(g.actions()[static_cast<std::size_t>(fog::act(g, g.rule_index("r5")))].name == "a");
  CHECK(g.actions()[static_cast<std::size_t>(fog::act(g, g.rule_index("r13")))].name == "b");
  CHECK(g.actions()[static_cast<std::size_t>(fog::act(g, g.rule_index("r14")))].name ==
        "l1");
  for (int i = 0; i < 12; ++i) {
    CHECK(g.actions()[static_cast<std::size_t>(fog::act(g, i))].name == "a");
  }
  CHECK_THROWS_AS(fog::act(g, 99), fog::Error);
}

TEST_CASE("word_reachable on the bundled grammar") {
  fog::Grammar g = fog::counterexample_grammar();
  CHECK(!fog::word_reachable(g, term(g, "A(bot)"), word(g, "aaab")));
  CHECK(fog::word_reachable(g, term(g, "B(bot)"), word(g, "aaab")));
  CHECK(fog::word_reachable(g, fog::Term::bot(), {}));
}

TEST_CASE("word_reachable is monotone under prefixes") {
  std::mt19937 rng(20240811);
  for (int sample = 0; sample < 100; ++sample) {
    fog::Grammar g = testgen::random_grammar(rng, false);
    fog::Term t = testgen::random_term(rng, g, 3);
    std::uniform_int_distribution<int> len_dist(1, 4);
    std::uniform_int_distribution<int> act_dist(
        0, static_cast<int>(g.actions().size()) - 1);
    std::vector<int> w;
    int len = len_dist(rng);
    for (int i = 0; i < len; ++i) w.push_back(act_dist(rng));
    if (fog::word_reachable(g, t, w)) {
      for (std::size_t cut = 0; cut < w.size(); ++cut) {
        CHECK(fog::word_reachable(g, t, std::span<const int>(w.data(), cut)));
      }
    }
    CHECK(fog::word_reachable(g, t, {}));
  }
}

TEST_CASE("apply_rule is defined exactly on the enabled rules") {
  std::mt19937 rng(20240812);
  for (int sample = 0; sample < 100; ++sample) {
    fog::Grammar g = testgen::random_grammar(rng, false);
    fog::Term t = testgen::random_term(rng, g, 3);
    std::vector<int> enabled = fog::enabled_rules(g, t);
    for (int r = 0; r < static_cast<int>(g.rules().size()); ++r) {
      bool in_enabled = std::find(enabled.begin(), enabled.end(), r) != enabled.end();
      if (in_enabled) {
        CHECK_NOTHROW(fog::apply_rule(g, t, r));
      } else {
        CHECK_THROWS_AS(fog::apply_rule(g, t, r), fog::Error);
      }
    }
  }
}

TEST_CASE("terms reachable from the bundled roots stay small and narrow") {
  fog::Grammar g = fog::counterexample_grammar();
  fog::Term roots[2] = {term(g, "A(bot)"), term(g, "B(bot)")};
  fog::Lts lts = fog::explore(g, roots, 1000);
  CHECK(lts.closed);
  CHECK(lts.states.size() <= 20);
  for (const fog::Term& t : lts.states) {
    CHECK(fog::enabled_rules(g, t).size() <= 2);
  }
}

TEST_CASE("family grammar") {
  CHECK_THROWS_AS(fog::family_grammar(0), fog::Error);
  fog::Grammar g1 = fog::family_grammar(1);
  CHECK(g1.nonterminal_index("D1") >= 0);
  CHECK(g1.nonterminal_index("E1") >= 0);
  // D has a single rule, into D1.
  auto d_rules = g1.rules_for_head(g1.nonterminal_index("D"));
  REQUIRE(d_rules.size() == 1);
  CHECK(g1.rules()[static_cast<std::size_t>(d_rules[0])].rhs.index ==
        g1.nonterminal_index("D1"));
  // The distinguishing word gains one letter per chain step.
  fog::Term a = term(g1, "A(bot)");
  fog::Term b = term(g1, "B(bot)");
  CHECK(fog::word_reachable(g1, b, word(g1, "aaaab")));
  CHECK(!fog::word_reachable(g1, a, word(g1, "aaaab")));
  fog::Grammar g3 = fog::family_grammar(3);
  CHECK(fog::word_reachable(g3, term(g3, "B(bot)"), word(g3, "aaaaaab")));
  CHECK(!fog::word_reachable(g3, term(g3, "A(bot)"), word(g3, "aaaaaab")));
}
