#include <random>

#include "doctest.h"

#include "fog/game.hpp"
#include "fog/repro.hpp"
#include "support/oracle.hpp"
#include "support/random_gen.hpp"

namespace {

struct Fixture {
  fog::Grammar g = fog::counterexample_grammar();

  fog::Term term(const std::string& text) const {
    auto result = fog::parse_term(g, text);
    REQUIRE(result.ok());
    return *result.term;
  }
  fog::TermPair pair(const std::string& l, const std::string& r) const {
    return {term(l), term(r)};
  }
  fog::MovePair mv(const std::string& a, const std::string& b) const {
    return {g.rule_index(a), g.rule_index(b)};
  }
};

}  // namespace

TEST_CASE("is_play") {
  Fixture f;
  fog::TermPair ab = f.pair("A(bot)", "B(bot)");
  CHECK(fog::is_play(f.g, ab, {f.mv("r1", "r3")}));
  CHECK(fog::is_play(f.g, ab, {}));
  // r1 and r4 share an action and are enabled on their sides, so the play is
  // valid; r14 is enabled on neither root.
  CHECK(fog::is_play(f.g, ab, {f.mv("r1", "r4")}));
  CHECK(!fog::is_play(f.g, ab, {f.mv("r14", "r14")}));
  // Action mismatch: r13 answers b to an a-move.
  CHECK(!fog::is_play(f.g, f.pair("C(bot)", "E(bot)"), {f.mv("r5", "r13")}));
}

TEST_CASE("next_pair") {
  Fixture f;
  fog::TermPair ab = f.pair("A(bot)", "B(bot)");
  CHECK(fog::next_pair(f.g, ab, {f.mv("r1", "r3")}) == f.pair("C(bot)", "C(bot)"));
  CHECK(fog::next_pair(f.g, ab, {}) == ab);
  CHECK(fog::next_pair(f.g, ab, {f.mv("r1", "r3"), f.mv("r5", "r6")}) ==
        f.pair("D(bot)", "E(bot)"));
  CHECK_THROWS_AS(fog::next_pair(f.g, ab, {f.mv("r14", "r14")}), fog::Error);
}

TEST_CASE("next_pair composes") {
  Fixture f;
  fog::TermPair ab = f.pair("A(bot)", "B(bot)");
  fog::Play alpha = {f.mv("r1", "r3")};
  fog::Play beta = {f.mv("r5", "r6")};
  fog::Play both = alpha;
  both.insert(both.end(), beta.begin(), beta.end());
  CHECK(fog::next_pair(f.g, ab, both) ==
        fog::next_pair(f.g, fog::next_pair(f.g, ab, alpha), beta));
}

TEST_CASE("sim1") {
  Fixture f;
  CHECK(!fog::sim1(f.g, f.pair("D(bot)", "E(bot)")));
  CHECK(fog::sim1(f.g, {fog::Term::bot(), fog::Term::bot()}));
  CHECK(fog::sim1(f.g, f.pair("A''(bot)", "B''(bot)")));
}

TEST_CASE("full_for") {
  Fixture f;
  fog::MovePairSet cc = fog::make_move_pair_set({f.mv("r5", "r6"), f.mv("r6", "r5")});
  CHECK(fog::full_for(f.g, cc, f.pair("C(bot)", "C(bot)")));
  CHECK(fog::full_for(f.g, {}, {fog::Term::bot(), fog::Term::bot()}));
  CHECK(!fog::full_for(f.g, {}, f.pair("E(bot)", "E(bot)")));
  CHECK_THROWS_AS(fog::full_for(f.g, {f.mv("r5", "r13")}, f.pair("C(bot)", "E(bot)")),
                  fog::Error);
  // One-sided coverage is not enough.
  CHECK(!fog::full_for(f.g, {f.mv("r5", "r6")}, f.pair("C(bot)", "C(bot)")));
}

TEST_CASE("full_for with the maximal matching set agrees with sim1") {
  std::mt19937 rng(20240813);
  for (int sample = 0; sample < 200; ++sample) {
    fog::Grammar g = testgen::random_grammar(rng, false);
    fog::TermPair p = testgen::random_pair(rng, g);
    std::vector<fog::MovePair> all;
    if (!p.left.is_bot() && !p.right.is_bot()) {
      for (int r : fog::enabled_rules(g, p.left)) {
        for (int q : fog::enabled_rules(g, p.right)) {
          if (fog::act(g, r) == fog::act(g, q)) all.emplace_back(r, q);
        }
      }
    }
    CHECK(fog::full_for(g, fog::make_move_pair_set(std::move(all)), p) ==
          fog::sim1(g, p));
  }
}

TEST_CASE("strat_equiv on the bundled grammar") {
  Fixture f;
  fog::TermPair ab = f.pair("A(bot)", "B(bot)");
  CHECK(fog::strat_equiv(f.g, ab, 3));
  CHECK(!fog::strat_equiv(f.g, ab, 4));
  CHECK(fog::strat_equiv(f.g, f.pair("D(bot)", "E(bot)"), 0));
}

TEST_CASE("sim1 coincides with level-1 stratified equivalence") {
  std::mt19937 rng(20240814);
  for (int sample = 0; sample < 200; ++sample) {
    fog::Grammar g = testgen::random_grammar(rng, false);
    fog::TermPair p = testgen::random_pair(rng, g);
    CHECK(fog::sim1(g, p) == fog::strat_equiv(g, p, 1));
  }
}

TEST_CASE("eq_level on the bundled grammar") {
  Fixture f;
  CHECK(fog::eq_level(f.g, f.pair("A(bot)", "B(bot)"), 100000) ==
        fog::EqLevel::exact(3));
  CHECK(fog::eq_level(f.g, f.pair("E(L1)", "E(L1)"), 100000) ==
        fog::EqLevel::infinite());
  CHECK(fog::eq_level(f.g, f.pair("D(bot)", "E(bot)"), 100000) ==
        fog::EqLevel::exact(0));
  CHECK(fog::eq_level(f.g, {fog::Term::bot(), fog::Term::bot()}, 100000) ==
        fog::EqLevel::infinite());
}

TEST_CASE("eq_level coherence with strat_equiv") {
  Fixture f;
  for (const auto& [l, r] : std::vector<std::pair<std::string, std::string>>{
           {"A(bot)", "B(bot)"},
           {"D(bot)", "E(bot)"},
           {"C(bot)", "B'(bot)"},
           {"A'(bot)", "C(bot)"},
           {"E(L1)", "E(L1)"}}) {
    fog::TermPair p = f.pair(l, r);
    fog::EqLevel level = fog::eq_level(f.g, p, 100000);
    if (level.kind() == fog::EqLevel::Kind::exact) {
      CHECK(fog::strat_equiv(f.g, p, level.n()));
      CHECK(!fog::strat_equiv(f.g, p, level.n() + 1));
    } else if (level.is_infinite()) {
      for (unsigned n = 0; n <= 16; ++n) CHECK(fog::strat_equiv(f.g, p, n));
    }
  }
}

TEST_CASE("eq_level budget exhaustion reports a lower bound") {
  // Growing grammar: the reachable set from G(bot) is infinite.
  auto parsed = fog::parse_grammar(
      "actions a\nlabels x->a\nnt G:1\nrule r1 G(v) x G(G(v))\n");
  REQUIRE(parsed.ok());
  const fog::Grammar& g = *parsed.grammar;
  auto left = fog::parse_term(g, "G(bot)");
  auto right = fog::parse_term(g, "G(G(bot))");
  fog::EqLevel level = fog::eq_level(g, {*left.term, *right.term}, 50);
  CHECK(level.kind() == fog::EqLevel::Kind::at_least);
}

TEST_CASE("anti-monotonicity of stratified equivalence") {
  std::mt19937 rng(20240815);
  for (int sample = 0; sample < 200; ++sample) {
    fog::Grammar g = testgen::random_grammar(rng, false);
    fog::TermPair p = testgen::random_pair(rng, g);
    std::uniform_int_distribution<unsigned> n_dist(0, 5);
    unsigned n = n_dist(rng);
    if (fog::strat_equiv(g, p, n + 1)) CHECK(fog::strat_equiv(g, p, n));
  }
}

TEST_CASE("eq_level agrees with the game-tree oracle on random grammars") {
  std::mt19937 rng(20240816);
  for (int sample = 0; sample < 200; ++sample) {
    fog::Grammar g = testgen::random_grammar(rng, false);
    fog::TermPair p = testgen::random_pair(rng, g);
    long long value = oracle::bounded_level(g, p, 6);
    fog::EqLevel serial = fog::eq_level(g, p, 100000, fog::Exec::serial);
    fog::EqLevel parallel = fog::eq_level(g, p, 100000, fog::Exec::parallel);
    CHECK(serial == parallel);
    CHECK(oracle::agrees(serial, value, 6));
  }
}
