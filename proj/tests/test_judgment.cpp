#include "doctest.h"

#include "fog/judgment.hpp"
#include "fog/repro.hpp"

namespace {

struct Fixture {
  fog::Grammar g = fog::counterexample_grammar();
  std::map<std::string, fog::PlaySet> strategies = fog::counterexample_strategies(g);

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

  fog::Judgment form1() const {
    fog::Judgment j;
    j.form = 1;
    j.m = 0;
    j.pair = pair("A(bot)", "B(bot)");
    j.strategy = strategies.at("S");
    return j;
  }
};

}  // namespace

TEST_CASE("form 1 judgments") {
  Fixture f;
  CHECK(fog::check_judgment(f.g, f.form1()).valid);

  fog::Judgment bad = f.form1();
  bad.strategy = fog::PlaySet::from_plays(
      {fog::Play{f.mv("r1", "r3"), f.mv("r5", "r6")},
       fog::Play{f.mv("r2", "r4"), f.mv("r7", "r8"), f.mv("r9", "r10")}});
  fog::JudgmentVerdict verdict = fog::check_judgment(f.g, bad);
  CHECK(!verdict.valid);
  REQUIRE(verdict.failures.size() == 1);
  CHECK(verdict.failures[0] == "S-not-finite-prefix");
}

TEST_CASE("form 2 judgments") {
  Fixture f;
  fog::Judgment j = f.form1();
  j.form = 2;
  j.alpha = fog::Play{f.mv("r1", "r3")};
  j.pair1 = f.pair("C(bot)", "C(bot)");
  j.strategy1 = f.strategies.at("S1");
  CHECK(fog::check_judgment(f.g, j).valid);

  SUBCASE("wrong residual") {
    j.strategy1 = f.strategies.at("S3");
    fog::JudgmentVerdict verdict = fog::check_judgment(f.g, j);
    CHECK(!verdict.valid);
    CHECK(std::find(verdict.failures.begin(), verdict.failures.end(),
                    "residual-mismatch") != verdict.failures.end());
  }
  SUBCASE("wrong successor pair") {
    j.pair1 = f.pair("C(bot)", "B'(bot)");
    fog::JudgmentVerdict verdict = fog::check_judgment(f.g, j);
    CHECK(!verdict.valid);
    CHECK(std::find(verdict.failures.begin(), verdict.failures.end(),
                    "pair1-mismatch") != verdict.failures.end());
  }
}

TEST_CASE("form 3 judgments") {
  Fixture f;
  fog::Judgment j = f.form1();
  j.form = 3;
  j.alpha = fog::Play{f.mv("r2", "r4"), f.mv("r7", "r8"), f.mv("r9", "r10")};
  CHECK(fog::check_judgment(f.g, j).valid);

  j.alpha = fog::Play{f.mv("r14", "r14")};
  fog::JudgmentVerdict verdict = fog::check_judgment(f.g, j);
  CHECK(!verdict.valid);
  REQUIRE(verdict.failures.size() == 1);
  CHECK(verdict.failures[0] == "alpha-not-in-S");
}

TEST_CASE("valid form-2 successors are quasi-strategies") {
  Fixture f;
  fog::TermPair ab = f.pair("A(bot)", "B(bot)");
  const fog::PlaySet& s = f.strategies.at("S");
  for (const fog::Play& alpha : s.plays()) {
    fog::Judgment j = f.form1();
    j.form = 2;
    j.alpha = alpha;
    j.pair1 = fog::next_pair(f.g, ab, alpha);
    j.strategy1 = s.residual(alpha);
    if (fog::check_judgment(f.g, j).valid) {
      CHECK(fog::check_dq(f.g, *j.pair1, *j.strategy1).accepted);
    }
  }
}

TEST_CASE("system axiom") {
  Fixture f;
  fog::SystemParams params = fog::SystemParams::create(
      f.g, f.pair("A(bot)", "B(bot)"), f.strategies.at("S"),
      fog::counterexample_basis(f.g));
  CHECK(fog::check_axiom(params, f.form1()));

  fog::Judgment wrong_m = f.form1();
  wrong_m.m = 1;
  CHECK(!fog::check_axiom(params, wrong_m));

  fog::Judgment other_system = f.form1();
  other_system.pair = f.pair("C(L1)", "C(L1)");
  other_system.strategy = f.strategies.at("Id_C,1");
  CHECK(!fog::check_axiom(params, other_system));
  // ... although it is the axiom of its own system.
  fog::SystemParams c_params = fog::SystemParams::create(
      f.g, f.pair("C(L1)", "C(L1)"), f.strategies.at("Id_C,1"),
      fog::counterexample_basis(f.g));
  CHECK(fog::check_axiom(c_params, other_system));

  CHECK(fog::check_judgment(f.g, f.form1()).valid);  // axiom well-formedness

  // System parameters with a broken strategy are rejected at construction.
  fog::PlaySet broken = fog::PlaySet::from_plays(
      {fog::Play{f.mv("r1", "r3"), f.mv("r5", "r6")},
       fog::Play{f.mv("r2", "r4"), f.mv("r7", "r8"), f.mv("r9", "r10")}});
  CHECK_THROWS_AS(fog::SystemParams::create(f.g, f.pair("A(bot)", "B(bot)"), broken,
                                            fog::counterexample_basis(f.g)),
                  fog::Error);
}

TEST_CASE("basis deduplicates") {
  Fixture f;
  fog::Basis b = fog::Basis::of({f.pair("C(L1)", "C(L1)"), f.pair("C(L1)", "C(L1)")});
  CHECK(b.pairs.size() == 1);
  CHECK(b.contains(f.pair("C(L1)", "C(L1)")));
  CHECK(!b.contains(f.pair("D(L1)", "D(L1)")));
}

TEST_CASE("judgment JSON round-trips") {
  Fixture f;
  fog::Judgment j = f.form1();
  j.form = 2;
  j.alpha = fog::Play{f.mv("r1", "r3")};
  j.pair1 = f.pair("C(bot)", "C(bot)");
  j.strategy1 = f.strategies.at("S1");

  nlohmann::ordered_json doc = fog::judgment_to_json(f.g, j);
  CHECK(doc["form"] == 2);
  CHECK(doc["pair"][0] == "A(bot)");
  fog::JudgmentParseResult parsed = fog::judgment_from_json(f.g, doc);
  REQUIRE(parsed.ok());
  CHECK(parsed.judgment->form == j.form);
  CHECK(parsed.judgment->m == j.m);
  CHECK(parsed.judgment->pair == j.pair);
  CHECK(parsed.judgment->strategy == j.strategy);
  CHECK(*parsed.judgment->alpha == *j.alpha);
  CHECK(*parsed.judgment->pair1 == *j.pair1);
  CHECK(*parsed.judgment->strategy1 == *j.strategy1);
  CHECK(fog::check_judgment(f.g, *parsed.judgment).valid);

  fog::JudgmentParseResult bad =
      fog::judgment_from_json(f.g, nlohmann::json{{"form", 5}});
  CHECK(!bad.ok());
}
