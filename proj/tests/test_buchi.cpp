#include <doctest.h>

#include <random>

#include "fsmsynth/buchi.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fsmsynth;

namespace {

Lasso make_lasso(std::vector<std::set<std::string>> prefix,
                 std::vector<std::set<std::string>> loop) {
  return Lasso{std::move(prefix), std::move(loop)};
}

}  // namespace

TEST_SUITE_BEGIN("buchi");

TEST_CASE("G a: one state with a self-loop requiring a") {
  BuchiAutomaton a = ltl_to_buchi(Formula::globally(Formula::atom("a")));
  REQUIRE(a.num_states == 1);
  REQUIRE(a.initial.size() == 1);
  CHECK(a.initial[0].pos == std::vector<std::string>{"a"});
  REQUIRE(a.edges[0].size() == 1);
  CHECK(a.edges[0][0].to == 0);
  CHECK(a.edges[0][0].pos == std::vector<std::string>{"a"});

  CHECK(testoracle::accepts_lasso(a, make_lasso({}, {{"a"}})));
  CHECK_FALSE(testoracle::accepts_lasso(a, make_lasso({{"a"}}, {{}})));
}

TEST_CASE("F a: acceptance forbids deferring a forever") {
  BuchiAutomaton a = ltl_to_buchi(Formula::future(Formula::atom("a")));
  CHECK(a.acceptance.size() == 1);  // one Until subformula
  CHECK(testoracle::accepts_lasso(a, make_lasso({}, {{"a"}})));
  CHECK(testoracle::accepts_lasso(a, make_lasso({{}, {}}, {{"a"}})));
  CHECK(testoracle::accepts_lasso(a, make_lasso({{"a"}}, {{}})));
  CHECK_FALSE(testoracle::accepts_lasso(a, make_lasso({}, {{}})));
  CHECK_FALSE(testoracle::accepts_lasso(a, make_lasso({{"b"}}, {{"b"}})));
}

TEST_CASE("degenerate formulas") {
  BuchiAutomaton top = ltl_to_buchi(Formula::tru());
  CHECK(top.num_states == 1);
  CHECK(testoracle::accepts_lasso(top, make_lasso({}, {{}})));

  BuchiAutomaton bottom = ltl_to_buchi(Formula::fls());
  CHECK(bottom.num_states == 0);
  CHECK_FALSE(testoracle::accepts_lasso(bottom, make_lasso({}, {{}})));

  CHECK_THROWS_AS(ltl_to_buchi(Formula::negation(Formula::globally(Formula::atom("a")))),
                  ValidationError);  // not NNF
}

TEST_CASE("until keeps its release dual apart") {
  FormulaPtr f = Formula::until(Formula::atom("a"), Formula::atom("b"));
  BuchiAutomaton a = ltl_to_buchi(f);
  CHECK(testoracle::accepts_lasso(a, make_lasso({{"a"}, {"a"}}, {{"b"}})));
  CHECK_FALSE(testoracle::accepts_lasso(a, make_lasso({{"a"}}, {{"a"}})));

  FormulaPtr g = Formula::release(Formula::atom("a"), Formula::atom("b"));
  BuchiAutomaton r = ltl_to_buchi(g);
  CHECK(testoracle::accepts_lasso(r, make_lasso({}, {{"b"}})));
  CHECK(testoracle::accepts_lasso(r, make_lasso({{"b"}}, {{"a", "b"}, {}})));
  CHECK_FALSE(testoracle::accepts_lasso(r, make_lasso({{"b"}}, {{}})));
}

TEST_CASE("property: automaton acceptance equals direct evaluation") {
  std::mt19937 rng(20240808);
  std::vector<std::string> atoms{"a", "b", "c"};
  for (int trial = 0; trial < 500; ++trial) {
    FormulaPtr f = to_nnf(testgen::random_formula(rng, atoms, 3));
    BuchiAutomaton a = ltl_to_buchi(f);
    Lasso w = testgen::random_lasso(rng, atoms, 4);
    CAPTURE(to_string(f));
    REQUIRE(testoracle::accepts_lasso(a, w) == eval_on_lasso(f, w));
  }
}

TEST_SUITE_END();
