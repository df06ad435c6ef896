#include <doctest.h>

#include "fsmsynth/scenario.hpp"

using namespace fsmsynth;

namespace {

Alphabet crowdfunding_alphabet() {
  return Alphabet::make({"donate", "getFunds", "reclaim"}, {}, {"donationOver", "notFunded"});
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("parses the crowdfunding scenarios") {
  Alphabet a = crowdfunding_alphabet();

  auto s1 = parse_scenarios("donate; donate; donate", a);
  REQUIRE(s1.size() == 1);
  REQUIRE(s1[0].steps.size() == 3);
  for (const auto& step : s1[0].steps) {
    CHECK(step.event == "donate");
    CHECK(step.guard == GuardExpr::always());
    CHECK(step.actions == std::vector<std::string>{"a_donate"});
  }

  auto s2 = parse_scenarios("getFunds[donationOver]; reclaim[notFunded]; reclaim[notFunded]", a);
  REQUIRE(s2.size() == 1);
  REQUIRE(s2[0].steps.size() == 3);
  CHECK(s2[0].steps[0].event == "getFunds");
  CHECK(s2[0].steps[0].guard == GuardExpr::var("donationOver"));
  CHECK(s2[0].steps[1].guard == GuardExpr::var("notFunded"));
}

TEST_CASE("blank lines and comments yield no scenarios") {
  Alphabet a = crowdfunding_alphabet();
  auto ss = parse_scenarios("\n# comment only\n   \ndonate\n", a);
  REQUIRE(ss.size() == 1);
  CHECK(ss[0].steps.size() == 1);
  CHECK(parse_scenarios("", a).empty());
}

TEST_CASE("explicit actions, slash forms and negated guards") {
  Alphabet a = Alphabet::make({"noRemove", "publish"}, {"cleanup"}, {"late"});

  auto ss = parse_scenarios("noRemove/cleanup,a_publish; publish[!late]/; publish", a);
  REQUIRE(ss.size() == 1);
  REQUIRE(ss[0].steps.size() == 3);
  CHECK(ss[0].steps[0].actions == std::vector<std::string>{"cleanup", "a_publish"});
  CHECK(ss[0].steps[1].actions == std::vector<std::string>{"a_publish"});
  CHECK(ss[0].steps[1].guard == GuardExpr::not_var("late"));

  // An event name in action position resolves to its implicit action.
  auto alias = parse_scenarios("noRemove/publish", a);
  CHECK(alias[0].steps[0].actions == std::vector<std::string>{"a_publish"});
}

TEST_CASE("repetition suffix expands the step") {
  Alphabet a = crowdfunding_alphabet();
  auto ss = parse_scenarios("donate x4; getFunds[donationOver]", a);
  REQUIRE(ss[0].steps.size() == 5);
  CHECK(ss[0].steps[3].event == "donate");
  CHECK(ss[0].steps[4].event == "getFunds");

  auto with_actions = parse_scenarios("donate/a_donate x3", a);
  CHECK(with_actions[0].steps.size() == 3);

  CHECK_THROWS_AS(parse_scenarios("donate x0", a), ParseError);
}

TEST_CASE("parse errors carry line and column and name the culprit") {
  Alphabet a = crowdfunding_alphabet();
  try {
    parse_scenarios("donate; dnate", a);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("dnate") != std::string::npos);
    CHECK(e.where().line == 1);
    CHECK(e.where().column == 9);
  }
  CHECK_THROWS_AS(parse_scenarios("donate[missing]", a), ParseError);
  CHECK_THROWS_AS(parse_scenarios("donate/missing", a), ParseError);
  CHECK_THROWS_AS(parse_scenarios("donate[", a), ParseError);
  // Guards are not events and cannot start a step.
  CHECK_THROWS_AS(parse_scenarios("donationOver", a), ParseError);
}

TEST_CASE("tree merges shared prefixes") {
  Alphabet a = crowdfunding_alphabet();
  auto scenarios = parse_scenarios(
      "donate; donate; donate\n"
      "donate; getFunds[donationOver]; reclaim[notFunded]; reclaim[notFunded]",
      a);
  ScenarioTree tree = build_scenario_tree(scenarios);
  // Shared `donate` root child: 1 root + 1 shared + 2 tail + 3 tail.
  CHECK(tree.node_count() == 7);
  REQUIRE(tree.children[0].size() == 1);
  CHECK(tree.children[0][0].event == "donate");
}

TEST_CASE("degenerate trees") {
  Alphabet a = crowdfunding_alphabet();
  CHECK(build_scenario_tree({Scenario{}}).node_count() == 1);
  auto s1 = parse_scenarios("donate; donate; donate", a);
  CHECK(build_scenario_tree(s1).node_count() == 4);
}

TEST_CASE("conflicting outputs on a shared prefix are an error") {
  Alphabet a = Alphabet::make({"pay"}, {"log"}, {});
  auto scenarios = parse_scenarios("pay/a_pay\npay/log", a);
  try {
    build_scenario_tree(scenarios);
    FAIL("expected a consistency error");
  } catch (const ValidationError& e) {
    std::string what = e.what();
    CHECK(what.find("1") != std::string::npos);
    CHECK(what.find("2") != std::string::npos);
    CHECK(what.find("pay") != std::string::npos);
  }
}

TEST_CASE("property: every scenario is a root path with identical labels") {
  Alphabet a = crowdfunding_alphabet();
  auto scenarios = parse_scenarios(
      "donate; donate; donate\n"
      "getFunds[donationOver]; reclaim[notFunded]; reclaim[notFunded]\n"
      "donate; getFunds[donationOver]; reclaim[notFunded]; reclaim[notFunded]",
      a);
  ScenarioTree tree = build_scenario_tree(scenarios);

  std::size_t total_steps = 0;
  for (const auto& s : scenarios) {
    total_steps += s.steps.size();
    int node = 0;
    for (const auto& step : s.steps) {
      bool found = false;
      for (const auto& e : tree.children[node]) {
        if (e.event == step.event && e.guard == step.guard) {
          REQUIRE(e.actions == step.actions);
          node = e.child;
          found = true;
          break;
        }
      }
      REQUIRE(found);
    }
  }
  CHECK(tree.node_count() <= static_cast<int>(1 + total_steps));
}

TEST_CASE("scn files accept a header or an external alphabet") {
  std::string text =
      "events: donate\n"
      "\n"
      "donate; donate\n";
  ScenarioFile f = load_scn_file(text);
  CHECK(f.scenarios.size() == 1);
  CHECK(f.alphabet.is_event("donate"));

  Alphabet external = Alphabet::make({"donate"}, {}, {});
  ScenarioFile g = load_scn_file("donate\n", external);
  CHECK(g.scenarios.size() == 1);

  CHECK_THROWS_AS(load_scn_file("donate\n"), ParseError);  // no alphabet at all
  Alphabet other = Alphabet::make({"bid"}, {}, {});
  CHECK_THROWS_AS(load_scn_file(text, other), ValidationError);
}

TEST_SUITE_END();
