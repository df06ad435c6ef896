#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "fsmsynth/sat.hpp"

using namespace fsmsynth;

namespace {

// Reference decision by exhaustive assignment enumeration.
bool brute_force_sat(int num_vars, const std::vector<std::vector<int>>& clauses) {
  for (unsigned assignment = 0; assignment < (1u << num_vars); ++assignment) {
    bool all = true;
    for (const auto& clause : clauses) {
      bool sat = false;
      for (int lit : clause) {
        bool value = (assignment >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == value) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool model_satisfies(const std::vector<bool>& model,
                     const std::vector<std::vector<int>>& clauses) {
  for (const auto& clause : clauses) {
    bool sat = false;
    for (int lit : clause)
      if ((lit > 0) == model[std::abs(lit)]) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

// Pigeonhole principle: n+1 pigeons into n holes, classic UNSAT family.
std::vector<std::vector<int>> pigeonhole(int holes) {
  int pigeons = holes + 1;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  std::vector<std::vector<int>> clauses;
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> some;
    for (int h = 0; h < holes; ++h) some.push_back(var(p, h));
    clauses.push_back(some);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) clauses.push_back({-var(p, h), -var(q, h)});
  return clauses;
}

}  // namespace

TEST_SUITE_BEGIN("sat");

TEST_CASE("trivial instances") {
  CdclSolver solver;
  solver.ensure_vars(1);
  solver.add_clause({1});
  REQUIRE(solver.solve() == SolveStatus::Sat);
  CHECK(solver.model()[1]);

  solver.add_clause({-1});
  CHECK(solver.solve() == SolveStatus::Unsat);
}

TEST_CASE("incremental clause addition tightens the instance") {
  CdclSolver solver;
  solver.ensure_vars(3);
  solver.add_clause({1, 2, 3});
  REQUIRE(solver.solve() == SolveStatus::Sat);
  // Forbid the returned model repeatedly; exactly 7 models exist.
  int models = 1;
  while (true) {
    std::vector<int> forbid;
    for (int v = 1; v <= 3; ++v) forbid.push_back(solver.model()[v] ? -v : v);
    solver.add_clause(forbid);
    if (solver.solve() == SolveStatus::Unsat) break;
    ++models;
    REQUIRE(models <= 7);
  }
  CHECK(models == 7);
}

TEST_CASE("pigeonhole instances are unsatisfiable") {
  for (int holes : {2, 3, 4}) {
    CdclSolver solver;
    for (const auto& clause : pigeonhole(holes)) solver.add_clause(clause);
    REQUIRE(solver.solve() == SolveStatus::Unsat);
  }
}

TEST_CASE("property: agreement with brute force on random 3-SAT") {
  std::mt19937 rng(20240707);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> nv(1, 10);
    int num_vars = nv(rng);
    std::uniform_int_distribution<int> nc(1, 40);
    int num_clauses = nc(rng);
    std::vector<std::vector<int>> clauses;
    std::uniform_int_distribution<int> var(1, num_vars);
    for (int c = 0; c < num_clauses; ++c) {
      std::vector<int> clause;
      for (int k = 0; k < 3; ++k) {
        int v = var(rng);
        clause.push_back(rng() % 2 ? v : -v);
      }
      clauses.push_back(clause);
    }

    CdclSolver solver;
    solver.ensure_vars(num_vars);
    for (const auto& clause : clauses) solver.add_clause(clause);
    bool expected = brute_force_sat(num_vars, clauses);
    SolveStatus got = solver.solve();
    REQUIRE((got == SolveStatus::Sat) == expected);
    if (got == SolveStatus::Sat) REQUIRE(model_satisfies(solver.model(), clauses));
  }
}

TEST_CASE("cnf instance guards its invariants") {
  CnfInstance cnf;
  cnf.num_vars = 2;
  CHECK_THROWS_AS(cnf.add({}), SolverError);
  CHECK_THROWS_AS(cnf.add({3}), SolverError);
  cnf.add({1, -2});
  CHECK(cnf.clauses.size() == 1);
}

TEST_CASE("dimacs output follows the standard header and terminators") {
  CnfInstance cnf;
  cnf.num_vars = 3;
  cnf.add({1, -2});
  cnf.add({2, 3});
  CHECK(to_dimacs(cnf) == "p cnf 3 2\n1 -2 0\n2 3 0\n");
}

TEST_CASE("solver output parsing") {
  ExternalOutcome sat = parse_solver_output("c comment\ns SATISFIABLE\nv 1 -2 0\n", 2);
  CHECK(sat.status == SolveStatus::Sat);
  CHECK(sat.model == std::vector<bool>{false, true, false});

  ExternalOutcome split = parse_solver_output("s SATISFIABLE\nv 1\nv -2 3\nv 0\n", 3);
  CHECK(split.model == std::vector<bool>{false, true, false, true});

  CHECK(parse_solver_output("s UNSATISFIABLE\n", 2).status == SolveStatus::Unsat);
  CHECK_THROWS_AS(parse_solver_output("c nothing\n", 2), SolverError);
}

TEST_CASE("external solver round-trips through a scripted process") {
  // A stand-in solver: reports UNSAT iff the instance contains the clause
  // "2 0", else a fixed model. Enough to exercise the protocol end to end.
  const char* path = "/tmp/fsmsynth_fake_solver.sh";
  {
    std::ofstream script(path);
    script << "#!/bin/sh\n"
              "if grep -q '^2 0$' \"$1\"; then\n"
              "  echo 's UNSATISFIABLE'\n"
              "else\n"
              "  echo 'c fake'\n"
              "  echo 's SATISFIABLE'\n"
              "  echo 'v 1 -2 0'\n"
              "fi\n";
  }
  REQUIRE(std::system((std::string("chmod +x ") + path).c_str()) == 0);

  ExternalSolver solver(path);
  solver.ensure_vars(2);
  solver.add_clause({1, -2});
  REQUIRE(solver.solve() == SolveStatus::Sat);
  CHECK(solver.model()[1]);
  CHECK_FALSE(solver.model()[2]);

  solver.add_clause({2});
  CHECK(solver.solve() == SolveStatus::Unsat);
  std::remove(path);
}

TEST_CASE("external solver failures surface as SolverError") {
  ExternalSolver garbage("/bin/echo nothing-useful");
  garbage.ensure_vars(1);
  garbage.add_clause({1});
  CHECK_THROWS_AS(garbage.solve(), SolverError);
}

TEST_CASE("solver config parsing and the environment override") {
  CHECK(SolverConfig::parse("internal").external_command.empty());
  CHECK(SolverConfig::parse("external:minisat -v").external_command == "minisat -v");
  CHECK_THROWS_AS(SolverConfig::parse("bogus"), SolverError);
  CHECK_THROWS_AS(SolverConfig::parse("external:"), SolverError);

  setenv("FSMSYNTH_SOLVER", "mysolver", 1);
  CHECK(SolverConfig::parse("external").external_command == "mysolver");
  CHECK(SolverConfig::parse("external:other").external_command == "mysolver");
  unsetenv("FSMSYNTH_SOLVER");
  CHECK_THROWS_AS(SolverConfig::parse("external"), SolverError);
}

TEST_SUITE_END();
