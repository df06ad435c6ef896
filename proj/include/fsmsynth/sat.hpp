#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsmsynth {

/// Clause database in DIMACS conventions: variables are 1..num_vars,
/// literals signed ints, clauses nonempty.
struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  int new_var() { return ++num_vars; }
  void add(std::vector<int> clause);
};

enum class SolveStatus { Sat, Unsat };

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incremental SAT interface: clauses may be added between solve() calls
/// without re-encoding.
class SatSolver {
 public:
  virtual ~SatSolver() = default;

  virtual void ensure_vars(int num_vars) = 0;
  virtual void add_clause(const std::vector<int>& lits) = 0;
  virtual SolveStatus solve() = 0;

  /// Assignment after a Sat result, indexed by variable (entry 0 unused).
  virtual const std::vector<bool>& model() const = 0;

  void add_instance(const CnfInstance& cnf) {
    ensure_vars(cnf.num_vars);
    for (const auto& c : cnf.clauses) add_clause(c);
  }
};

/// In-process CDCL solver: two-watched-literal propagation, first-UIP
/// learning, activity-driven branching with phase saving, Luby restarts.
/// Fully deterministic.
class CdclSolver final : public SatSolver {
 public:
  void ensure_vars(int num_vars) override;
  void add_clause(const std::vector<int>& lits) override;
  SolveStatus solve() override;
  const std::vector<bool>& model() const override { return model_; }

  long conflicts() const { return conflicts_; }

 private:
  // Internal literal encoding: 2 * var_index + (1 if negated), 0-based vars.
  static int var_of(int lit) { return lit >> 1; }
  static bool negated(int lit) { return lit & 1; }
  static int negate(int lit) { return lit ^ 1; }
  static int internal(int ext) { return ext > 0 ? 2 * (ext - 1) : 2 * (-ext - 1) + 1; }

  int value(int lit) const;  // -1 unassigned, 0 false, 1 true
  bool enqueue(int lit, int reason);
  int propagate();  // conflicting clause index, or -1
  void analyze(int confl, std::vector<int>& learnt, int& backtrack_level);
  void backtrack(int level);
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  int pick_branch_var() const;
  void bump(int var);
  void attach(int clause_index);

  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<signed char> assign_;
  std::vector<char> phase_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::vector<int> reason_;
  std::vector<int> level_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  double var_inc_ = 1.0;
  std::size_t qhead_ = 0;
  int num_vars_ = 0;
  long conflicts_ = 0;
  bool ok_ = true;
  std::vector<bool> model_;
};

/// Adapter that shells out to a DIMACS solver process for each solve()
/// call; the clause database is kept so additions remain incremental from
/// the caller's point of view.
class ExternalSolver final : public SatSolver {
 public:
  explicit ExternalSolver(std::string command) : command_(std::move(command)) {}

  void ensure_vars(int num_vars) override;
  void add_clause(const std::vector<int>& lits) override;
  SolveStatus solve() override;
  const std::vector<bool>& model() const override { return model_; }

 private:
  std::string command_;
  CnfInstance cnf_;
  std::vector<bool> model_;
};

struct SolverConfig {
  std::string external_command;  // empty selects the in-process solver

  /// Accepts "internal", "external:<command>", or "external" (command taken
  /// from the FSMSYNTH_SOLVER environment variable). The environment
  /// variable also overrides an explicit external command when set.
  static SolverConfig parse(std::string_view selector);
};

std::unique_ptr<SatSolver> make_solver(const SolverConfig& config);

std::string to_dimacs(int num_vars, const std::vector<std::vector<int>>& clauses);
std::string to_dimacs(const CnfInstance& cnf);

struct ExternalOutcome {
  SolveStatus status;
  std::vector<bool> model;
};

/// Parses solver stdout: an `s SATISFIABLE`/`s UNSATISFIABLE` status line
/// and, for satisfiable results, `v` value lines.
ExternalOutcome parse_solver_output(std::string_view output, int num_vars);

}  // namespace fsmsynth
