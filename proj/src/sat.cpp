#include "fsmsynth/sat.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fsmsynth {

void CnfInstance::add(std::vector<int> clause) {
  if (clause.empty()) throw SolverError("empty clause");
  for (int lit : clause) {
    int v = std::abs(lit);
    if (v == 0 || v > num_vars) throw SolverError("literal out of range: " + std::to_string(lit));
  }
  clauses.push_back(std::move(clause));
}

// --- CDCL -------------------------------------------------------------------

void CdclSolver::ensure_vars(int num_vars) {
  while (num_vars_ < num_vars) {
    ++num_vars_;
    assign_.push_back(-1);
    phase_.push_back(0);
    reason_.push_back(-1);
    level_.push_back(0);
    activity_.push_back(0.0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
  }
}

int CdclSolver::value(int lit) const {
  signed char a = assign_[var_of(lit)];
  if (a < 0) return -1;
  return negated(lit) ? 1 - a : a;
}

bool CdclSolver::enqueue(int lit, int reason) {
  int v = value(lit);
  if (v == 0) return false;
  if (v == 1) return true;
  assign_[var_of(lit)] = negated(lit) ? 0 : 1;
  reason_[var_of(lit)] = reason;
  level_[var_of(lit)] = decision_level();
  trail_.push_back(lit);
  return true;
}

void CdclSolver::attach(int ci) {
  const auto& c = clauses_[ci];
  watches_[negate(c[0])].push_back(ci);
  watches_[negate(c[1])].push_back(ci);
}

void CdclSolver::add_clause(const std::vector<int>& ext_lits) {
  backtrack(0);
  if (!ok_) return;

  int max_var = 0;
  for (int l : ext_lits) max_var = std::max(max_var, std::abs(l));
  ensure_vars(max_var);

  std::vector<int> lits;
  lits.reserve(ext_lits.size());
  for (int l : ext_lits) {
    if (l == 0) throw SolverError("literal 0 in clause");
    lits.push_back(internal(l));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 0; i + 1 < lits.size(); ++i)
    if (lits[i + 1] == negate(lits[i])) return;  // tautology

  std::vector<int> kept;
  for (int l : lits) {
    int v = value(l);
    if (v == 1) return;  // satisfied at level 0
    if (v == -1) kept.push_back(l);
  }
  if (kept.empty()) {
    ok_ = false;
    return;
  }
  if (kept.size() == 1) {
    if (!enqueue(kept[0], -1)) ok_ = false;
    else if (propagate() != -1) ok_ = false;
    return;
  }
  clauses_.push_back(std::move(kept));
  attach(static_cast<int>(clauses_.size()) - 1);
}

int CdclSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int lit = trail_[qhead_++];  // lit became true; scan clauses watching !lit
    std::vector<int>& ws = watches_[lit];
    std::size_t keep = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      int ci = ws[i];
      std::vector<int>& c = clauses_[ci];
      // Normalize: the falsified literal goes to slot 1.
      int falsified = negate(lit);
      if (c[0] == falsified) std::swap(c[0], c[1]);
      if (value(c[0]) == 1) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[negate(c[1])].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // Unit or conflicting.
      ws[keep++] = ci;
      if (!enqueue(c[0], ci)) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
        ws.resize(keep);
        qhead_ = trail_.size();
        return ci;
      }
    }
    ws.resize(keep);
  }
  return -1;
}

void CdclSolver::bump(int var) {
  activity_[var] += var_inc_;
  if (activity_[var] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
}

// First-UIP learning. Relies on the invariant that a reason clause keeps its
// propagated literal in slot 0, which propagate() preserves: a true literal
// is never the falsified watch, so the normalizing swap cannot displace it.
void CdclSolver::analyze(int confl, std::vector<int>& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int counter = 0;
  int p = -1;
  std::size_t index = trail_.size();

  do {
    const std::vector<int>& c = clauses_[confl];
    for (std::size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
      int q = c[k];
      int v = var_of(q);
      if (!seen_[v] && level_[v] > 0) {
        seen_[v] = 1;
        bump(v);
        if (level_[v] == decision_level()) ++counter;
        else learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[index - 1])]) --index;
    --index;
    p = trail_[index];
    seen_[var_of(p)] = 0;
    confl = reason_[var_of(p)];
    --counter;
  } while (counter > 0);
  learnt[0] = negate(p);

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[var_of(learnt[1])];
  }
  for (std::size_t i = 1; i < learnt.size(); ++i) seen_[var_of(learnt[i])] = 0;
}

void CdclSolver::backtrack(int target) {
  if (decision_level() <= target) return;
  std::size_t bound = trail_lim_[target];
  for (std::size_t i = trail_.size(); i-- > bound;) {
    int v = var_of(trail_[i]);
    phase_[v] = assign_[v];
    assign_[v] = -1;
    reason_[v] = -1;
  }
  trail_.resize(bound);
  trail_lim_.resize(target);
  qhead_ = trail_.size();
}

int CdclSolver::pick_branch_var() const {
  int best = -1;
  double best_act = -1.0;
  for (int v = 0; v < num_vars_; ++v)
    if (assign_[v] < 0 && activity_[v] > best_act) {
      best = v;
      best_act = activity_[v];
    }
  return best;
}

namespace {

// Luby restart sequence (1, 1, 2, 1, 1, 2, 4, ...).
long luby(long x) {
  long size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) / 2;
    --seq;
    x = x % size;
  }
  return 1L << seq;
}

}  // namespace

SolveStatus CdclSolver::solve() {
  if (!ok_) return SolveStatus::Unsat;
  backtrack(0);
  if (propagate() != -1) {
    ok_ = false;
    return SolveStatus::Unsat;
  }

  long restart_count = 0;
  long conflicts_until_restart = 64 * luby(restart_count);
  long conflicts_this_restart = 0;
  std::vector<int> learnt;

  while (true) {
    int confl = propagate();
    if (confl != -1) {
      ++conflicts_;
      ++conflicts_this_restart;
      if (decision_level() == 0) {
        ok_ = false;
        return SolveStatus::Unsat;
      }
      int bt_level = 0;
      analyze(confl, learnt, bt_level);
      backtrack(bt_level);
      if (learnt.size() == 1) {
        if (!enqueue(learnt[0], -1)) {
          ok_ = false;
          return SolveStatus::Unsat;
        }
      } else {
        clauses_.push_back(learnt);
        attach(static_cast<int>(clauses_.size()) - 1);
        enqueue(learnt[0], static_cast<int>(clauses_.size()) - 1);
      }
      var_inc_ /= 0.95;
    } else {
      if (conflicts_this_restart >= conflicts_until_restart) {
        conflicts_this_restart = 0;
        conflicts_until_restart = 64 * luby(++restart_count);
        backtrack(0);
        continue;
      }
      int v = pick_branch_var();
      if (v == -1) {
        model_.assign(num_vars_ + 1, false);
        for (int var = 0; var < num_vars_; ++var) model_[var + 1] = assign_[var] == 1;
        return SolveStatus::Sat;
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(2 * v + (phase_[v] ? 0 : 1), -1);
    }
  }
}

// --- DIMACS and the external solver ------------------------------------------

std::string to_dimacs(int num_vars, const std::vector<std::vector<int>>& clauses) {
  std::ostringstream out;
  out << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
  for (const auto& c : clauses) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string to_dimacs(const CnfInstance& cnf) { return to_dimacs(cnf.num_vars, cnf.clauses); }

ExternalOutcome parse_solver_output(std::string_view output, int num_vars) {
  ExternalOutcome out{SolveStatus::Unsat, {}};
  bool saw_status = false;
  bool sat = false;
  std::vector<int> values;

  std::istringstream stream{std::string(output)};
  std::string line;
  while (std::getline(stream, line)) {
    if (line.rfind("s ", 0) == 0) {
      std::string status = line.substr(2);
      while (!status.empty() && (status.back() == '\r' || status.back() == ' '))
        status.pop_back();
      if (status == "SATISFIABLE") {
        sat = true;
        saw_status = true;
      } else if (status == "UNSATISFIABLE") {
        sat = false;
        saw_status = true;
      }
    } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
      std::istringstream vs(line.substr(1));
      int lit;
      while (vs >> lit) values.push_back(lit);
    }
  }
  if (!saw_status) throw SolverError("solver output lacks an s-line");
  if (!sat) return out;

  out.status = SolveStatus::Sat;
  out.model.assign(num_vars + 1, false);
  for (int lit : values) {
    if (lit == 0) continue;
    int v = std::abs(lit);
    if (v <= num_vars) out.model[v] = lit > 0;
  }
  return out;
}

void ExternalSolver::ensure_vars(int num_vars) {
  cnf_.num_vars = std::max(cnf_.num_vars, num_vars);
}

void ExternalSolver::add_clause(const std::vector<int>& lits) {
  int max_var = 0;
  for (int l : lits) max_var = std::max(max_var, std::abs(l));
  ensure_vars(max_var);
  cnf_.clauses.push_back(lits);
}

SolveStatus ExternalSolver::solve() {
  char path[] = "/tmp/fsmsynth-XXXXXX";
  int fd = mkstemp(path);
  if (fd < 0) throw SolverError("cannot create temporary DIMACS file");
  {
    std::string dimacs = to_dimacs(cnf_);
    std::ofstream file(path);
    file << dimacs;
  }
  close(fd);

  std::string command = command_ + " " + path + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    std::remove(path);
    throw SolverError("cannot run external solver: " + command_);
  }
  std::string output;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
  pclose(pipe);
  std::remove(path);

  ExternalOutcome outcome = parse_solver_output(output, cnf_.num_vars);
  model_ = std::move(outcome.model);
  return outcome.status;
}

SolverConfig SolverConfig::parse(std::string_view selector) {
  SolverConfig cfg;
  const char* env = std::getenv("FSMSYNTH_SOLVER");
  if (selector == "internal" || selector.empty()) {
    return cfg;
  }
  if (selector == "external") {
    if (!env || !*env)
      throw SolverError("--solver external requires FSMSYNTH_SOLVER to name a command");
    cfg.external_command = env;
    return cfg;
  }
  if (selector.rfind("external:", 0) == 0) {
    cfg.external_command = (env && *env) ? env : std::string(selector.substr(9));
    if (cfg.external_command.empty())
      throw SolverError("empty external solver command");
    return cfg;
  }
  throw SolverError("unknown solver selector '" + std::string(selector) +
                    "' (expected internal or external:<command>)");
}

std::unique_ptr<SatSolver> make_solver(const SolverConfig& config) {
  if (config.external_command.empty()) return std::make_unique<CdclSolver>();
  return std::make_unique<ExternalSolver>(config.external_command);
}

}  // namespace fsmsynth
