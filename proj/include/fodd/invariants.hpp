#pragma once

#include <string>
#include <vector>

#include "fodd/oracle.hpp"
#include "fodd/solver.hpp"

namespace fodd {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Largest strict gap y^k(s) - Q^{pi^{k-1}}_{y^{k-1}}(s) over the
/// regress-policy steps of a trace.
struct StrictWitness {
  bool found = false;
  int universe = 0;
  int generation = 0;
  int state = 0;
  Rational value;     // y^k(s)
  Rational backup;    // fixed-policy backup
};

/// Ground-level view of a solver trace: value table and selected actions
/// for every y^k.
struct GroundTrace {
  std::vector<std::vector<Rational>> values;
  std::vector<std::vector<int>> actions;
};

GroundTrace ground_trace(const Manager& mgr, const SolveTrace& trace, const GroundMdp& m);

CheckResult check_greedy_backup(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m);
CheckResult check_bellman(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m);
CheckResult check_fixed_policy_upper(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m,
                               StrictWitness* witness = nullptr);
CheckResult check_own_policy_backup(const SolveTrace& trace, const GroundTrace& g, const GroundMdp& m);
CheckResult check_rollout_bound(const GroundTrace& g, const GroundMdp& m);
CheckResult check_below_optimal(const GroundTrace& g, const OracleSolution& optimal);
CheckResult check_monotone(const GroundTrace& g);
CheckResult check_dominates_vi(const Manager& mgr, const SolveTrace& rmpi_trace, const SolveTrace& vi_trace,
                         const GroundMdp& m);
CheckResult check_convergence(const Manager& mgr, const SolveResult& result, const OracleSolution& optimal,
                           const GroundMdp& m, const Rational& epsilon);
CheckResult check_reduction(Manager& mgr, const SolveTrace& trace, const GroundMdp& m);
CheckResult check_norm_bound(Manager& mgr, const SolveTrace& trace, const GroundTrace& g);
/// Symbolic Q with bound action parameters against the ground backup, for
/// V = R and V = `v`; plus agreement of the two regression routes.
CheckResult check_regression(Manager& mgr, const DomainSpec& spec, NodeRef v, const GroundMdp& m);

struct SuiteConfig {
  int universe = 1;
  MpiSchedule schedule;
  double oracle_tol = 1e-9;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  StrictWitness witness;  // at the largest universe
  bool passed() const;
};

/// Solves with RMPI and VI once, then checks every invariant on universes
/// 1..config.universe.
SuiteReport run_invariant_suite(Manager& mgr, const DomainSpec& spec, const SuiteConfig& config);

}  // namespace fodd
