#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "planverify/constraints.h"
#include "planverify/plan.h"

namespace planverify {

enum class ViolationKind { step_violation, end_of_trace };

const char * to_string(ViolationKind kind);

struct Violation
{
  std::string constraint_id;
  std::string constraint_text;
  StructuredConstraint constraint;
  Formula formula;
  ViolationKind kind = ViolationKind::step_violation;
  // Path from the initial plan state; for step violations the last event
  // is the one that drives the safety state to false.
  std::vector<GroundEvent> witness_events;
  std::vector<Valuation> witness_valuations;
  PlanState violating_plan_state;
  // Safety state reached: `false` for step violations, the pending
  // obligation for end-of-trace violations.
  Formula safety_state;
  std::string message;

  std::vector<std::string> witness_labels() const;
};

enum class Verdict { safe, unsafe, inconclusive };

const char * to_string(Verdict verdict);

struct VerificationReport
{
  Verdict verdict = Verdict::safe;
  std::vector<Violation> violations;
  std::map<std::string, std::size_t> explored_states;
  // Constraints whose exploration hit the state budget.
  std::vector<std::string> inconclusive_constraints;
  std::vector<std::string> warnings;
  std::chrono::nanoseconds wall_time{0};

  bool safe() const { return verdict == Verdict::safe; }
  std::set<std::string> violated_ids() const;
  std::size_t total_explored() const;
};

struct VerifyOptions
{
  // Maximum product states explored per constraint.
  std::size_t state_budget = 5'000'000;
  // Keep searching after the first violation of a constraint.
  bool all_witnesses = false;
  std::size_t max_witnesses = 10;
  // Step precompiled DFAs instead of progressing formulas on the fly.
  bool explicit_automata = false;
  // Explore successors in reverse event order (used to check that the
  // verdict does not depend on exploration order).
  bool reverse_event_order = false;
  // Constraint checks run on up to this many threads.
  unsigned jobs = 1;
};

struct ConstraintCheck
{
  std::vector<Violation> violations;
  std::size_t explored = 0;
  bool budget_exceeded = false;
  std::vector<AtomicProposition> unmatched;
};

/// DFS over the product of the plan automaton and one safety monitor.
ConstraintCheck check_constraint(const PlanAutomaton & plan,
                                 const CheckedConstraint & constraint,
                                 const VerifyOptions & options = {});

/// Checks each constraint independently and merges the results in
/// constraint order. Exceeding the state budget never yields `safe`.
VerificationReport validate_safety(
    const PlanAutomaton & plan,
    std::span<const CheckedConstraint> constraints,
    const VerifyOptions & options = {});

/// Up to `max_witnesses` violations of one constraint, one per distinct
/// violating (plan state, event) transition.
std::vector<Violation> all_witnesses(const PlanAutomaton & plan,
                                     const CheckedConstraint & constraint,
                                     std::size_t max_witnesses = 10,
                                     VerifyOptions options = {});

/// Replays the witness with apply_event and formula progression and
/// confirms that it reaches the claimed violation.
bool replay_witness(const PlanAutomaton & plan, const Violation & violation);

/// Outcome of exhaustive trace enumeration.
struct OracleVerdict
{
  bool safe = true;
  // A full maximal trace on which the formula fails.
  std::vector<GroundEvent> witness;
};

/// Enumerates every resource-feasible maximal trace of `plan` and
/// evaluates the formulas with holds_on_trace(). Throws TooLargeForOracle
/// when the plan has more than `max_tasks` tasks.
std::vector<OracleVerdict> brute_force_check_all(
    const TaskPlan & plan,
    std::span<const Formula> formulas,
    std::size_t max_tasks = 8);

OracleVerdict brute_force_check(const TaskPlan & plan,
                                const Formula & formula,
                                std::size_t max_tasks = 8);

/// Every maximal event sequence of the plan, in enumeration order.
std::vector<std::vector<GroundEvent>> enumerate_maximal_traces(
    const TaskPlan & plan, std::size_t max_tasks = 8);

/// Valuation sequence observed along `events` (one letter per event).
std::vector<Valuation> trace_valuations(const TaskPlan & plan,
                                        std::span<const GroundEvent> events,
                                        const Alphabet & alphabet);

}  // namespace planverify
