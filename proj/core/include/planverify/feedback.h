#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "planverify/constraints.h"
#include "planverify/error.h"
#include "planverify/plan.h"
#include "planverify/verifier.h"

namespace planverify {

struct ExecutionContext
{
  std::vector<std::string> functions;
  std::vector<std::string> agents;
  std::vector<std::string> locations;
  std::vector<std::string> parts;

  /// Collects names from the plan and, when given, the resource set.
  static ExecutionContext from(const TaskPlan & plan,
                               const ResourceSet * resources = nullptr);

  std::string render() const;
};

/// The six-section repair prompt handed to a planner.
struct FeedbackPrompt
{
  std::string system_instructions;
  std::string unsafe_plan;
  std::string safety_violation;
  std::string violation_trace;
  ExecutionContext execution_context;
  std::string output_schema;

  /// Everything except the system instructions, as labeled blocks.
  std::string user_message() const;
};

FeedbackPrompt build_feedback(const TaskPlan & plan,
                              const Violation & violation,
                              const ExecutionContext & context);

/// One prompt covering several violations (sections are numbered).
FeedbackPrompt build_feedback(const TaskPlan & plan,
                              std::span<const Violation> violations,
                              const ExecutionContext & context);

/// Tasks whose events match `ap` on every field except the event kind.
std::vector<std::size_t> tasks_matching(const TaskPlan & plan,
                                        const AtomicProposition & ap);

/// Adds one precedence edge that rules the violation out.
///
/// ordering(a, b): edge task(a) -> task(b). mutual_exclusion(c, d): edge
/// task(c) -> task(d), or the reverse if that closes a cycle. The plan is
/// returned unchanged when the edge is already implied. Throws
/// Unrepairable or UnresolvableProposition.
TaskPlan deterministic_repair(const TaskPlan & plan, const Violation & violation);

struct RepairRequest
{
  const TaskPlan & plan;
  std::span<const Violation> violations;
  const FeedbackPrompt & prompt;
  int attempt;
};

class Planner
{
 public:
  virtual ~Planner() = default;

  virtual std::string name() const = 0;
  /// Returns a revised plan over the same task set. Errors of kind
  /// SchemaError or TransportError are retried by repair_loop; any other
  /// error ends the loop.
  virtual TaskPlan repair(const RepairRequest & request) = 0;
};

class DeterministicPlanner final : public Planner
{
 public:
  std::string name() const override { return "deterministic"; }
  TaskPlan repair(const RepairRequest & request) override;
};

struct RepairOptions
{
  int max_attempts = 5;
  VerifyOptions verify;
  // Put every violation of the report into the prompt instead of the first.
  bool multi_violation_prompt = false;
};

struct AttemptRecord
{
  TaskPlan plan;
  VerificationReport report;
  FeedbackPrompt prompt;
  std::optional<ErrorKind> planner_error_kind;
  std::string planner_error;
};

struct RepairOutcome
{
  TaskPlan final_plan;
  VerificationReport final_report;
  // Planner calls made.
  int attempts = 0;
  int verifications = 0;
  std::vector<AttemptRecord> history;
  bool converged = false;
  std::string stop_reason;
  std::chrono::nanoseconds verification_time{0};
};

/// verify -> feedback -> planner -> verify, at most `max_attempts`
/// planner calls. Throws ConfigError when max_attempts < 1.
RepairOutcome repair_loop(const TaskPlan & plan,
                          std::span<const CheckedConstraint> constraints,
                          Planner & planner,
                          const RepairOptions & options = {},
                          const ResourceSet * resources = nullptr);

}  // namespace planverify
