#include "planverify/feedback.h"

namespace planverify {

namespace {

bool retryable(ErrorKind kind)
{
  return kind == ErrorKind::SchemaError || kind == ErrorKind::TransportError
         || kind == ErrorKind::CyclicPlan
         || kind == ErrorKind::DanglingPredecessor
         || kind == ErrorKind::DuplicateTask;
}

}  // namespace

RepairOutcome repair_loop(const TaskPlan & plan,
                          std::span<const CheckedConstraint> constraints,
                          Planner & planner,
                          const RepairOptions & options,
                          const ResourceSet * resources)
{
  if (options.max_attempts < 1) {
    throw Error(ErrorKind::ConfigError, "max_attempts must be at least 1");
  }
  RepairOutcome out;
  auto verify = [&](const TaskPlan & p) {
    auto report = validate_safety(PlanAutomaton(p), constraints, options.verify);
    ++out.verifications;
    out.verification_time += report.wall_time;
    return report;
  };

  TaskPlan current = plan;
  VerificationReport report = verify(current);
  const ExecutionContext context = ExecutionContext::from(plan, resources);

  while (true) {
    if (report.verdict == Verdict::safe) {
      out.converged = true;
      out.stop_reason = "safe";
      break;
    }
    if (report.violations.empty()) {
      out.stop_reason = "verification inconclusive";
      break;
    }
    if (out.attempts >= options.max_attempts) {
      out.stop_reason = "attempt budget exhausted";
      break;
    }

    std::span<const Violation> shown(report.violations);
    if (!options.multi_violation_prompt) shown = shown.first(1);
    FeedbackPrompt prompt = build_feedback(current, shown, context);
    ++out.attempts;

    AttemptRecord record{current, report, prompt, std::nullopt, {}};
    try {
      TaskPlan revised =
          planner.repair(RepairRequest{current, shown, prompt, out.attempts});
      out.history.push_back(std::move(record));
      current = std::move(revised);
      report = verify(current);
    }
    catch (const Error & e) {
      record.planner_error_kind = e.kind();
      record.planner_error = "attempt " + std::to_string(out.attempts) + ": "
                             + to_string(e.kind()) + ": " + e.what();
      out.history.push_back(std::move(record));
      if (!retryable(e.kind())) {
        out.stop_reason = out.history.back().planner_error;
        break;
      }
    }
  }
  out.final_plan = std::move(current);
  out.final_report = std::move(report);
  return out;
}

}  // namespace planverify
