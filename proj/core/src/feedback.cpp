#include "planverify/feedback.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "planverify/documents.h"

namespace planverify {

namespace {

std::string render_list(const std::vector<std::string> & items)
{
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out + "]";
}

std::vector<std::string> sorted(std::set<std::string> items)
{
  items.erase("");
  return {items.begin(), items.end()};
}

const char * kSystemInstructions =
    "You are a plan expert in pre-execution mode. Fix the unsafe plan before "
    "execution begins. The plan below was rejected by formal verification: "
    "it admits an execution that breaks the stated safety requirement. "
    "Revise only the precedence relations (predecessors) so that every "
    "possible execution satisfies the requirement. Keep every task, its "
    "function, part and assigned resource unchanged, keep the plan acyclic, "
    "and do not add or remove tasks.";

const char * kOutputSchema =
    "{tasks: [{id: TASK_ID, predecessors: [TASK_ID], change_reason: "
    "explanation of the repair}]}\n"
    "Reply with a single JSON object of this shape and nothing else. List "
    "every task of the plan exactly once; change_reason is required for "
    "every task (use \"unchanged\" when nothing changed).";

// Task id when the proposition names exactly one task, else its text.
std::string name_of(const TaskPlan & plan, const AtomicProposition & ap)
{
  auto matches = tasks_matching(plan, ap);
  if (matches.size() == 1) return plan.tasks()[matches[0]].id;
  return ap.to_string();
}

const char * verb_for(const AtomicProposition & ap)
{
  switch (ap.event().kind) {
    case EventKind::start: return "begins";
    case EventKind::done: return "finishes";
    case EventKind::executing: return "is executing";
    case EventKind::any: return "occurs";
  }
  return "occurs";
}

std::string requirement_sentence(const TaskPlan & plan, const Violation & v)
{
  if (!v.constraint_text.empty()) return v.constraint_text;
  const auto & c = v.constraint;
  switch (c.type) {
    case ConstraintType::ordering:
      return name_of(plan, *c.first) + " must occur before "
             + name_of(plan, *c.second) + ".";
    case ConstraintType::mutual_exclusion:
      return name_of(plan, *c.first) + " and " + name_of(plan, *c.second)
             + " must not occur simultaneously.";
    case ConstraintType::raw_ltlf: break;
  }
  return "The plan must satisfy " + v.formula.to_string() + ".";
}

std::string trace_narrative(const TaskPlan & plan, const Violation & v)
{
  const auto & c = v.constraint;
  const bool end = v.kind == ViolationKind::end_of_trace;
  if (c.type == ConstraintType::ordering && c.first && c.second) {
    std::string a = name_of(plan, *c.first);
    std::string b = name_of(plan, *c.second);
    if (end) {
      return "the plan completes without the required " + a
             + " ever occurring.";
    }
    return "the trace shows " + b + " " + verb_for(*c.second)
           + " before the required " + a + ".";
  }
  if (c.type == ConstraintType::mutual_exclusion && c.first && c.second) {
    std::string a = name_of(plan, *c.first);
    std::string b = name_of(plan, *c.second);
    bool level = c.first->event().kind == EventKind::executing
                 || c.second->event().kind == EventKind::executing;
    if (a == b) {
      return "the trace shows " + a + (level ? " executing." : " occurring.");
    }
    return "the trace shows " + a + " and " + b
           + (level ? " executing at the same time." : " occurring in the same step.");
  }
  if (end) {
    return "the plan completes with the obligation "
           + v.safety_state.to_string() + " still pending.";
  }
  return "the requirement becomes false at "
         + (v.witness_events.empty() ? std::string("the first step")
                                     : v.witness_events.back().label())
         + ".";
}

std::string render_plan(const TaskPlan & plan)
{
  std::string out;
  for (const auto & t : plan.tasks()) {
    out += task_to_json(t).dump() + "\n";
  }
  if (out.empty()) out = "(no tasks)\n";
  return out;
}

}  // namespace

ExecutionContext ExecutionContext::from(const TaskPlan & plan,
                                        const ResourceSet * resources)
{
  std::set<std::string> functions, agents, locations, parts;
  for (const auto & t : plan.tasks()) {
    functions.insert(t.function);
    agents.insert(t.resource);
    locations.insert(t.source_context);
    locations.insert(t.dest_context);
    parts.insert(t.part);
  }
  if (resources) {
    for (const auto & [id, r] : resources->resources) {
      agents.insert(id);
      functions.insert(r.capabilities.begin(), r.capabilities.end());
    }
  }
  return {sorted(functions), sorted(agents), sorted(locations), sorted(parts)};
}

std::string ExecutionContext::render() const
{
  return "functions = " + render_list(functions) + "; agents = "
         + render_list(agents) + "; locations = " + render_list(locations)
         + "; parts = " + render_list(parts);
}

std::string FeedbackPrompt::user_message() const
{
  std::ostringstream os;
  os << "## Unsafe plan\n" << unsafe_plan << "\n";
  os << "## Safety violation\n" << safety_violation << "\n\n";
  os << "## Violation trace\n" << violation_trace << "\n\n";
  os << "## Execution context\n" << execution_context.render() << "\n\n";
  os << "## Output schema\n" << output_schema << "\n";
  return os.str();
}

FeedbackPrompt build_feedback(const TaskPlan & plan,
                              const Violation & violation,
                              const ExecutionContext & context)
{
  return build_feedback(plan, std::span(&violation, 1), context);
}

FeedbackPrompt build_feedback(const TaskPlan & plan,
                              std::span<const Violation> violations,
                              const ExecutionContext & context)
{
  FeedbackPrompt p;
  p.system_instructions = kSystemInstructions;
  p.unsafe_plan = render_plan(plan);
  p.execution_context = context;
  p.output_schema = kOutputSchema;
  const bool numbered = violations.size() > 1;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto & v = violations[i];
    std::string prefix = numbered ? std::to_string(i + 1) + ". " : "";
    if (i) {
      p.safety_violation += "\n";
      p.violation_trace += "\n";
    }
    p.safety_violation += prefix + requirement_sentence(plan, v)
                          + "\nLTLf: " + v.formula.to_string();
    p.violation_trace += prefix + "witness_events = "
                         + render_list(v.witness_labels()) + "; "
                         + trace_narrative(plan, v);
  }
  return p;
}

std::vector<std::size_t> tasks_matching(const TaskPlan & plan,
                                        const AtomicProposition & ap)
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (fields_match(ap, plan.tasks()[i].event(TransitionKind::start))) {
      out.push_back(i);
    }
  }
  return out;
}

namespace {

std::size_t resolve_task(const TaskPlan & plan, const AtomicProposition & ap)
{
  auto found = tasks_matching(plan, ap);
  if (found.empty()) {
    throw Error(ErrorKind::UnresolvableProposition,
                "proposition " + ap.to_string() + " matches no task");
  }
  if (found.size() > 1) {
    throw Error(ErrorKind::Unrepairable,
                "proposition " + ap.to_string() + " matches "
                    + std::to_string(found.size())
                    + " tasks; refusing to pick one");
  }
  return found[0];
}

}  // namespace

TaskPlan deterministic_repair(const TaskPlan & plan, const Violation & violation)
{
  const auto & c = violation.constraint;
  if (c.type == ConstraintType::raw_ltlf || !c.first || !c.second) {
    throw Error(ErrorKind::Unrepairable,
                "constraint '" + c.id
                    + "' is not an ordering or mutual-exclusion constraint");
  }
  const std::size_t a = resolve_task(plan, *c.first);
  const std::size_t b = resolve_task(plan, *c.second);
  const auto & ta = plan.tasks()[a].id;
  const auto & tb = plan.tasks()[b].id;
  if (a == b) {
    throw Error(ErrorKind::Unrepairable,
                "constraint '" + c.id + "' relates task " + ta
                    + " to itself; no precedence edge can help");
  }

  if (c.type == ConstraintType::ordering) {
    if (plan.reaches(a, b)) return plan;
    try {
      return plan.with_edge(ta, tb);
    }
    catch (const CyclicPlanError & e) {
      throw Error(ErrorKind::Unrepairable,
                  "adding " + ta + " -> " + tb + " would close a cycle: "
                      + e.what());
    }
  }

  if (plan.reaches(a, b) || plan.reaches(b, a)) return plan;
  try {
    return plan.with_edge(ta, tb);
  }
  catch (const CyclicPlanError &) {
  }
  try {
    return plan.with_edge(tb, ta);
  }
  catch (const CyclicPlanError & e) {
    throw Error(ErrorKind::Unrepairable,
                "both orientations of " + ta + " / " + tb
                    + " close a cycle: " + e.what());
  }
}

TaskPlan DeterministicPlanner::repair(const RepairRequest & request)
{
  if (request.violations.empty()) return request.plan;
  TaskPlan plan = request.plan;
  // With multi-violation prompts, apply one edge per violation.
  for (const auto & v : request.violations) plan = deterministic_repair(plan, v);
  return plan;
}

}  // namespace planverify
