#include "planverify/verifier.h"

#include <algorithm>
#include <future>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "planverify/error.h"
#include "planverify/safety_automaton.h"
#include "planverify/valuation.h"

namespace planverify {

const char * to_string(ViolationKind kind)
{
  return kind == ViolationKind::step_violation ? "step_violation"
                                               : "end_of_trace";
}

const char * to_string(Verdict verdict)
{
  switch (verdict) {
    case Verdict::safe: return "safe";
    case Verdict::unsafe: return "unsafe";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<std::string> Violation::witness_labels() const
{
  std::vector<std::string> out;
  out.reserve(witness_events.size());
  for (const auto & e : witness_events) out.push_back(e.label());
  return out;
}

std::set<std::string> VerificationReport::violated_ids() const
{
  std::set<std::string> out;
  for (const auto & v : violations) out.insert(v.constraint_id);
  return out;
}

std::size_t VerificationReport::total_explored() const
{
  std::size_t total = 0;
  for (const auto & [id, n] : explored_states) total += n;
  return total;
}

namespace {

// Safety state tracker. Lazy mode interns progressed formulas and caches
// transitions per letter; explicit mode steps a compiled automaton.
class SafetyMonitor
{
 public:
  SafetyMonitor(const Formula & f, const Alphabet & alphabet, bool explicit_mode)
      : alphabet_(alphabet)
  {
    if (explicit_mode) {
      automaton_ = compile_safety_automaton(f, alphabet, "");
      initial_ = automaton_->initial;
      return;
    }
    dense_ = alphabet.size() <= 10;
    initial_ = intern(normalize(f));
  }

  StateId initial() const { return initial_; }

  StateId step(StateId q, Letter letter)
  {
    if (automaton_) return automaton_->next(q, letter);
    if (states_[q].is_false()) return q;
    if (dense_) {
      if (dense_rows_[q].empty()) {
        dense_rows_[q].assign(std::size_t{1} << alphabet_.size(), kUnset);
      }
      if (dense_rows_[q][letter] == kUnset) {
        // compute() may grow dense_rows_, so index again afterwards.
        StateId target = compute(q, letter);
        dense_rows_[q][letter] = target;
      }
      return dense_rows_[q][letter];
    }
    auto it = sparse_rows_[q].find(letter);
    if (it != sparse_rows_[q].end()) return it->second;
    StateId target = compute(q, letter);
    sparse_rows_[q].emplace(letter, target);
    return target;
  }

  bool violating(StateId q) const { return formula(q).is_false(); }
  bool accepts_at_end(StateId q)
  {
    if (automaton_) return automaton_->accepting_at_end[q];
    return empty_accepts(states_[q]);
  }
  const Formula & formula(StateId q) const
  {
    return automaton_ ? automaton_->state_formula[q] : states_[q];
  }

 private:
  static constexpr StateId kUnset = ~StateId{0};

  StateId intern(const Formula & g)
  {
    auto [it, inserted] =
        index_.emplace(g, static_cast<StateId>(states_.size()));
    if (inserted) {
      states_.push_back(g);
      dense_rows_.emplace_back();
      sparse_rows_.emplace_back();
    }
    return it->second;
  }

  StateId compute(StateId q, Letter letter)
  {
    Formula current = states_[q];
    Formula next = progress(current, [&](const AtomicProposition & ap) {
      auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), ap);
      return it != alphabet_.end() && *it == ap
             && (letter & (Letter{1} << (it - alphabet_.begin())));
    });
    return intern(next);
  }

  Alphabet alphabet_;
  std::optional<SafetyAutomaton> automaton_;
  StateId initial_ = 0;
  bool dense_ = true;
  std::vector<Formula> states_;
  std::unordered_map<Formula, StateId, FormulaHash> index_;
  std::vector<std::vector<StateId>> dense_rows_;
  std::vector<std::unordered_map<Letter, StateId>> sparse_rows_;
};

struct ProductKey
{
  PlanState plan;
  StateId safety;

  bool operator==(const ProductKey &) const = default;
};

struct ProductKeyHash
{
  std::size_t operator()(const ProductKey & k) const
  {
    return k.plan.hash() ^ (std::size_t{k.safety} * 0x9e3779b97f4a7c15ULL);
  }
};

struct TransitionKey
{
  PlanState plan;
  // task index, or ~0 for the end-of-trace check.
  std::uint32_t task;
  TransitionKind kind;

  bool operator==(const TransitionKey &) const = default;
};

struct TransitionKeyHash
{
  std::size_t operator()(const TransitionKey & k) const
  {
    return k.plan.hash() ^ (std::size_t{k.task} * 0x9e3779b97f4a7c15ULL)
           ^ static_cast<std::size_t>(k.kind);
  }
};

struct PathNode
{
  std::int64_t parent;
  EventRef via;
  Letter letter;
};

struct Frame
{
  PlanState plan;
  StateId safety;
  std::int64_t parent;
  EventRef via;
  Letter letter;
};

std::string describe(const CheckedConstraint & c,
                     ViolationKind kind,
                     const std::vector<GroundEvent> & events)
{
  std::string out = "constraint '" + c.constraint.id + "' ";
  if (kind == ViolationKind::end_of_trace) {
    return out + "is not satisfied when the plan completes";
  }
  return out + "is violated at " + events.back().label();
}

}  // namespace

ConstraintCheck check_constraint(const PlanAutomaton & plan,
                                 const CheckedConstraint & constraint,
                                 const VerifyOptions & options)
{
  const Alphabet alphabet = propositions(constraint.formula);
  LetterEvaluator letters(plan, alphabet);
  SafetyMonitor monitor(constraint.formula, alphabet, options.explicit_automata);

  ConstraintCheck result;
  result.unmatched = letters.unmatched();

  const std::size_t max_violations =
      options.all_witnesses ? std::max<std::size_t>(options.max_witnesses, 1) : 1;

  std::unordered_set<ProductKey, ProductKeyHash> visited;
  std::unordered_set<TransitionKey, TransitionKeyHash> reported;
  std::vector<PathNode> nodes;
  std::vector<Frame> stack;
  stack.push_back({plan.initial(), monitor.initial(), -1, {}, 0});

  auto witness = [&](std::int64_t node,
                     std::optional<std::pair<EventRef, Letter>> last) {
    std::vector<std::pair<EventRef, Letter>> path;
    if (last) path.push_back(*last);
    for (auto i = node; i >= 0 && nodes[i].parent >= 0; i = nodes[i].parent) {
      path.emplace_back(nodes[i].via, nodes[i].letter);
    }
    std::reverse(path.begin(), path.end());
    Violation v;
    v.constraint_id = constraint.constraint.id;
    v.constraint_text = constraint.constraint.source_text;
    v.constraint = constraint.constraint;
    v.formula = constraint.formula;
    for (const auto & [e, l] : path) {
      v.witness_events.push_back(plan.ground(e));
      v.witness_valuations.push_back(letter_to_valuation(l, alphabet));
    }
    return v;
  };

  std::vector<EventRef> events;
  std::vector<Frame> successors;
  while (!stack.empty() && result.violations.size() < max_violations) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    if (!visited.insert({frame.plan, frame.safety}).second) continue;
    if (++result.explored > options.state_budget) {
      --result.explored;
      result.budget_exceeded = true;
      break;
    }
    const auto node = static_cast<std::int64_t>(nodes.size());
    nodes.push_back({frame.parent, frame.via, frame.letter});

    if (plan.is_marked(frame.plan) && !monitor.accepts_at_end(frame.safety)) {
      TransitionKey key{frame.plan, ~std::uint32_t{0}, TransitionKind::done};
      if (reported.insert(key).second) {
        Violation v = witness(node, std::nullopt);
        v.kind = ViolationKind::end_of_trace;
        v.violating_plan_state = frame.plan;
        v.safety_state = monitor.formula(frame.safety);
        v.message = describe(constraint, v.kind, v.witness_events);
        result.violations.push_back(std::move(v));
        if (result.violations.size() >= max_violations) break;
      }
    }

    plan.enabled(frame.plan, events);
    if (options.reverse_event_order) std::reverse(events.begin(), events.end());
    successors.clear();
    for (auto e : events) {
      PlanState next = plan.apply(frame.plan, e);
      Letter letter = letters.after(next, e);
      StateId q = monitor.step(frame.safety, letter);
      if (monitor.violating(q)) {
        TransitionKey key{frame.plan, e.task, e.kind};
        if (reported.insert(key).second) {
          Violation v = witness(node, std::make_pair(e, letter));
          v.kind = ViolationKind::step_violation;
          v.violating_plan_state = std::move(next);
          v.safety_state = monitor.formula(q);
          v.message = describe(constraint, v.kind, v.witness_events);
          result.violations.push_back(std::move(v));
          if (result.violations.size() >= max_violations) break;
        }
        continue;
      }
      successors.push_back({std::move(next), q, node, e, letter});
    }
    // LIFO: push in reverse so the first enabled event is explored first.
    for (auto it = successors.rbegin(); it != successors.rend(); ++it) {
      stack.push_back(std::move(*it));
    }
  }
  return result;
}

VerificationReport validate_safety(
    const PlanAutomaton & plan,
    std::span<const CheckedConstraint> constraints,
    const VerifyOptions & options)
{
  auto started = std::chrono::steady_clock::now();
  std::vector<ConstraintCheck> checks(constraints.size());
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1 || constraints.size() < 2) {
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      checks[i] = check_constraint(plan, constraints[i], options);
    }
  } else {
    for (std::size_t begin = 0; begin < constraints.size(); begin += jobs) {
      std::vector<std::future<ConstraintCheck>> batch;
      const std::size_t end = std::min(constraints.size(), begin + jobs);
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, [&, i] {
          return check_constraint(plan, constraints[i], options);
        }));
      }
      for (std::size_t i = begin; i < end; ++i) {
        checks[i] = batch[i - begin].get();
      }
    }
  }

  VerificationReport report;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto & id = constraints[i].constraint.id;
    auto & check = checks[i];
    report.explored_states[id] = check.explored;
    for (const auto & ap : check.unmatched) {
      report.warnings.push_back("constraint '" + id + "': proposition "
                                + ap.to_string()
                                + " matches no task of the plan");
    }
    if (check.budget_exceeded && check.violations.empty()) {
      report.inconclusive_constraints.push_back(id);
    }
    for (auto & v : check.violations) report.violations.push_back(std::move(v));
  }
  if (!report.violations.empty()) {
    report.verdict = Verdict::unsafe;
  } else if (!report.inconclusive_constraints.empty()) {
    report.verdict = Verdict::inconclusive;
  } else {
    report.verdict = Verdict::safe;
  }
  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - started);
  return report;
}

std::vector<Violation> all_witnesses(const PlanAutomaton & plan,
                                     const CheckedConstraint & constraint,
                                     std::size_t max_witnesses,
                                     VerifyOptions options)
{
  options.all_witnesses = true;
  options.max_witnesses = max_witnesses;
  auto check = check_constraint(plan, constraint, options);
  if (check.budget_exceeded && check.violations.empty()) {
    throw Error(ErrorKind::StateBudgetExceeded,
                "state budget exceeded while checking '"
                    + constraint.constraint.id + "'");
  }
  return std::move(check.violations);
}

bool replay_witness(const PlanAutomaton & plan, const Violation & violation)
{
  const Alphabet alphabet = propositions(violation.formula);
  PlanState state = plan.initial();
  Formula safety = normalize(violation.formula);
  try {
    for (const auto & e : violation.witness_events) {
      if (safety.is_false()) return false;  // violated before the end
      state = apply_event(state, e, plan.plan());
      safety = progress(safety, valuation(plan, state, e, alphabet));
    }
  }
  catch (const Error &) {
    return false;
  }
  if (!(state == violation.violating_plan_state)) return false;
  if (violation.kind == ViolationKind::step_violation) {
    return safety.is_false();
  }
  return plan.is_marked(state) && !safety.is_false() && !empty_accepts(safety);
}

}  // namespace planverify
