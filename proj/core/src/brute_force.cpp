#include <algorithm>
#include <functional>
#include <map>

#include "planverify/error.h"
#include "planverify/verifier.h"

namespace planverify {

namespace {

// Walks every maximal interleaving of the plan. Kept separate from
// PlanAutomaton: readiness and resource occupancy are tracked here from
// the task records directly.
class TraceWalker
{
 public:
  using Visit = std::function<bool(const std::vector<GroundEvent> &)>;

  TraceWalker(const TaskPlan & plan, std::size_t max_tasks) : plan_(plan)
  {
    if (plan.size() > max_tasks) {
      throw Error(ErrorKind::TooLargeForOracle,
                  "plan has " + std::to_string(plan.size())
                      + " tasks; the trace oracle is limited to "
                      + std::to_string(max_tasks));
    }
    const auto & tasks = plan.tasks();
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < tasks.size(); ++i) position[tasks[i].id] = i;
    preds_.resize(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      for (const auto & p : tasks[i].predecessors) {
        preds_[i].push_back(position.at(p));
      }
    }
    started_.assign(tasks.size(), false);
    finished_.assign(tasks.size(), false);
  }

  // Calls `visit` with each maximal trace; stops early when it returns
  // false.
  void run(const Visit & visit)
  {
    stopped_ = false;
    trace_.clear();
    walk(visit);
  }

 private:
  bool ready(std::size_t i) const
  {
    if (started_[i]) return false;
    for (auto p : preds_[i]) {
      if (!finished_[p]) return false;
    }
    const auto & resource = plan_.tasks()[i].resource;
    auto it = occupied_.find(resource);
    return it == occupied_.end() || it->second == 0;
  }

  void walk(const Visit & visit)
  {
    const auto & tasks = plan_.tasks();
    bool any = false;
    for (std::size_t i = 0; i < tasks.size() && !stopped_; ++i) {
      if (!ready(i)) continue;
      any = true;
      started_[i] = true;
      ++occupied_[tasks[i].resource];
      trace_.push_back(tasks[i].event(TransitionKind::start));
      walk(visit);
      trace_.pop_back();
      --occupied_[tasks[i].resource];
      started_[i] = false;
    }
    for (std::size_t i = 0; i < tasks.size() && !stopped_; ++i) {
      if (!started_[i] || finished_[i]) continue;
      any = true;
      finished_[i] = true;
      --occupied_[tasks[i].resource];
      trace_.push_back(tasks[i].event(TransitionKind::done));
      walk(visit);
      trace_.pop_back();
      ++occupied_[tasks[i].resource];
      finished_[i] = false;
    }
    if (!any && !stopped_) {
      if (!visit(trace_)) stopped_ = true;
    }
  }

  const TaskPlan & plan_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<bool> started_;
  std::vector<bool> finished_;
  std::map<std::string, int> occupied_;
  std::vector<GroundEvent> trace_;
  bool stopped_ = false;
};

}  // namespace

std::vector<Valuation> trace_valuations(const TaskPlan & plan,
                                        std::span<const GroundEvent> events,
                                        const Alphabet & alphabet)
{
  std::vector<Valuation> out;
  out.reserve(events.size());
  std::vector<const Task *> running;
  for (const auto & e : events) {
    const Task & task = plan.task(e.task_id);
    if (e.kind == TransitionKind::start) {
      running.push_back(&task);
    } else {
      running.erase(std::remove(running.begin(), running.end(), &task),
                    running.end());
    }
    Valuation v;
    for (const auto & ap : alphabet) {
      if (ap.event().kind == EventKind::executing) {
        for (const Task * t : running) {
          if (fields_match(ap, t->event(TransitionKind::start))) {
            v.true_aps.insert(ap);
            break;
          }
        }
      } else if (matches(ap, e)) {
        v.true_aps.insert(ap);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<OracleVerdict> brute_force_check_all(
    const TaskPlan & plan,
    std::span<const Formula> formulas,
    std::size_t max_tasks)
{
  std::vector<OracleVerdict> verdicts(formulas.size());
  std::vector<Alphabet> alphabets;
  std::vector<AtomicProposition> all;
  for (const auto & f : formulas) {
    alphabets.push_back(propositions(f));
    all.insert(all.end(), alphabets.back().begin(), alphabets.back().end());
  }
  const Alphabet alphabet = make_alphabet(std::move(all));
  std::size_t remaining = formulas.size();
  if (remaining == 0) return verdicts;

  TraceWalker walker(plan, max_tasks);
  walker.run([&](const std::vector<GroundEvent> & trace) {
    auto valuations = trace_valuations(plan, trace, alphabet);
    for (std::size_t k = 0; k < formulas.size(); ++k) {
      if (!verdicts[k].safe) continue;
      if (!holds_on_trace(formulas[k], valuations)) {
        verdicts[k].safe = false;
        verdicts[k].witness = trace;
        --remaining;
      }
    }
    return remaining > 0;
  });
  return verdicts;
}

OracleVerdict brute_force_check(const TaskPlan & plan,
                                const Formula & formula,
                                std::size_t max_tasks)
{
  return brute_force_check_all(plan, std::span(&formula, 1), max_tasks)[0];
}

std::vector<std::vector<GroundEvent>> enumerate_maximal_traces(
    const TaskPlan & plan, std::size_t max_tasks)
{
  std::vector<std::vector<GroundEvent>> out;
  TraceWalker walker(plan, max_tasks);
  walker.run([&](const std::vector<GroundEvent> & trace) {
    out.push_back(trace);
    return true;
  });
  return out;
}

}  // namespace planverify
