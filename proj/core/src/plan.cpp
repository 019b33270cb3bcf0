#include "planverify/plan.h"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "planverify/error.h"

namespace planverify {

const std::string & Task::context() const
{
  return dest_context.empty() ? source_context : dest_context;
}

GroundEvent Task::event(TransitionKind kind) const
{
  return GroundEvent{id, kind, function, process, part, resource, context()};
}

namespace {

// Returns one cycle (first id repeated at the end) or an empty vector.
std::vector<std::string> find_cycle(
    const std::vector<Task> & tasks,
    const std::vector<std::vector<std::uint32_t>> & preds)
{
  enum Color : std::uint8_t { white, grey, black };
  std::vector<Color> color(tasks.size(), white);
  std::vector<std::uint32_t> stack;

  std::vector<std::string> cycle;
  // Iterative DFS along predecessor edges.
  for (std::uint32_t root = 0; root < tasks.size() && cycle.empty(); ++root) {
    if (color[root] != white) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> frames{{root, 0}};
    color[root] = grey;
    stack.assign(1, root);
    while (!frames.empty() && cycle.empty()) {
      auto & [node, next] = frames.back();
      if (next < preds[node].size()) {
        std::uint32_t p = preds[node][next++];
        if (color[p] == grey) {
          auto it = std::find(stack.begin(), stack.end(), p);
          // stack holds successors-first; reverse into precedence order.
          std::vector<std::uint32_t> path(it, stack.end());
          std::reverse(path.begin(), path.end());
          for (auto i : path) cycle.push_back(tasks[i].id);
          cycle.push_back(tasks[path.front()].id);
        } else if (color[p] == white) {
          color[p] = grey;
          stack.push_back(p);
          frames.push_back({p, 0});
        }
      } else {
        color[node] = black;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return cycle;
}

}  // namespace

TaskPlan::TaskPlan(std::string plan_id,
                   std::string product_requirement,
                   std::vector<Task> tasks,
                   const ResourceSet * resources)
    : plan_id_(std::move(plan_id)),
      product_requirement_(std::move(product_requirement)),
      tasks_(std::move(tasks))
{
  std::sort(tasks_.begin(), tasks_.end(), [](const Task & a, const Task & b) {
    return a.id < b.id;
  });
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].id.empty()) {
      throw Error(ErrorKind::SchemaError, "task with empty id");
    }
    if (!index_.emplace(tasks_[i].id, i).second) {
      throw Error(ErrorKind::DuplicateTask,
                  "duplicate task id '" + tasks_[i].id + "'");
    }
  }

  preds_.resize(tasks_.size());
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    auto & task = tasks_[i];
    std::sort(task.predecessors.begin(), task.predecessors.end());
    task.predecessors.erase(
        std::unique(task.predecessors.begin(), task.predecessors.end()),
        task.predecessors.end());
    for (const auto & p : task.predecessors) {
      auto it = index_.find(p);
      if (it == index_.end()) {
        throw Error(ErrorKind::DanglingPredecessor,
                    "task '" + task.id + "' lists unknown predecessor '" + p
                        + "'");
      }
      if (it->second == i) throw CyclicPlanError({task.id, task.id});
      preds_[i].push_back(static_cast<std::uint32_t>(it->second));
    }
  }

  auto cycle = find_cycle(tasks_, preds_);
  if (!cycle.empty()) throw CyclicPlanError(std::move(cycle));

  if (resources) {
    for (const auto & task : tasks_) {
      auto it = resources->resources.find(task.resource);
      if (it == resources->resources.end()) {
        throw Error(ErrorKind::UnknownResource,
                    "task '" + task.id + "' uses unknown resource '"
                        + task.resource + "'");
      }
      if (!it->second.capabilities.count(task.function)) {
        throw Error(ErrorKind::CapabilityMismatch,
                    "resource '" + task.resource + "' cannot perform '"
                        + task.function + "' (task '" + task.id + "')");
      }
    }
  }

  for (const auto & task : tasks_) resource_names_.push_back(task.resource);
  std::sort(resource_names_.begin(), resource_names_.end());
  resource_names_.erase(
      std::unique(resource_names_.begin(), resource_names_.end()),
      resource_names_.end());
  for (const auto & task : tasks_) {
    auto it = std::lower_bound(
        resource_names_.begin(), resource_names_.end(), task.resource);
    resource_of_.push_back(
        static_cast<std::uint32_t>(it - resource_names_.begin()));
  }
}

std::optional<std::size_t> TaskPlan::index_of(std::string_view id) const
{
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Task & TaskPlan::task(std::string_view id) const
{
  auto i = index_of(id);
  if (!i) {
    throw Error(ErrorKind::SchemaError,
                "unknown task id '" + std::string(id) + "'");
  }
  return tasks_[*i];
}

std::vector<std::pair<std::string, std::string>> TaskPlan::edges() const
{
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto & t : tasks_) {
    for (const auto & p : t.predecessors) out.emplace_back(p, t.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool TaskPlan::reaches(std::size_t from, std::size_t to) const
{
  // Walk predecessors backwards from `to`.
  std::vector<bool> seen(tasks_.size(), false);
  std::vector<std::size_t> stack{to};
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (auto p : preds_[n]) {
      if (p == from) return true;
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return false;
}

TaskPlan TaskPlan::with_edge(const std::string & from,
                             const std::string & to) const
{
  std::map<std::string, std::vector<std::string>> preds;
  auto & list = preds[to];
  list = task(to).predecessors;
  task(from);
  list.push_back(from);
  return with_predecessors(preds);
}

TaskPlan TaskPlan::with_predecessors(
    const std::map<std::string, std::vector<std::string>> & preds) const
{
  std::vector<Task> tasks = tasks_;
  for (auto & t : tasks) {
    auto it = preds.find(t.id);
    if (it != preds.end()) t.predecessors = it->second;
  }
  return TaskPlan(plan_id_, product_requirement_, std::move(tasks));
}

const char * to_string(TaskStatus status)
{
  switch (status) {
    case TaskStatus::pending: return "pending";
    case TaskStatus::running: return "running";
    case TaskStatus::done: return "done";
  }
  return "unknown";
}

PlanState::PlanState(std::size_t task_count)
    : n_(task_count), words_((task_count + 31) / 32, 0)
{
}

std::size_t PlanState::hash() const
{
  std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string PlanState::to_string(const TaskPlan & plan) const
{
  std::string out = "{";
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) out += ", ";
    out += plan.tasks()[i].id + ": " + planverify::to_string(status(i));
  }
  return out + "}";
}

PlanAutomaton::PlanAutomaton(TaskPlan plan) : plan_(std::move(plan)) {}

bool PlanAutomaton::is_marked(const PlanState & s) const
{
  for (std::size_t i = 0; i < plan_.size(); ++i) {
    if (s.status(i) != TaskStatus::done) return false;
  }
  return true;
}

void PlanAutomaton::enabled(const PlanState & s,
                            std::vector<EventRef> & out) const
{
  out.clear();
  const std::size_t n = plan_.size();
  std::vector<bool> busy(plan_.resource_count(), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.status(i) == TaskStatus::running) busy[plan_.resource_index(i)] = true;
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (s.status(i) != TaskStatus::pending || busy[plan_.resource_index(i)]) {
      continue;
    }
    bool ready = true;
    for (auto p : plan_.predecessor_indices(i)) {
      if (s.status(p) != TaskStatus::done) {
        ready = false;
        break;
      }
    }
    if (ready) out.push_back({i, TransitionKind::start});
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (s.status(i) == TaskStatus::running) {
      out.push_back({i, TransitionKind::done});
    }
  }
}

std::vector<EventRef> PlanAutomaton::enabled(const PlanState & s) const
{
  std::vector<EventRef> out;
  enabled(s, out);
  return out;
}

bool PlanAutomaton::is_enabled(const PlanState & s, EventRef e) const
{
  auto events = enabled(s);
  return std::find(events.begin(), events.end(), e) != events.end();
}

PlanState PlanAutomaton::apply(const PlanState & s, EventRef e) const
{
  PlanState next = s;
  next.set(e.task,
           e.kind == TransitionKind::start ? TaskStatus::running
                                           : TaskStatus::done);
  return next;
}

GroundEvent PlanAutomaton::ground(EventRef e) const
{
  return plan_.tasks()[e.task].event(e.kind);
}

EventRef PlanAutomaton::resolve(const GroundEvent & e) const
{
  auto i = plan_.index_of(e.task_id);
  if (!i) {
    throw Error(ErrorKind::EventNotEnabled,
                "event " + e.label() + " refers to an unknown task");
  }
  return {static_cast<std::uint32_t>(*i), e.kind};
}

std::vector<GroundEvent> enabled_events(const PlanState & s,
                                        const TaskPlan & plan)
{
  PlanAutomaton automaton(plan);
  std::vector<GroundEvent> out;
  for (auto e : automaton.enabled(s)) out.push_back(automaton.ground(e));
  return out;
}

PlanState apply_event(const PlanState & s,
                      const GroundEvent & e,
                      const TaskPlan & plan)
{
  PlanAutomaton automaton(plan);
  EventRef ref = automaton.resolve(e);
  if (s.task_count() != plan.size() || !automaton.is_enabled(s, ref)) {
    throw Error(ErrorKind::EventNotEnabled,
                "event " + e.label() + " is not enabled in state "
                    + s.to_string(plan));
  }
  return automaton.apply(s, ref);
}

std::size_t state_count(const TaskPlan & plan, std::size_t budget)
{
  PlanAutomaton automaton(plan);
  std::unordered_set<PlanState, PlanStateHash> seen{automaton.initial()};
  std::deque<PlanState> queue{automaton.initial()};
  std::vector<EventRef> events;
  while (!queue.empty()) {
    PlanState s = std::move(queue.front());
    queue.pop_front();
    automaton.enabled(s, events);
    for (auto e : events) {
      PlanState next = automaton.apply(s, e);
      if (seen.insert(next).second) {
        if (seen.size() > budget) {
          throw Error(ErrorKind::StateBudgetExceeded,
                      "plan state count exceeds budget of "
                          + std::to_string(budget));
        }
        queue.push_back(std::move(next));
      }
    }
  }
  return seen.size();
}

}  // namespace planverify
