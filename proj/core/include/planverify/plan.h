#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "planverify/ap.h"

namespace planverify {

struct Task
{
  std::string id;
  std::string function;
  std::string part;
  std::string resource;
  std::string process;
  std::string source_context;
  std::string dest_context;
  std::vector<std::string> predecessors;

  /// Location matched by the context field of propositions: the
  /// destination when one is declared, otherwise the source.
  const std::string & context() const;

  GroundEvent event(TransitionKind kind) const;

  bool operator==(const Task &) const = default;
};

struct Resource
{
  std::string id;
  std::set<std::string> capabilities;
  std::string label;
};

struct ResourceSet
{
  std::map<std::string, Resource> resources;

  bool empty() const { return resources.empty(); }
};

/// Validated task DAG. Tasks are kept sorted by id; indices into
/// tasks() are stable for the lifetime of the plan.
class TaskPlan
{
 public:
  TaskPlan() = default;

  /// Throws DuplicateTask, DanglingPredecessor, CyclicPlan and, when
  /// `resources` is given, UnknownResource / CapabilityMismatch.
  TaskPlan(std::string plan_id,
           std::string product_requirement,
           std::vector<Task> tasks,
           const ResourceSet * resources = nullptr);

  const std::string & plan_id() const { return plan_id_; }
  const std::string & product_requirement() const
  {
    return product_requirement_;
  }
  const std::vector<Task> & tasks() const { return tasks_; }
  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const Task & task(std::string_view id) const;

  const std::vector<std::uint32_t> & predecessor_indices(std::size_t i) const
  {
    return preds_[i];
  }
  std::uint32_t resource_index(std::size_t i) const { return resource_of_[i]; }
  std::size_t resource_count() const { return resource_names_.size(); }
  const std::vector<std::string> & resource_names() const
  {
    return resource_names_;
  }

  /// Precedence relation as sorted (predecessor, successor) pairs.
  std::vector<std::pair<std::string, std::string>> edges() const;

  /// True if a directed path leads from task `from` to task `to`.
  bool reaches(std::size_t from, std::size_t to) const;

  TaskPlan with_edge(const std::string & from, const std::string & to) const;
  TaskPlan with_predecessors(
      const std::map<std::string, std::vector<std::string>> & preds) const;

  bool operator==(const TaskPlan & other) const
  {
    return plan_id_ == other.plan_id_ && tasks_ == other.tasks_;
  }

 private:
  std::string plan_id_;
  std::string product_requirement_;
  std::vector<Task> tasks_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<std::uint32_t>> preds_;
  std::vector<std::uint32_t> resource_of_;
  std::vector<std::string> resource_names_;
};

enum class TaskStatus : std::uint8_t { pending = 0, running = 1, done = 2 };

const char * to_string(TaskStatus status);

/// Per-task status vector, packed two bits per task.
class PlanState
{
 public:
  PlanState() = default;
  explicit PlanState(std::size_t task_count);

  std::size_t task_count() const { return n_; }
  TaskStatus status(std::size_t i) const
  {
    return static_cast<TaskStatus>((words_[i / 32] >> (2 * (i % 32))) & 3u);
  }
  void set(std::size_t i, TaskStatus s)
  {
    auto & w = words_[i / 32];
    const unsigned shift = 2 * (i % 32);
    w = (w & ~(std::uint64_t{3} << shift))
        | (static_cast<std::uint64_t>(s) << shift);
  }

  std::size_t hash() const;
  std::string to_string(const TaskPlan & plan) const;

  bool operator==(const PlanState &) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct PlanStateHash
{
  std::size_t operator()(const PlanState & s) const { return s.hash(); }
};

/// Index-based plan event used on hot paths.
struct EventRef
{
  std::uint32_t task = 0;
  TransitionKind kind = TransitionKind::start;

  bool operator==(const EventRef &) const = default;
};

/// Plan execution automaton over start/done events, generated lazily.
///
/// start(t) is enabled when t is pending, all predecessors are done and
/// no other task on t's resource is running; done(t) when t is running.
/// Enabled events are ordered starts first, then dones, each by task id.
class PlanAutomaton
{
 public:
  explicit PlanAutomaton(TaskPlan plan);

  const TaskPlan & plan() const { return plan_; }

  PlanState initial() const { return PlanState(plan_.size()); }
  bool is_marked(const PlanState & s) const;

  void enabled(const PlanState & s, std::vector<EventRef> & out) const;
  std::vector<EventRef> enabled(const PlanState & s) const;
  bool is_enabled(const PlanState & s, EventRef e) const;

  /// No enabledness check; callers on hot paths guarantee it.
  PlanState apply(const PlanState & s, EventRef e) const;

  GroundEvent ground(EventRef e) const;
  /// Throws EventNotEnabled for events of unknown tasks.
  EventRef resolve(const GroundEvent & e) const;

 private:
  TaskPlan plan_;
};

std::vector<GroundEvent> enabled_events(const PlanState & s,
                                        const TaskPlan & plan);

/// Throws EventNotEnabled unless `e` is enabled in `s`.
PlanState apply_event(const PlanState & s,
                      const GroundEvent & e,
                      const TaskPlan & plan);

/// Number of reachable plan states; throws StateBudgetExceeded past
/// `budget`.
std::size_t state_count(const TaskPlan & plan,
                        std::size_t budget = 5'000'000);

}  // namespace planverify
