#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace planverify {

inline constexpr std::string_view kWildcard = "*";

/// What part of a task execution an atomic proposition observes.
///
/// `start` and `done` are pulse observations: they hold only on the step
/// right after the corresponding plan transition. `executing` is a level
/// observation that holds while a matching task is running. `any` is the
/// bare `*` event field and observes both start and done transitions.
enum class EventKind { start, done, executing, any };

struct EventDescriptor
{
  EventKind kind = EventKind::start;
  std::string function = std::string(kWildcard);

  std::string to_string() const;

  auto operator<=>(const EventDescriptor &) const = default;
};

/// Structured atomic proposition `ap/process/product/resource/event/context`.
///
/// Fields are stored canonically (lowercase); `*` is the wildcard. Values
/// are immutable once constructed.
class AtomicProposition
{
 public:
  AtomicProposition(std::string process,
                    std::string product,
                    std::string resource,
                    EventDescriptor event,
                    std::string context);

  static AtomicProposition parse(std::string_view text);

  const std::string & process() const { return process_; }
  const std::string & product() const { return product_; }
  const std::string & resource() const { return resource_; }
  const EventDescriptor & event() const { return event_; }
  const std::string & context() const { return context_; }

  bool is_pulse() const { return event_.kind != EventKind::executing; }
  bool is_ground() const;

  std::string to_string() const;

  auto operator<=>(const AtomicProposition &) const = default;

 private:
  std::string process_;
  std::string product_;
  std::string resource_;
  EventDescriptor event_;
  std::string context_;
};

AtomicProposition parse_ap(std::string_view text);

std::string canonical_field(std::string_view text);

enum class TransitionKind { start, done };

const char * to_string(TransitionKind kind);

/// A concrete plan event: task `task_id` starting or finishing.
struct GroundEvent
{
  std::string task_id;
  TransitionKind kind = TransitionKind::start;
  std::string function;
  std::string process;
  std::string product;
  std::string resource;
  std::string context;

  // `TASK_ID.start` / `TASK_ID.done`.
  std::string label() const;

  bool operator==(const GroundEvent &) const = default;
};

/// Compares every field except the event kind. Used for level
/// (executing) observations and for resolving propositions to tasks.
bool fields_match(const AtomicProposition & pattern, const GroundEvent & ev);

/// Pulse match: executing-patterns never match a ground event.
bool matches(const AtomicProposition & pattern, const GroundEvent & ev);

/// Builds the wildcard-free proposition observing exactly `ev`.
AtomicProposition ground_ap(const GroundEvent & ev);

struct Valuation
{
  std::set<AtomicProposition> true_aps;

  bool contains(const AtomicProposition & ap) const
  {
    return true_aps.count(ap) != 0;
  }
  bool empty() const { return true_aps.empty(); }

  bool operator==(const Valuation &) const = default;
};

/// Sorted, duplicate-free list of propositions (a constraint alphabet).
using Alphabet = std::vector<AtomicProposition>;

Alphabet make_alphabet(std::vector<AtomicProposition> aps);

}  // namespace planverify
