#pragma once

#include <optional>
#include <vector>

#include "planverify/ap.h"
#include "planverify/plan.h"
#include "planverify/safety_automaton.h"

namespace planverify {

/// Propositions of `alphabet` that hold after entering `state`.
///
/// start/done propositions hold iff they match `incoming` (pulse);
/// executing propositions hold iff some running task matches (level).
/// Without an incoming event only executing propositions can hold.
Valuation valuation(const PlanAutomaton & automaton,
                    const PlanState & state,
                    const std::optional<GroundEvent> & incoming,
                    const Alphabet & alphabet);

/// Precomputed bitmask form of valuation() for one alphabet.
class LetterEvaluator
{
 public:
  /// Throws AlphabetTooLarge beyond 64 propositions.
  LetterEvaluator(const PlanAutomaton & automaton, const Alphabet & alphabet);

  Letter after(const PlanState & state, EventRef incoming) const;
  Letter at_rest(const PlanState & state) const;

  /// Propositions matching no event and no task of the plan.
  std::vector<AtomicProposition> unmatched() const;

 private:
  Letter level(const PlanState & state) const;

  Alphabet alphabet_;
  std::size_t task_count_ = 0;
  std::vector<Letter> start_mask_;
  std::vector<Letter> done_mask_;
  std::vector<Letter> running_mask_;
  Letter level_bits_ = 0;
};

}  // namespace planverify
