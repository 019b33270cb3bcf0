#include "planverify/valuation.h"

#include "planverify/error.h"

namespace planverify {

Valuation valuation(const PlanAutomaton & automaton,
                    const PlanState & state,
                    const std::optional<GroundEvent> & incoming,
                    const Alphabet & alphabet)
{
  const auto & tasks = automaton.plan().tasks();
  Valuation v;
  for (const auto & ap : alphabet) {
    if (ap.event().kind == EventKind::executing) {
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (state.status(i) == TaskStatus::running
            && fields_match(ap, tasks[i].event(TransitionKind::start))) {
          v.true_aps.insert(ap);
          break;
        }
      }
    } else if (incoming && matches(ap, *incoming)) {
      v.true_aps.insert(ap);
    }
  }
  return v;
}

LetterEvaluator::LetterEvaluator(const PlanAutomaton & automaton,
                                 const Alphabet & alphabet)
    : alphabet_(alphabet), task_count_(automaton.plan().size())
{
  if (alphabet_.size() > 64) {
    throw Error(ErrorKind::AlphabetTooLarge,
                "constraint alphabet has " + std::to_string(alphabet_.size())
                    + " propositions; at most 64 are supported");
  }
  const auto & tasks = automaton.plan().tasks();
  start_mask_.assign(tasks.size(), 0);
  done_mask_.assign(tasks.size(), 0);
  running_mask_.assign(tasks.size(), 0);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto start = tasks[i].event(TransitionKind::start);
    auto done = tasks[i].event(TransitionKind::done);
    for (std::size_t k = 0; k < alphabet_.size(); ++k) {
      const Letter bit = Letter{1} << k;
      const auto & ap = alphabet_[k];
      if (ap.event().kind == EventKind::executing) {
        level_bits_ |= bit;
        if (fields_match(ap, start)) running_mask_[i] |= bit;
      } else {
        if (matches(ap, start)) start_mask_[i] |= bit;
        if (matches(ap, done)) done_mask_[i] |= bit;
      }
    }
  }
}

Letter LetterEvaluator::level(const PlanState & state) const
{
  if (!level_bits_) return 0;
  Letter out = 0;
  for (std::size_t i = 0; i < task_count_; ++i) {
    if (state.status(i) == TaskStatus::running) out |= running_mask_[i];
  }
  return out;
}

Letter LetterEvaluator::after(const PlanState & state, EventRef incoming) const
{
  Letter pulse = incoming.kind == TransitionKind::start
                     ? start_mask_[incoming.task]
                     : done_mask_[incoming.task];
  return pulse | level(state);
}

Letter LetterEvaluator::at_rest(const PlanState & state) const
{
  return level(state);
}

std::vector<AtomicProposition> LetterEvaluator::unmatched() const
{
  Letter seen = 0;
  for (std::size_t i = 0; i < task_count_; ++i) {
    seen |= start_mask_[i] | done_mask_[i] | running_mask_[i];
  }
  std::vector<AtomicProposition> out;
  for (std::size_t k = 0; k < alphabet_.size(); ++k) {
    if (!(seen & (Letter{1} << k))) out.push_back(alphabet_[k]);
  }
  return out;
}

}  // namespace planverify
