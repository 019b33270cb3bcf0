#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "planverify/ltlf.h"

namespace planverify {

using StateId = std::uint32_t;

/// Letters over an alphabet of k propositions are bitmasks: bit i set
/// means alphabet[i] holds.
using Letter = std::uint64_t;

Valuation letter_to_valuation(Letter letter, const Alphabet & alphabet);

/// Explicit deterministic safety automaton built by formula progression.
///
/// States are numbered in breadth-first discovery order from the initial
/// formula; letters are explored in increasing bitmask order. Violating
/// states (formula `false`) are absorbing.
struct SafetyAutomaton
{
  std::string constraint_id;
  Alphabet alphabet;
  StateId initial = 0;
  std::vector<Formula> state_formula;
  std::vector<bool> violating;
  std::vector<bool> accepting_at_end;
  // Row-major: transitions[state * letter_count() + letter].
  std::vector<StateId> transitions;

  std::size_t state_count() const { return state_formula.size(); }
  std::size_t letter_count() const { return std::size_t{1} << alphabet.size(); }
  StateId next(StateId state, Letter letter) const
  {
    return transitions[state * letter_count() + letter];
  }
  std::vector<StateId> violating_states() const;
};

struct CompileOptions
{
  std::size_t max_valuation_classes = std::size_t{1} << 16;
};

SafetyAutomaton compile_safety_automaton(const Formula & f,
                                         const Alphabet & alphabet,
                                         std::string id,
                                         const CompileOptions & options = {});

/// Graphviz rendering. Output is deterministic: states in id order, edges
/// grouped per (source, target) with the letters listed as minterms.
std::string to_dot(const SafetyAutomaton & automaton);

}  // namespace planverify
