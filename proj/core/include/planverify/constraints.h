#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planverify/ltlf.h"
#include "planverify/safety_automaton.h"

namespace planverify {

enum class ConstraintType { ordering, mutual_exclusion, raw_ltlf };

const char * to_string(ConstraintType type);
ConstraintType parse_constraint_type(const std::string & text);

/// Safety requirement in structured form. `ordering` reads "first must
/// occur before second"; `mutual_exclusion` forbids first and second from
/// holding together; `raw_ltlf` carries formula text in `raw`.
struct StructuredConstraint
{
  std::string id;
  ConstraintType type = ConstraintType::ordering;
  std::optional<AtomicProposition> first;
  std::optional<AtomicProposition> second;
  std::string raw;
  Bindings bindings;
  std::string source_text;
};

/// ordering(a, b) -> !b U a; mutual_exclusion(a, b) -> G !(a & b);
/// raw_ltlf -> parse_ltlf(raw, bindings).
Formula translate_structured(const StructuredConstraint & c);

/// A constraint paired with its formula, ready for verification.
struct CheckedConstraint
{
  StructuredConstraint constraint;
  Formula formula;
};

std::vector<CheckedConstraint> translate_all(
    const std::vector<StructuredConstraint> & constraints);

/// Markdown report for human review of generated formulas and automata.
/// `automata` may be shorter than `constraints` (e.g. when compilation
/// was skipped); missing entries are reported as such.
std::string review_report(const std::vector<CheckedConstraint> & constraints,
                          const std::vector<SafetyAutomaton> & automata);

}  // namespace planverify
