#include "planverify/constraints.h"

#include <sstream>

#include "planverify/error.h"

namespace planverify {

const char * to_string(ConstraintType type)
{
  switch (type) {
    case ConstraintType::ordering: return "ordering";
    case ConstraintType::mutual_exclusion: return "mutual_exclusion";
    case ConstraintType::raw_ltlf: return "raw_ltlf";
  }
  return "unknown";
}

ConstraintType parse_constraint_type(const std::string & text)
{
  if (text == "ordering") return ConstraintType::ordering;
  if (text == "mutual_exclusion" || text == "mutex") {
    return ConstraintType::mutual_exclusion;
  }
  if (text == "raw_ltlf" || text == "ltlf") return ConstraintType::raw_ltlf;
  throw Error(ErrorKind::TranslationError,
              "unknown constraint type '" + text + "'");
}

namespace {

const AtomicProposition & require(const std::optional<AtomicProposition> & ap,
                                  const StructuredConstraint & c,
                                  const char * field)
{
  if (!ap) {
    throw Error(ErrorKind::TranslationError,
                "constraint '" + c.id + "' of type "
                    + to_string(c.type) + " is missing '" + field + "'");
  }
  return *ap;
}

}  // namespace

Formula translate_structured(const StructuredConstraint & c)
{
  switch (c.type) {
    case ConstraintType::ordering: {
      auto a = Formula::atom(require(c.first, c, "first"));
      auto b = Formula::atom(require(c.second, c, "second"));
      return Formula::until(Formula::negation(b), a);
    }
    case ConstraintType::mutual_exclusion: {
      auto a = Formula::atom(require(c.first, c, "first"));
      auto b = Formula::atom(require(c.second, c, "second"));
      return Formula::globally(Formula::negation(Formula::conjunction({a, b})));
    }
    case ConstraintType::raw_ltlf:
      if (c.raw.empty()) {
        throw Error(ErrorKind::TranslationError,
                    "raw_ltlf constraint '" + c.id + "' has no formula text");
      }
      return parse_ltlf(c.raw, c.bindings);
  }
  throw Error(ErrorKind::TranslationError, "unknown constraint type");
}

std::vector<CheckedConstraint> translate_all(
    const std::vector<StructuredConstraint> & constraints)
{
  std::vector<CheckedConstraint> out;
  out.reserve(constraints.size());
  for (const auto & c : constraints) {
    out.push_back({c, translate_structured(c)});
  }
  return out;
}

std::string review_report(const std::vector<CheckedConstraint> & constraints,
                          const std::vector<SafetyAutomaton> & automata)
{
  std::ostringstream os;
  os << "# Safety constraint review\n\n";
  if (constraints.empty()) {
    os << "No constraints.\n";
    return os.str();
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto & c = constraints[i].constraint;
    os << "## " << c.id << "\n\n";
    os << "- type: " << to_string(c.type) << "\n";
    os << "- requirement: "
       << (c.source_text.empty() ? "(none given)" : c.source_text) << "\n";
    if (c.first) os << "- first: `" << c.first->to_string() << "`\n";
    if (c.second) os << "- second: `" << c.second->to_string() << "`\n";
    os << "- LTLf: `" << constraints[i].formula.to_string() << "`\n";
    os << "- normalized: `" << normalize(constraints[i].formula).to_string()
       << "`\n";
    if (i < automata.size()) {
      const auto & a = automata[i];
      os << "- automaton: " << a.state_count() << " states, "
         << a.violating_states().size() << " violating, alphabet of "
         << a.alphabet.size() << "\n";
      for (StateId s = 0; s < a.state_count(); ++s) {
        os << "  - q" << s << (a.violating[s] ? " (violating)" : "")
           << (a.accepting_at_end[s] ? " (accepting at end)" : "") << ": `"
           << a.state_formula[s].to_string() << "`\n";
      }
    } else {
      os << "- automaton: not compiled\n";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace planverify
