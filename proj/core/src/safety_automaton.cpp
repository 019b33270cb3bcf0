#include "planverify/safety_automaton.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "planverify/error.h"

namespace planverify {

Valuation letter_to_valuation(Letter letter, const Alphabet & alphabet)
{
  Valuation v;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (letter & (Letter{1} << i)) v.true_aps.insert(alphabet[i]);
  }
  return v;
}

std::vector<StateId> SafetyAutomaton::violating_states() const
{
  std::vector<StateId> out;
  for (StateId s = 0; s < violating.size(); ++s) {
    if (violating[s]) out.push_back(s);
  }
  return out;
}

SafetyAutomaton compile_safety_automaton(const Formula & f,
                                         const Alphabet & alphabet_in,
                                         std::string id,
                                         const CompileOptions & options)
{
  Alphabet alphabet = make_alphabet(alphabet_in);
  for (const auto & ap : propositions(f)) {
    if (!std::binary_search(alphabet.begin(), alphabet.end(), ap)) {
      throw Error(ErrorKind::UnknownProposition,
                  "proposition " + ap.to_string()
                      + " is not in the automaton alphabet");
    }
  }
  if (alphabet.size() >= 63
      || (std::size_t{1} << alphabet.size()) > options.max_valuation_classes) {
    throw Error(ErrorKind::AlphabetTooLarge,
                "alphabet of " + std::to_string(alphabet.size())
                    + " propositions exceeds the valuation-class bound of "
                    + std::to_string(options.max_valuation_classes));
  }

  SafetyAutomaton a;
  a.constraint_id = std::move(id);
  a.alphabet = alphabet;
  const std::size_t letters = a.letter_count();

  std::vector<Valuation> valuations;
  valuations.reserve(letters);
  for (Letter l = 0; l < letters; ++l) {
    valuations.push_back(letter_to_valuation(l, alphabet));
  }

  std::unordered_map<Formula, StateId, FormulaHash> index;
  auto intern = [&](const Formula & g) {
    auto [it, inserted] =
        index.emplace(g, static_cast<StateId>(a.state_formula.size()));
    if (inserted) a.state_formula.push_back(g);
    return it->second;
  };

  a.initial = intern(normalize(f));
  for (StateId s = 0; s < a.state_formula.size(); ++s) {
    a.transitions.resize((s + 1) * letters);
    Formula current = a.state_formula[s];
    for (Letter l = 0; l < letters; ++l) {
      StateId target = current.is_false()
                           ? s
                           : intern(progress(current, valuations[l]));
      a.transitions[s * letters + l] = target;
    }
  }
  for (const auto & g : a.state_formula) {
    a.violating.push_back(g.is_false());
    a.accepting_at_end.push_back(empty_accepts(g));
  }
  return a;
}

namespace {

std::string escape(const std::string & s)
{
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string minterm(Letter letter, const Alphabet & alphabet)
{
  if (alphabet.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i) out += " & ";
    if (!(letter & (Letter{1} << i))) out += '!';
    out += 'p' + std::to_string(i);
  }
  return out;
}

}  // namespace

std::string to_dot(const SafetyAutomaton & a)
{
  std::ostringstream os;
  os << "digraph \"" << escape(a.constraint_id) << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle, fontname=\"Helvetica\"];\n";
  os << "  __start [shape=point, label=\"\"];\n";
  for (std::size_t i = 0; i < a.alphabet.size(); ++i) {
    os << "  // p" << i << " = " << a.alphabet[i].to_string() << "\n";
  }
  for (StateId s = 0; s < a.state_count(); ++s) {
    os << "  q" << s << " [label=\"q" << s;
    if (a.violating[s]) os << " (q_v)";
    os << "\", tooltip=\"" << escape(a.state_formula[s].to_string()) << "\"";
    if (a.violating[s]) {
      os << ", style=filled, fillcolor=\"#f4a6a6\"";
    } else if (a.accepting_at_end[s]) {
      os << ", shape=doublecircle";
    }
    os << "];\n";
  }
  os << "  __start -> q" << a.initial << ";\n";
  for (StateId s = 0; s < a.state_count(); ++s) {
    std::map<StateId, std::vector<Letter>> grouped;
    for (Letter l = 0; l < a.letter_count(); ++l) {
      grouped[a.next(s, l)].push_back(l);
    }
    for (const auto & [target, letters] : grouped) {
      os << "  q" << s << " -> q" << target << " [label=\"";
      if (letters.size() == a.letter_count()) {
        os << "true";
      } else {
        for (std::size_t i = 0; i < letters.size(); ++i) {
          if (i) os << "\\n";
          os << minterm(letters[i], a.alphabet);
        }
      }
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace planverify
