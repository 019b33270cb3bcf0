#include <doctest.h>

#include "oracles.h"
#include "planverify/constraints.h"
#include "planverify/safety_automaton.h"

using namespace planverify;
using planverify::testing::all_traces;
using planverify::testing::eval_backwards;
using planverify::testing::golden;
using planverify::testing::read_file;

namespace {

const AtomicProposition A = parse_ap("ap/*/*/*/start(task_a)/*");
const AtomicProposition B = parse_ap("ap/*/*/*/start(task_b)/*");
const AtomicProposition C = parse_ap("ap/*/*/*/executing(task_c)/*");
const AtomicProposition D = parse_ap("ap/*/*/*/executing(task_d)/*");

Bindings ab() { return {{"a", A}, {"b", B}, {"c", C}, {"d", D}}; }

Valuation val(std::initializer_list<AtomicProposition> aps) { return Valuation{aps}; }

Formula fa() { return Formula::atom(A); }
Formula fb() { return Formula::atom(B); }
Formula fc() { return Formula::atom(C); }
Formula fd() { return Formula::atom(D); }

bool run_progression(Formula f, const std::vector<Valuation> & trace)
{
  for (const auto & v : trace) f = progress(f, v);
  return empty_accepts(f);
}

// Letter of a valuation over the automaton's alphabet.
Letter letter_of(const SafetyAutomaton & a, const Valuation & v)
{
  Letter l = 0;
  for (std::size_t i = 0; i < a.alphabet.size(); ++i) {
    if (v.contains(a.alphabet[i])) l |= Letter{1} << i;
  }
  return l;
}

std::size_t index_of(const Alphabet & alphabet, const AtomicProposition & ap)
{
  return static_cast<std::size_t>(std::find(alphabet.begin(), alphabet.end(), ap) - alphabet.begin());
}

}  // namespace

TEST_SUITE("ltlf")
{
  TEST_CASE("parser builds the expected trees")
  {
    auto ord = parse_ltlf("!b U a", ab());
    CHECK(ord == Formula::until(Formula::negation(fb()), fa()));
    auto mutex = parse_ltlf("G !(c & d)", ab());
    CHECK(mutex == Formula::globally(Formula::negation(Formula::conjunction({fc(), fd()}))));
    CHECK(parse_ltlf("true").is_true());
    CHECK(parse_ltlf("FALSE").is_false());
    CHECK(parse_ltlf("¬b U a", ab()) == ord);
    CHECK(parse_ltlf("G ¬(c ∧ d)", ab()) == mutex);
    CHECK(parse_ltlf("\"ap/*/*/*/start(task_a)/*\"") == fa());
  }

  TEST_CASE("precedence: unary > U,R > & > | > ->")
  {
    auto f = parse_ltlf("a | b & c U d -> X a", ab());
    auto expect = Formula::implies(
        Formula::disjunction({fa(), Formula::conjunction({fb(), Formula::until(fc(), fd())})}),
        Formula::next(fa()));
    CHECK(f == expect);
    CHECK(parse_ltlf("a -> b -> c", ab())
          == Formula::implies(fa(), Formula::implies(fb(), fc())));
    CHECK(parse_ltlf("a U b U c", ab()) == Formula::until(fa(), Formula::until(fb(), fc())));
    CHECK(parse_ltlf("N a R F b", ab())
          == Formula::release(Formula::weak_next(fa()), Formula::eventually(fb())));
  }

  TEST_CASE("printer output parses back to the same formula")
  {
    for (const char * text : {"!b U a", "G !(c & d)", "a | b & c U d -> X a", "N (a R F b)",
                              "(a -> b) -> c", "!(a U b) & G F c", "X X !a | WX b"}) {
      auto f = parse_ltlf(text, ab());
      CAPTURE(f.to_string());
      CHECK(parse_ltlf(f.to_string()) == f);
    }
  }

  TEST_CASE("syntax errors carry the position")
  {
    try {
      parse_ltlf("G (a -> (F b)", ab());
      FAIL("parsed");
    }
    catch (const SyntaxError & e) {
      CHECK(e.kind() == ErrorKind::SyntaxError);
      CHECK(e.position() == 13);
    }
    CHECK_THROWS_AS(parse_ltlf("a &", ab()), SyntaxError);
    CHECK_THROWS_AS(parse_ltlf("", ab()), SyntaxError);
    CHECK_THROWS_AS(parse_ltlf("a b", ab()), SyntaxError);
    try {
      parse_ltlf("F zz", ab());
      FAIL("parsed");
    }
    catch (const Error & e) {
      CHECK(e.kind() == ErrorKind::UnknownProposition);
    }
  }

  TEST_CASE("canonical boolean structure")
  {
    CHECK(Formula::conjunction({}).is_true());
    CHECK(Formula::disjunction({}).is_false());
    CHECK(Formula::conjunction({fa(), fa()}) == fa());
    CHECK(Formula::conjunction({fa(), fb()}) == Formula::conjunction({fb(), fa()}));
    CHECK(Formula::conjunction({fa(), Formula::negation(fa())}).is_false());
    CHECK(Formula::disjunction({fa(), Formula::negation(fa())}).is_true());
    CHECK(Formula::negation(Formula::negation(fa())) == fa());
  }

  TEST_CASE("normalize")
  {
    CHECK(normalize(parse_ltlf("!(c & d)", ab()))
          == Formula::disjunction({Formula::negation(fc()), Formula::negation(fd())}));
    auto g = normalize(parse_ltlf("G !(c & d)", ab()));
    CHECK(g == Formula::release(Formula::bottom(), Formula::disjunction({Formula::negation(fc()),
                                                                         Formula::negation(fd())})));
    CHECK(g.is_normal());

    // Idempotent and semantics-preserving over every trace of length <= 4.
    auto traces = all_traces({A, B}, 4);
    for (const char * text : {"G !(a & b)", "!(a U b)", "!X a", "!N b", "F a -> G b", "!(a R b)",
                              "!(F a | G !b)", "X (a -> N b)"}) {
      auto f = parse_ltlf(text, ab());
      auto n = normalize(f);
      CAPTURE(text);
      CHECK(n.is_normal());
      CHECK(normalize(n) == n);
      for (const auto & t : traces) REQUIRE(holds_on_trace(f, t) == holds_on_trace(n, t));
    }
  }

  TEST_CASE("progression steps")
  {
    auto ord = normalize(parse_ltlf("!b U a", ab()));
    CHECK(progress(ord, val({A})).is_true());
    CHECK(progress(ord, val({B})).is_false());
    CHECK(progress(ord, val({})) == ord);
    auto mutex = normalize(parse_ltlf("G !(c & d)", ab()));
    CHECK(progress(mutex, val({C, D})).is_false());
    CHECK(progress(mutex, val({C})) == mutex);
  }

  TEST_CASE("empty-trace acceptance")
  {
    CHECK(empty_accepts(Formula::top()));
    CHECK_FALSE(empty_accepts(Formula::bottom()));
    CHECK_FALSE(empty_accepts(normalize(parse_ltlf("!b U a", ab()))));
    CHECK(empty_accepts(normalize(parse_ltlf("G !(c & d)", ab()))));
    CHECK_FALSE(empty_accepts(parse_ltlf("X true")));
    CHECK(empty_accepts(parse_ltlf("N false")));
    // Agrees with both evaluators on the empty trace.
    for (const char * text : {"!b U a", "G !(c & d)", "X a", "N a", "F a", "G a", "a R b", "!a",
                              "a -> b", "!(a U b)"}) {
      auto f = parse_ltlf(text, ab());
      CAPTURE(text);
      CHECK(empty_accepts(normalize(f)) == holds_on_trace(f, {}));
      CHECK(eval_backwards(f, {}) == holds_on_trace(f, {}));
    }
  }

  TEST_CASE("strong next at the end of the trace")
  {
    // A single-letter trace has no successor position.
    auto f = parse_ltlf("X true");
    std::vector<Valuation> one{val({})};
    CHECK_FALSE(holds_on_trace(f, one));
    CHECK_FALSE(run_progression(normalize(f), one));
    std::vector<Valuation> two{val({}), val({})};
    CHECK(holds_on_trace(f, two));
    CHECK(run_progression(normalize(f), two));
  }

  TEST_CASE("recursive and backwards evaluators agree")
  {
    auto traces = all_traces({A, B}, 4);
    for (const char * text : {"!b U a", "G !(a & b)", "X a U N b", "F G a", "G F b", "a R X b",
                              "N N a | X !b", "(a -> X b) U b", "!(F a) & G (b -> N a)"}) {
      auto f = parse_ltlf(text, ab());
      for (const auto & t : traces) {
        CAPTURE(text);
        REQUIRE(holds_on_trace(f, t) == eval_backwards(f, t));
      }
    }
  }

  TEST_CASE("progression agrees with the evaluator on depth-3 formulas over 3 propositions")
  {
    const AtomicProposition E = parse_ap("ap/*/*/*/start(task_e)/*");
    auto atoms = std::vector{A, B, E};
    auto traces = all_traces(atoms, 3);
    Bindings bind = {{"a", A}, {"b", B}, {"e", E}};
    std::vector<Formula> formulas;
    for (const char * text : {"a U (b R X e)", "G (a -> F (b & N e))", "X (a U b) | G !e",
                              "(a R b) U (X e)", "F (a & X (b U e))", "N G (a | b | e)"}) {
      formulas.push_back(parse_ltlf(text, bind));
    }
    for (const auto & f : formulas) {
      auto n = normalize(f);
      for (const auto & t : traces) REQUIRE(run_progression(n, t) == holds_on_trace(f, t));
    }
  }

  TEST_CASE("ordering automaton shape")
  {
    auto f = translate_structured({"ord", ConstraintType::ordering, A, B, "", {}, ""});
    auto a = compile_safety_automaton(f, propositions(f), "ord");
    REQUIRE(a.state_count() == 3);
    const Letter la = Letter{1} << index_of(a.alphabet, A);
    const Letter lb = Letter{1} << index_of(a.alphabet, B);
    const StateId q0 = a.initial;
    const StateId q1 = a.next(q0, la);
    const StateId qv = a.next(q0, lb);
    CHECK(a.state_formula[q1].is_true());
    CHECK(a.violating[qv]);
    CHECK(a.next(q0, 0) == q0);
    CHECK(a.violating_states() == std::vector<StateId>{qv});
    for (Letter l = 0; l < a.letter_count(); ++l) {
      CHECK(a.next(q1, l) == q1);
      CHECK(a.next(qv, l) == qv);
    }
    CHECK_FALSE(a.accepting_at_end[q0]);
    CHECK(a.accepting_at_end[q1]);
  }

  TEST_CASE("mutual-exclusion automaton shape")
  {
    auto f = translate_structured({"mx", ConstraintType::mutual_exclusion, C, D, "", {}, ""});
    auto a = compile_safety_automaton(f, propositions(f), "mx");
    REQUIRE(a.state_count() == 2);
    const Letter both = (Letter{1} << index_of(a.alphabet, C)) | (Letter{1} << index_of(a.alphabet, D));
    const StateId q0 = a.initial;
    const StateId qv = a.next(q0, both);
    CHECK(a.violating[qv]);
    for (Letter l = 0; l < a.letter_count(); ++l) {
      if (l != both) CHECK(a.next(q0, l) == q0);
      CHECK(a.next(qv, l) == qv);
    }
    CHECK(a.accepting_at_end[q0]);
  }

  TEST_CASE("automaton simulation matches progression")
  {
    auto traces = all_traces({A, B}, 4);
    for (const char * text : {"!b U a", "G !(a & b)", "F a & X b", "a R (b | N a)", "X X a"}) {
      auto f = normalize(parse_ltlf(text, ab()));
      auto aut = compile_safety_automaton(f, make_alphabet({A, B}), text);
      for (StateId q : aut.violating_states()) CHECK(aut.state_formula[q].is_false());
      for (const auto & t : traces) {
        StateId q = aut.initial;
        for (const auto & v : t) q = aut.next(q, letter_of(aut, v));
        REQUIRE(aut.accepting_at_end[q] == run_progression(f, t));
      }
    }
  }

  TEST_CASE("translation of structured constraints")
  {
    const auto mcp = parse_ap("ap/assemble/MCP/ur5e/start(move_loaded)/assembly_board");
    const auto sg = parse_ap("ap/assemble/SG/xarm6/start(move_loaded)/assembly_board");
    auto f = translate_structured({"t1", ConstraintType::ordering, mcp, sg, "", {}, ""});
    CHECK(f == Formula::until(Formula::negation(Formula::atom(sg)), Formula::atom(mcp)));
    auto g = translate_structured({"t2", ConstraintType::mutual_exclusion, C, C, "", {}, ""});
    CHECK(g == Formula::globally(Formula::negation(fc())));
    auto h = translate_structured({"t3", ConstraintType::raw_ltlf, {}, {}, "F a", ab(), ""});
    CHECK(h == Formula::eventually(fa()));
    CHECK_THROWS_AS(parse_constraint_type("sometimes"), Error);
  }

  TEST_CASE("compilation limits and errors")
  {
    auto t = compile_safety_automaton(Formula::top(), {}, "t");
    CHECK(t.state_count() == 1);
    CHECK(t.violating_states().empty());
    auto dot = to_dot(t);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("q1") == std::string::npos);

    std::vector<AtomicProposition> many;
    std::vector<Formula> atoms;
    for (int i = 0; i < 17; ++i) {
      many.push_back(parse_ap("ap/*/*/*/start(f" + std::to_string(i) + ")/*"));
      atoms.push_back(Formula::atom(many.back()));
    }
    auto big = Formula::globally(Formula::disjunction(atoms));
    try {
      compile_safety_automaton(big, make_alphabet(many), "big");
      FAIL("compiled");
    }
    catch (const Error & e) {
      CHECK(e.kind() == ErrorKind::AlphabetTooLarge);
    }
    try {
      compile_safety_automaton(fa(), make_alphabet({B}), "x");
      FAIL("compiled");
    }
    catch (const Error & e) {
      CHECK(e.kind() == ErrorKind::UnknownProposition);
    }
  }

  TEST_CASE("DOT export: ordering shape and frozen mutual-exclusion output")
  {
    auto ord = translate_structured({"ordering", ConstraintType::ordering, A, B, "", {}, ""});
    auto dot = to_dot(compile_safety_automaton(ord, propositions(ord), "ordering"));
    CHECK(dot.find("q0 [") != std::string::npos);
    CHECK(dot.find("q1 [") != std::string::npos);
    CHECK(dot.find("(q_v)") != std::string::npos);
    CHECK(dot.find("fillcolor") != std::string::npos);

    auto mx = translate_structured({"mutex", ConstraintType::mutual_exclusion, C, D, "", {}, ""});
    auto mdot = to_dot(compile_safety_automaton(mx, propositions(mx), "mutex"));
    CHECK(mdot == read_file(golden("basic_mutex.dot")));
    CHECK(to_dot(compile_safety_automaton(mx, propositions(mx), "mutex")) == mdot);
  }

  TEST_CASE("review report lists formulas and automata")
  {
    auto cs = translate_all({{"o", ConstraintType::ordering, A, B, "", {}, "A before B."}});
    std::vector<SafetyAutomaton> autos{compile_safety_automaton(cs[0].formula, propositions(cs[0].formula), "o")};
    auto md = review_report(cs, autos);
    CHECK(md.find("A before B.") != std::string::npos);
    CHECK(md.find("3 states") != std::string::npos);
    CHECK(review_report({}, {}).find("No constraints") != std::string::npos);
  }
}
