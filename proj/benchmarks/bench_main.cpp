#include <benchmark/benchmark.h>

#include "planverify/safety_automaton.h"
#include "planverify/scenarios.h"
#include "planverify/verifier.h"

using namespace planverify;

namespace {

const std::vector<ScenarioSpec> & specs()
{
  static const auto s = canonical_specs();
  return s;
}

// Verification of the planted-unsafe canonical scenario, index 0..2.
void BM_VerifyScenario(benchmark::State & state)
{
  auto sc = generate_scenario(specs().at(static_cast<std::size_t>(state.range(0))));
  PlanAutomaton plan(sc.plan);
  auto constraints = translate_all(sc.constraints);
  std::size_t explored = 0;
  for (auto _ : state) {
    auto r = validate_safety(plan, constraints);
    explored = r.total_explored();
    benchmark::DoNotOptimize(r);
  }
  state.counters["states"] = static_cast<double>(explored);
  state.SetLabel(sc.spec.id);
}
BENCHMARK(BM_VerifyScenario)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

// Same, on the variant with every rule already enforced (full exploration).
void BM_VerifySafeScenario(benchmark::State & state)
{
  auto spec = specs().at(static_cast<std::size_t>(state.range(0)));
  spec.planted = false;
  auto sc = generate_scenario(spec);
  PlanAutomaton plan(sc.plan);
  auto constraints = translate_all(sc.constraints);
  for (auto _ : state) benchmark::DoNotOptimize(validate_safety(plan, constraints));
  state.SetLabel(spec.id);
}
BENCHMARK(BM_VerifySafeScenario)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Progression(benchmark::State & state)
{
  const auto a = parse_ap("ap/*/*/*/start(a)/*");
  const auto b = parse_ap("ap/*/*/*/start(b)/*");
  auto f = normalize(parse_ltlf("G (a -> F b) & (!b U a)", {{"a", a}, {"b", b}}));
  const Valuation va{{a}}, vb{{b}}, none{};
  for (auto _ : state) {
    auto g = progress(f, none);
    g = progress(g, va);
    g = progress(g, vb);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_Progression);

void BM_CompileAutomaton(benchmark::State & state)
{
  std::string text = "true";
  Bindings bindings;
  for (int i = 0; i < state.range(0); ++i) {
    auto name = "p" + std::to_string(i);
    bindings.emplace(name, parse_ap("ap/*/*/*/start(" + name + ")/*"));
    if (i > 0) text = "(" + text + ") & (!p" + std::to_string(i) + " U p" + std::to_string(i - 1) + ")";
  }
  auto f = parse_ltlf(text, bindings);
  auto alphabet = propositions(f);
  for (auto _ : state) benchmark::DoNotOptimize(compile_safety_automaton(f, alphabet, "chain"));
}
BENCHMARK(BM_CompileAutomaton)->DenseRange(2, 8, 2);

}  // namespace

BENCHMARK_MAIN();
