#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.h"
#include "planverify/documents.h"
#include "planverify/scenarios.h"

using namespace planverify;

namespace {

std::set<std::string> robots_of(const TaskPlan & plan)
{
  std::set<std::string> out;
  for (const auto & t : plan.tasks()) out.insert(t.resource);
  return out;
}

VerificationReport verify(const Scenario & s)
{
  return validate_safety(PlanAutomaton(s.plan), translate_all(s.constraints));
}

}  // namespace

TEST_SUITE("scenarios")
{
  TEST_CASE("generated shape follows the spec")
  {
    auto s = generate_scenario({"x", 2, 3, 1, 1, 0});
    CHECK(s.plan.size() == 9);
    CHECK(robots_of(s.plan).size() == 2);
    REQUIRE(s.constraints.size() == 2);
    CHECK(s.constraints[0].type == ConstraintType::ordering);
    CHECK(s.constraints[1].type == ConstraintType::mutual_exclusion);
    CHECK(s.constraints[0].id == "r1");
    CHECK(s.constraints[1].id == "r2");
    for (const auto & t : s.plan.tasks()) {
      CHECK(s.resources.resources.count(t.resource) == 1);
      if (t.id.ends_with("_PICK")) CHECK(t.predecessors.empty());
      if (t.id.ends_with("_MOVE")) CHECK(t.predecessors.size() == 1);
    }

    auto big = generate_scenario({"y", 4, 6, 2, 2, 7});
    CHECK(big.plan.size() == 18);
    CHECK(robots_of(big.plan).size() == 4);
    CHECK(big.constraints.size() == 4);
  }

  TEST_CASE("single chain without rules is safe")
  {
    auto s = generate_scenario({"t", 1, 1, 0, 0, 0});
    CHECK(s.plan.size() == 3);
    CHECK(s.plan.edges().size() == 2);
    CHECK(!s.planted_unsafe);
    CHECK(verify(s).verdict == Verdict::safe);
  }

  TEST_CASE("infeasible specs are rejected")
  {
    auto kind = [](ScenarioSpec spec) {
      try {
        generate_scenario(spec);
      }
      catch (const Error & e) {
        return e.kind();
      }
      return ErrorKind::IoError;
    };
    CHECK(kind({"a", 1, 2, 2, 0, 0}) == ErrorKind::InfeasibleSpec);
    CHECK(kind({"b", 0, 2, 0, 0, 0}) == ErrorKind::InfeasibleSpec);
    CHECK(kind({"c", 1, 0, 0, 0, 0}) == ErrorKind::InfeasibleSpec);
    CHECK(kind({"d", 1, 3, 0, 4, 0}) == ErrorKind::InfeasibleSpec);
  }

  TEST_CASE("planted flags agree with the verifier")
  {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      for (const auto & base : canonical_specs(seed)) {
        auto s = generate_scenario(base);
        CHECK(s.planted_unsafe == (verify(s).verdict == Verdict::unsafe));
        auto safe_spec = base;
        safe_spec.planted = false;
        auto safe = generate_scenario(safe_spec);
        CHECK(!safe.planted_unsafe);
        CHECK(verify(safe).verdict == Verdict::safe);
        // Same tasks, only extra edges.
        CHECK(safe.plan.size() == s.plan.size());
        CHECK(safe.plan.edges().size() >= s.plan.edges().size());
      }
    }
  }

  TEST_CASE("generation is reproducible")
  {
    auto a = generate_scenario({"s", 3, 4, 2, 1, 11});
    auto b = generate_scenario({"s", 3, 4, 2, 1, 11});
    CHECK(dump_json(plan_to_json(a.plan)) == dump_json(plan_to_json(b.plan)));
    CHECK(dump_json(constraints_to_json(a.constraints)) == dump_json(constraints_to_json(b.constraints)));
  }

  TEST_CASE("spec documents")
  {
    auto specs = parse_scenario_specs(load_document(planverify::testing::fixture("bench_canonical.json")));
    REQUIRE(specs.size() == 3);
    CHECK(specs[2].id == "S3");
    CHECK(specs[2].rules() == 4);
    auto round = parse_scenario_specs(nlohmann::json::array({scenario_spec_to_json(specs[1])}));
    CHECK(round[0].parts == specs[1].parts);
    CHECK(round[0].mutex_rules == specs[1].mutex_rules);
    CHECK(reference_figures("S1").has_value());
    CHECK(!reference_figures("S9").has_value());
  }

  TEST_CASE("benchmark with the deterministic planner")
  {
    DeterministicPlanner planner;
    BenchmarkOptions opts;
    opts.trials = 4;
    auto records = run_benchmark(canonical_specs(), planner, opts);
    REQUIRE(records.size() == 3);
    for (const auto & r : records) {
      CHECK(r.trials == 4);
      CHECK(r.rule_satisfaction_pct_framework == 100.0);
      CHECK(r.converged_trials == 4);
      CHECK(r.mean_repair_attempts >= 1.0);
      CHECK(r.failures.empty());
      if (r.planted_unsafe_trials == r.trials) CHECK(r.rule_satisfaction_pct_baseline < 100.0);
    }
    CHECK(records[0].explored_states < records[1].explored_states);
    CHECK(records[1].explored_states < records[2].explored_states);

    auto trivial = run_benchmark({{"T", 1, 1, 0, 0, 0}}, planner, opts);
    CHECK(trivial[0].rule_satisfaction_pct_baseline == 100.0);
    CHECK(trivial[0].rule_satisfaction_pct_framework == 100.0);
    CHECK(trivial[0].mean_repair_attempts == 0.0);
    // Rule-free trials report the plan state space; a chain of n tasks has 2n + 1 states.
    CHECK(trivial[0].explored_states == 2 * 3 + 1);

    auto again = run_benchmark(canonical_specs(), planner, opts);
    CHECK(benchmark_to_json(records).dump() == benchmark_to_json(again).dump());
    auto j = benchmark_to_json(records);
    CHECK(j["records"][0]["mean_verification_time"].is_null());
    CHECK(j["records"][0]["reference_figures"]["binding"] == false);
    auto csv = benchmark_to_csv(records);
    CHECK(csv.starts_with("scenario_id,"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }
}
