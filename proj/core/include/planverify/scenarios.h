#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "planverify/constraints.h"
#include "planverify/feedback.h"
#include "planverify/plan.h"

namespace planverify {

struct ScenarioSpec
{
  std::string id;
  int robots = 1;
  int parts = 1;
  int ordering_rules = 0;
  int mutex_rules = 0;
  std::uint64_t seed = 0;
  // When false the generator pre-adds the edges that satisfy every rule.
  bool planted = true;

  int rules() const { return ordering_rules + mutex_rules; }
};

struct Scenario
{
  ScenarioSpec spec;
  TaskPlan plan;
  ResourceSet resources;
  std::vector<StructuredConstraint> constraints;
  // Some rule can be broken by an execution of the generated plan.
  bool planted_unsafe = false;
};

/// Per part a PICK -> MOVE -> PLACE chain; parts are dealt round-robin to
/// robots in a seed-shuffled order. Ordering rules relate MOVE starts of
/// two parts, mutual-exclusion rules relate PLACE executions at the shared
/// assembly board. Throws InfeasibleSpec.
Scenario generate_scenario(const ScenarioSpec & spec);

/// Canonical 2/3/2, 3/4/3 and 4/6/4 specs (ids S1, S2, S3).
std::vector<ScenarioSpec> canonical_specs(std::uint64_t seed = 0);

/// {scenarios: [{id, robots, parts, ordering_rules, mutex_rules, rules?,
/// seed?, planted?}]} or a bare list. Throws SchemaError / InfeasibleSpec.
std::vector<ScenarioSpec> parse_scenario_specs(const nlohmann::json & doc);
nlohmann::json scenario_spec_to_json(const ScenarioSpec & spec);

/// Non-binding reference figures for the canonical scenarios.
struct ReferenceFigures
{
  double baseline_pct;
  double framework_pct;
  double repair_attempts;
  double verification_time_s;
  long explored_states;
};

std::optional<ReferenceFigures> reference_figures(const std::string & scenario_id);

struct BenchmarkRecord
{
  std::string scenario_id;
  int robots = 0;
  int parts = 0;
  int rules = 0;
  int trials = 0;
  double rule_satisfaction_pct_baseline = 0;
  double rule_satisfaction_pct_framework = 0;
  double mean_repair_attempts = 0;
  // Seconds spent in validate_safety per trial, averaged.
  double mean_verification_time = 0;
  // Mean states explored by the final verification of each trial.
  long explored_states = 0;
  int converged_trials = 0;
  int planted_unsafe_trials = 0;
  std::vector<std::string> failures;
};

struct BenchmarkOptions
{
  int trials = 20;
  int max_attempts = 5;
  VerifyOptions verify;
};

/// Trial t of a spec uses seed spec.seed + t.
std::vector<BenchmarkRecord> run_benchmark(const std::vector<ScenarioSpec> & specs,
                                           Planner & planner,
                                           const BenchmarkOptions & options = {});

nlohmann::json benchmark_to_json(const std::vector<BenchmarkRecord> & records,
                                 bool include_timing = false);
std::string benchmark_to_csv(const std::vector<BenchmarkRecord> & records,
                             bool include_timing = false);
std::string format_benchmark(const std::vector<BenchmarkRecord> & records,
                             bool include_timing = true);

}  // namespace planverify
