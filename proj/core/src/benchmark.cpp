#include <cmath>
#include <cstdio>
#include <sstream>

#include "planverify/scenarios.h"

namespace planverify {

namespace {

double satisfied_pct(const VerificationReport & report, std::size_t rules)
{
  if (rules == 0) return 100.0;
  std::set<std::string> failed = report.violated_ids();
  failed.insert(report.inconclusive_constraints.begin(),
                report.inconclusive_constraints.end());
  return 100.0 * static_cast<double>(rules - failed.size()) / static_cast<double>(rules);
}

std::string fixed(double v, int digits = 2)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<BenchmarkRecord> run_benchmark(const std::vector<ScenarioSpec> & specs,
                                           Planner & planner,
                                           const BenchmarkOptions & options)
{
  if (options.trials < 1) {
    throw Error(ErrorKind::ConfigError, "trials must be at least 1");
  }
  RepairOptions repair;
  repair.max_attempts = options.max_attempts;
  repair.verify = options.verify;

  std::vector<BenchmarkRecord> out;
  for (const auto & spec : specs) {
    BenchmarkRecord rec;
    rec.scenario_id = spec.id;
    rec.robots = spec.robots;
    rec.parts = spec.parts;
    rec.rules = spec.rules();
    rec.trials = options.trials;
    double baseline = 0, framework = 0, attempts = 0, seconds = 0, states = 0;
    for (int t = 0; t < options.trials; ++t) {
      ScenarioSpec trial = spec;
      trial.seed = spec.seed + static_cast<std::uint64_t>(t);
      try {
        Scenario sc = generate_scenario(trial);
        auto checked = translate_all(sc.constraints);
        if (sc.planted_unsafe) ++rec.planted_unsafe_trials;
        RepairOutcome o = repair_loop(sc.plan, checked, planner, repair, &sc.resources);
        // The loop's first verification is of the raw plan.
        const VerificationReport & raw =
            o.history.empty() ? o.final_report : o.history.front().report;
        baseline += satisfied_pct(raw, checked.size());
        framework += satisfied_pct(o.final_report, checked.size());
        attempts += o.attempts;
        seconds += std::chrono::duration<double>(o.verification_time).count();
        // Without constraints the product is the plan automaton itself.
        states += static_cast<double>(checked.empty() ? state_count(sc.plan)
                                                      : o.final_report.total_explored());
        if (o.converged) ++rec.converged_trials;
        if (!o.converged) {
          rec.failures.push_back("seed " + std::to_string(trial.seed) + ": " + o.stop_reason);
        }
      }
      catch (const Error & e) {
        // Scored as 0% on both columns so the trial still counts.
        attempts += options.max_attempts;
        rec.failures.push_back("seed " + std::to_string(trial.seed) + ": "
                               + to_string(e.kind()) + ": " + e.what());
      }
    }
    const double n = options.trials;
    rec.rule_satisfaction_pct_baseline = baseline / n;
    rec.rule_satisfaction_pct_framework = framework / n;
    rec.mean_repair_attempts = attempts / n;
    rec.mean_verification_time = seconds / n;
    rec.explored_states = std::lround(states / n);
    out.push_back(std::move(rec));
  }
  return out;
}

nlohmann::json benchmark_to_json(const std::vector<BenchmarkRecord> & records,
                                 bool include_timing)
{
  auto list = nlohmann::json::array();
  for (const auto & r : records) {
    nlohmann::json j = {
        {"scenario_id", r.scenario_id},
        {"robots", r.robots},
        {"parts", r.parts},
        {"rules", r.rules},
        {"trials", r.trials},
        {"rule_satisfaction_pct_baseline", r.rule_satisfaction_pct_baseline},
        {"rule_satisfaction_pct_framework", r.rule_satisfaction_pct_framework},
        {"mean_repair_attempts", r.mean_repair_attempts},
        {"mean_verification_time", include_timing ? nlohmann::json(r.mean_verification_time)
                                                  : nlohmann::json(nullptr)},
        {"explored_states", r.explored_states},
        {"converged_trials", r.converged_trials},
        {"planted_unsafe_trials", r.planted_unsafe_trials},
        {"failures", r.failures},
    };
    if (auto ref = reference_figures(r.scenario_id)) {
      j["reference_figures"] = {{"binding", false},
                                {"rule_satisfaction_pct_baseline", ref->baseline_pct},
                                {"rule_satisfaction_pct_framework", ref->framework_pct},
                                {"mean_repair_attempts", ref->repair_attempts},
                                {"mean_verification_time", ref->verification_time_s},
                                {"explored_states", ref->explored_states}};
    }
    list.push_back(std::move(j));
  }
  return {{"records", list}};
}

std::string benchmark_to_csv(const std::vector<BenchmarkRecord> & records,
                             bool include_timing)
{
  std::ostringstream os;
  os << "scenario_id,robots,parts,rules,trials,rule_satisfaction_pct_baseline,"
        "rule_satisfaction_pct_framework,mean_repair_attempts,"
        "mean_verification_time,explored_states,converged_trials\n";
  for (const auto & r : records) {
    os << r.scenario_id << ',' << r.robots << ',' << r.parts << ',' << r.rules << ','
       << r.trials << ',' << fixed(r.rule_satisfaction_pct_baseline) << ','
       << fixed(r.rule_satisfaction_pct_framework) << ','
       << fixed(r.mean_repair_attempts) << ','
       << (include_timing ? fixed(r.mean_verification_time, 6) : std::string()) << ','
       << r.explored_states << ',' << r.converged_trials << '\n';
  }
  return os.str();
}

std::string format_benchmark(const std::vector<BenchmarkRecord> & records,
                             bool include_timing)
{
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %9s %10s %10s %9s %12s %10s\n", "scenario",
                "R/P/rules", "base sat%", "frame sat%", "attempts", "verif s", "states");
  os << line;
  for (const auto & r : records) {
    std::string shape = std::to_string(r.robots) + "/" + std::to_string(r.parts) + "/"
                        + std::to_string(r.rules);
    std::snprintf(line, sizeof line, "%-10s %9s %10.2f %10.2f %9.2f %12s %10ld\n",
                  r.scenario_id.c_str(), shape.c_str(), r.rule_satisfaction_pct_baseline,
                  r.rule_satisfaction_pct_framework, r.mean_repair_attempts,
                  include_timing ? fixed(r.mean_verification_time, 4).c_str() : "-",
                  r.explored_states);
    os << line;
  }
  bool any_ref = false;
  for (const auto & r : records) {
    auto ref = reference_figures(r.scenario_id);
    if (!ref) continue;
    if (!any_ref) {
      os << "\nreference figures (non-binding, obtained with a proprietary language model):\n";
      any_ref = true;
    }
    std::snprintf(line, sizeof line, "%-10s %9s %10.2f %10.2f %9.2f %12.2f %10ld\n",
                  r.scenario_id.c_str(), "", ref->baseline_pct, ref->framework_pct,
                  ref->repair_attempts, ref->verification_time_s, ref->explored_states);
    os << line;
  }
  for (const auto & r : records) {
    for (const auto & f : r.failures) os << r.scenario_id << ": " << f << "\n";
  }
  return os.str();
}

}  // namespace planverify
