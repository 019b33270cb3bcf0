#include "cli.h"

#include <algorithm>
#include <limits>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "planverify/documents.h"
#include "planverify/feedback.h"
#include "planverify/llm.h"
#include "planverify/safety_automaton.h"
#include "planverify/scenarios.h"
#include "planverify/verifier.h"

namespace planverify {

namespace fs = std::filesystem;

namespace {

const CLI::Range kAtLeastOne(1, std::numeric_limits<int>::max());

struct VerifyArgs
{
  std::string plan_file;
  std::string constraints_file;
  std::string resources_file;
  bool json = false;
  bool all_witnesses = false;
  std::size_t state_budget = VerifyOptions{}.state_budget;
  std::string dot_dir;
  bool timing = false;
  unsigned jobs = 1;
  bool explicit_automata = false;
};

struct RepairArgs
{
  VerifyArgs base;
  std::string planner = "deterministic";
  int max_attempts = 5;
  std::string out_file;
  std::string history_file;
  bool multi_violation = false;
};

struct CompileArgs
{
  std::string constraints_file;
  std::string out_dir = ".";
};

struct BenchArgs
{
  std::string spec_file;
  bool canonical = false;
  int trials = 20;
  int max_attempts = 5;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string csv_file;
  std::string json_file;
  bool json = false;
  bool timing = false;
  std::string planner = "deterministic";
  std::size_t state_budget = VerifyOptions{}.state_budget;
};

struct GenerateArgs
{
  int robots = 2;
  int parts = 3;
  int ordering_rules = 1;
  int mutex_rules = 1;
  std::uint64_t seed = 0;
  bool safe = false;
  std::string out_dir = ".";
};

struct TranslateArgs
{
  std::vector<std::string> requirements;
  std::string plan_file;
  std::string translator = "rule";
};

std::optional<ResourceSet> load_resources(const std::string & file)
{
  if (file.empty()) return std::nullopt;
  return parse_resources(load_document(file));
}

std::vector<CheckedConstraint> load_constraints(const std::string & file)
{
  return translate_all(parse_constraints(load_document(file)));
}

VerifyOptions verify_options(const VerifyArgs & a)
{
  VerifyOptions o;
  o.state_budget = a.state_budget;
  o.all_witnesses = a.all_witnesses;
  o.jobs = a.jobs;
  o.explicit_automata = a.explicit_automata;
  return o;
}

void write_dots(const std::vector<CheckedConstraint> & constraints,
                const fs::path & dir,
                std::ostream & err)
{
  fs::create_directories(dir);
  for (const auto & c : constraints) {
    try {
      auto a = compile_safety_automaton(c.formula, propositions(c.formula), c.constraint.id);
      write_text_file(dir / (c.constraint.id + ".dot"), to_dot(a));
    }
    catch (const Error & e) {
      if (e.kind() != ErrorKind::AlphabetTooLarge) throw;
      err << "warning: no DOT for '" << c.constraint.id << "': " << e.what() << "\n";
    }
  }
}

int verdict_exit(Verdict v)
{
  switch (v) {
    case Verdict::safe: return 0;
    case Verdict::unsafe: return 1;
    case Verdict::inconclusive: return 2;
  }
  return 2;
}

int cmd_compile(const CompileArgs & a, std::ostream & out, std::ostream &)
{
  auto constraints = load_constraints(a.constraints_file);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  std::vector<SafetyAutomaton> automata;
  for (const auto & c : constraints) {
    automata.push_back(
        compile_safety_automaton(c.formula, propositions(c.formula), c.constraint.id));
    write_text_file(dir / (c.constraint.id + ".ltlf"), c.formula.to_string() + "\n");
    write_text_file(dir / (c.constraint.id + ".dot"), to_dot(automata.back()));
  }
  write_text_file(dir / "review.md", review_report(constraints, automata));
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    out << constraints[i].constraint.id << ": " << constraints[i].formula.to_string()
        << " (" << automata[i].state_count() << " states)\n";
  }
  out << "compiled " << constraints.size() << " constraint(s) into " << dir.string() << "\n";
  return 0;
}

int cmd_verify(const VerifyArgs & a, std::ostream & out, std::ostream & err)
{
  auto resources = load_resources(a.resources_file);
  TaskPlan plan = parse_plan(load_document(a.plan_file), resources ? &*resources : nullptr);
  auto constraints = load_constraints(a.constraints_file);
  if (!a.dot_dir.empty()) write_dots(constraints, a.dot_dir, err);

  auto report = validate_safety(PlanAutomaton(plan), constraints, verify_options(a));
  if (a.json) {
    out << dump_json(report_to_json(report, {a.timing}));
  }
  else {
    out << format_report(report, a.timing);
  }
  return verdict_exit(report.verdict);
}

nlohmann::json prompt_to_json(const FeedbackPrompt & p)
{
  return {{"system_instructions", p.system_instructions},
          {"unsafe_plan", p.unsafe_plan},
          {"safety_violation", p.safety_violation},
          {"violation_trace", p.violation_trace},
          {"execution_context", p.execution_context.render()},
          {"output_schema", p.output_schema}};
}

nlohmann::json history_to_json(const RepairOutcome & o, bool timing)
{
  auto list = nlohmann::json::array();
  for (std::size_t i = 0; i < o.history.size(); ++i) {
    const auto & h = o.history[i];
    nlohmann::json j = {{"attempt", i + 1},
                        {"plan", plan_to_json(h.plan)},
                        {"report", report_to_json(h.report, {timing})},
                        {"prompt", prompt_to_json(h.prompt)}};
    j["planner_error"] = h.planner_error.empty() ? nlohmann::json(nullptr)
                                                 : nlohmann::json(h.planner_error);
    list.push_back(std::move(j));
  }
  return list;
}

std::unique_ptr<Planner> make_planner(const std::string & kind)
{
  if (kind == "llm") return std::make_unique<LlmPlanner>(ChatClient(ChatConfig::from_env()));
  return std::make_unique<DeterministicPlanner>();
}

int cmd_repair(const RepairArgs & a, std::ostream & out, std::ostream & err)
{
  auto planner = make_planner(a.planner);
  auto resources = load_resources(a.base.resources_file);
  const ResourceSet * rs = resources ? &*resources : nullptr;
  TaskPlan plan = parse_plan(load_document(a.base.plan_file), rs);
  auto constraints = load_constraints(a.base.constraints_file);

  RepairOptions opts;
  opts.max_attempts = a.max_attempts;
  opts.verify = verify_options(a.base);
  opts.multi_violation_prompt = a.multi_violation;
  RepairOutcome o = repair_loop(plan, constraints, *planner, opts, rs);

  if (!a.out_file.empty()) write_text_file(a.out_file, dump_json(plan_to_json(o.final_plan)));
  if (!a.history_file.empty()) {
    write_text_file(a.history_file, dump_json(history_to_json(o, a.base.timing)));
  }
  if (!a.base.dot_dir.empty()) write_dots(constraints, a.base.dot_dir, err);

  if (a.base.json) {
    nlohmann::json j = {{"converged", o.converged},
                        {"attempts", o.attempts},
                        {"verifications", o.verifications},
                        {"stop_reason", o.stop_reason},
                        {"planner", planner->name()},
                        {"final_plan", plan_to_json(o.final_plan)},
                        {"final_report", report_to_json(o.final_report, {a.base.timing})},
                        {"history", history_to_json(o, a.base.timing)}};
    out << dump_json(j);
  }
  else {
    out << (o.converged ? "converged" : "not converged") << " after " << o.attempts
        << " repair attempt(s) (" << o.stop_reason << ")\n";
    for (std::size_t i = 0; i < o.history.size(); ++i) {
      const auto & h = o.history[i];
      out << "\nattempt " << i + 1 << ":\n";
      std::string violation = h.prompt.safety_violation;
      for (std::size_t pos = 0; (pos = violation.find('\n', pos)) != std::string::npos; pos += 5) {
        violation.replace(pos, 1, "\n    ");
      }
      out << "  violation: " << violation << "\n";
      out << "  trace: " << h.prompt.violation_trace << "\n";
      if (!h.planner_error.empty()) out << "  planner error: " << h.planner_error << "\n";
    }
    out << "\nfinal plan edges:\n";
    for (const auto & [from, to] : o.final_plan.edges()) out << "  " << from << " -> " << to << "\n";
    out << "\n" << format_report(o.final_report, a.base.timing);
  }
  if (o.final_report.verdict == Verdict::inconclusive && o.final_report.violations.empty()) {
    return 2;
  }
  return o.converged ? 0 : 1;
}

int cmd_bench(const BenchArgs & a, std::ostream & out, std::ostream &)
{
  std::vector<ScenarioSpec> specs;
  if (a.canonical) {
    specs = canonical_specs(a.seed);
  }
  else {
    if (a.spec_file.empty()) {
      throw Error(ErrorKind::ConfigError, "bench needs a spec file or --canonical");
    }
    specs = parse_scenario_specs(load_document(a.spec_file));
    if (a.seed_given) {
      for (auto & s : specs) s.seed = a.seed;
    }
  }
  for (const auto & s : specs) {
    // Surfaces InfeasibleSpec before any trial runs.
    generate_scenario(s);
  }
  auto planner = make_planner(a.planner);
  BenchmarkOptions opts;
  opts.trials = a.trials;
  opts.max_attempts = a.max_attempts;
  opts.verify.state_budget = a.state_budget;
  auto records = run_benchmark(specs, *planner, opts);

  if (!a.csv_file.empty()) write_text_file(a.csv_file, benchmark_to_csv(records, a.timing));
  if (!a.json_file.empty()) {
    write_text_file(a.json_file, dump_json(benchmark_to_json(records, a.timing)));
  }
  if (a.json) {
    out << dump_json(benchmark_to_json(records, a.timing));
  }
  else {
    out << format_benchmark(records, a.timing);
  }
  return 0;
}

int cmd_generate(const GenerateArgs & a, std::ostream & out, std::ostream &)
{
  ScenarioSpec spec{"generated", a.robots, a.parts, a.ordering_rules, a.mutex_rules, a.seed,
                    !a.safe};
  Scenario sc = generate_scenario(spec);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_text_file(dir / "plan.json", dump_json(plan_to_json(sc.plan)));
  write_text_file(dir / "resources.json", dump_json(resources_to_json(sc.resources)));
  write_text_file(dir / "constraints.json", dump_json(constraints_to_json(sc.constraints)));
  out << "wrote " << sc.plan.size() << " tasks, " << sc.resources.resources.size()
      << " robots and " << sc.constraints.size() << " constraints to " << dir.string() << "\n";
  return 0;
}

int cmd_translate(const TranslateArgs & a, std::ostream & out, std::ostream &)
{
  std::optional<TaskPlan> plan;
  if (!a.plan_file.empty()) plan = parse_plan(load_document(a.plan_file));
  const TaskPlan * p = plan ? &*plan : nullptr;
  std::unique_ptr<RequirementTranslator> tr;
  if (a.translator == "llm") {
    tr = std::make_unique<LlmTranslator>(ChatClient(ChatConfig::from_env()), p);
  }
  else {
    tr = std::make_unique<RuleBasedTranslator>(p);
  }
  std::vector<StructuredConstraint> cs;
  for (std::size_t i = 0; i < a.requirements.size(); ++i) {
    cs.push_back(tr->translate(a.requirements[i], "c" + std::to_string(i + 1)));
  }
  // Round-trip through the formula builder so bad output fails here.
  translate_all(cs);
  out << dump_json(constraints_to_json(cs));
  return 0;
}

void add_verify_flags(CLI::App & cmd, VerifyArgs & a)
{
  cmd.add_option("plan", a.plan_file, "Task plan (JSON or YAML)")->required();
  cmd.add_option("constraints", a.constraints_file, "Constraint file")->required();
  cmd.add_option("--resources", a.resources_file, "Resource file");
  cmd.add_flag("--json", a.json, "Machine-readable output");
  cmd.add_flag("--all-witnesses", a.all_witnesses, "Collect every distinct witness");
  cmd.add_option("--state-budget", a.state_budget, "Product states per constraint")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--dot-dir", a.dot_dir, "Write one DOT automaton per constraint");
  cmd.add_flag("--timing", a.timing, "Include wall-clock times");
  cmd.add_option("--jobs", a.jobs, "Constraints checked in parallel")->check(CLI::PositiveNumber);
  cmd.add_flag("--explicit", a.explicit_automata, "Step precompiled automata");
}

}  // namespace

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Pre-execution safety verification and repair of multi-robot task plans",
               "planverify"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "planverify 0.1.0");

  CompileArgs compile_args;
  auto * compile = app.add_subcommand("compile", "Compile constraints to LTLf and automata");
  compile->add_option("constraints", compile_args.constraints_file, "Constraint file")->required();
  compile->add_option("--out-dir,-o", compile_args.out_dir, "Output directory");

  VerifyArgs verify_args;
  auto * verify = app.add_subcommand("verify", "Verify a task plan against constraints");
  add_verify_flags(*verify, verify_args);

  RepairArgs repair_args;
  auto * repair = app.add_subcommand("repair", "Run the verify and repair loop");
  add_verify_flags(*repair, repair_args.base);
  repair->add_option("--planner", repair_args.planner, "deterministic or llm")
      ->check(CLI::IsMember({"deterministic", "llm"}));
  repair->add_option("--max-attempts", repair_args.max_attempts, "Planner calls allowed")
      ->check(kAtLeastOne);
  repair->add_option("--out", repair_args.out_file, "Write the final plan here");
  repair->add_option("--history", repair_args.history_file, "Write the attempt history here");
  repair->add_flag("--multi-violation", repair_args.multi_violation,
                   "Report every violation in each prompt");

  BenchArgs bench_args;
  auto * bench = app.add_subcommand("bench", "Run the scenario benchmark");
  bench->add_option("spec", bench_args.spec_file, "Scenario spec file");
  bench->add_flag("--canonical", bench_args.canonical, "Use the built-in S1/S2/S3 specs");
  bench->add_option("--trials", bench_args.trials, "Trials per scenario")->check(kAtLeastOne);
  bench->add_option("--max-attempts", bench_args.max_attempts, "Planner calls per trial")
      ->check(kAtLeastOne);
  auto * seed_opt = bench->add_option("--seed", bench_args.seed, "Base seed (overrides the file)");
  bench->add_option("--csv", bench_args.csv_file, "Write CSV here");
  bench->add_option("--json-out", bench_args.json_file, "Write JSON here");
  bench->add_flag("--json", bench_args.json, "Print JSON instead of a table");
  bench->add_flag("--timing", bench_args.timing, "Include verification times");
  bench->add_option("--planner", bench_args.planner, "deterministic or llm")
      ->check(CLI::IsMember({"deterministic", "llm"}));
  bench->add_option("--state-budget", bench_args.state_budget, "Product states per constraint")
      ->check(CLI::PositiveNumber);

  GenerateArgs gen_args;
  auto * generate = app.add_subcommand("generate", "Write a generated scenario to disk");
  generate->add_option("--robots", gen_args.robots)->check(CLI::PositiveNumber);
  generate->add_option("--parts", gen_args.parts)->check(CLI::PositiveNumber);
  generate->add_option("--ordering-rules", gen_args.ordering_rules)->check(CLI::NonNegativeNumber);
  generate->add_option("--mutex-rules", gen_args.mutex_rules)->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen_args.seed);
  generate->add_flag("--safe", gen_args.safe, "Pre-add the edges that satisfy every rule");
  generate->add_option("--out-dir,-o", gen_args.out_dir, "Output directory");

  TranslateArgs tr_args;
  auto * translate = app.add_subcommand("translate", "Turn requirement sentences into constraints");
  translate->add_option("requirements", tr_args.requirements, "Requirement sentences")->required();
  translate->add_option("--plan", tr_args.plan_file, "Resolve task ids against this plan");
  translate->add_option("--translator", tr_args.translator, "rule or llm")
      ->check(CLI::IsMember({"rule", "llm"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  }
  catch (const CLI::ParseError & e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*compile) return cmd_compile(compile_args, out, err);
    if (*verify) return cmd_verify(verify_args, out, err);
    if (*repair) return cmd_repair(repair_args, out, err);
    if (*bench) {
      bench_args.seed_given = seed_opt->count() > 0;
      return cmd_bench(bench_args, out, err);
    }
    if (*generate) return cmd_generate(gen_args, out, err);
    if (*translate) return cmd_translate(tr_args, out, err);
  }
  catch (const Error & e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  }
  catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace planverify
