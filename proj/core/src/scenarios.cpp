#include "planverify/scenarios.h"

#include <algorithm>
#include <random>

namespace planverify {

namespace {

const std::vector<std::string> kPartNames = {"SG", "MCP", "BASE", "LID", "GEAR", "SHAFT"};
const std::vector<std::string> kRobotNames = {"xarm6", "ur5e", "ur10e", "panda"};
const std::vector<std::string> kPrinters = {"prusa-mk3", "prusa-mini", "ender-3", "bambu-x1"};
const std::string kBoard = "assembly_board";
const std::string kProcess = "assemble";

std::string part_name(int k)
{
  return k < static_cast<int>(kPartNames.size()) ? kPartNames[k]
                                                 : "PART" + std::to_string(k);
}

std::string robot_name(int k)
{
  return k < static_cast<int>(kRobotNames.size()) ? kRobotNames[k]
                                                  : "robot" + std::to_string(k);
}

// Modulo draws keep sequences identical across standard libraries.
template <class T>
void shuffle(std::vector<T> & v, std::mt19937_64 & rng)
{
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng() % i]);
  }
}

AtomicProposition task_ap(const Task & t, EventKind kind)
{
  return AtomicProposition(t.process, t.part, t.resource,
                           EventDescriptor{kind, t.function}, t.context());
}

}  // namespace

Scenario generate_scenario(const ScenarioSpec & spec)
{
  if (spec.robots < 1 || spec.parts < 1) {
    throw Error(ErrorKind::InfeasibleSpec, "scenario needs at least one robot and one part");
  }
  if (spec.ordering_rules < 0 || spec.mutex_rules < 0) {
    throw Error(ErrorKind::InfeasibleSpec, "rule counts must be non-negative");
  }
  const long pairs = static_cast<long>(spec.parts) * (spec.parts - 1) / 2;
  if (spec.ordering_rules > pairs) {
    throw Error(ErrorKind::InfeasibleSpec,
                std::to_string(spec.ordering_rules) + " ordering rules requested but only "
                    + std::to_string(pairs) + " part pairs exist");
  }
  if (spec.mutex_rules > pairs) {
    throw Error(ErrorKind::InfeasibleSpec,
                std::to_string(spec.mutex_rules) + " mutual-exclusion rules requested but only "
                    + std::to_string(pairs) + " part pairs exist");
  }

  std::mt19937_64 rng(spec.seed);
  Scenario sc;
  sc.spec = spec;

  for (int r = 0; r < spec.robots; ++r) {
    Resource res{robot_name(r), {"pick_part", "move_loaded", "place_part"}, "robot arm"};
    sc.resources.resources.emplace(res.id, res);
  }

  std::vector<int> order(spec.parts);
  for (int p = 0; p < spec.parts; ++p) order[p] = p;
  shuffle(order, rng);
  std::vector<std::string> robot_of(spec.parts);
  for (int i = 0; i < spec.parts; ++i) robot_of[order[i]] = robot_name(i % spec.robots);

  std::vector<Task> tasks;
  for (int p = 0; p < spec.parts; ++p) {
    const std::string part = part_name(p);
    const std::string printer = kPrinters[rng() % kPrinters.size()];
    Task pick{part + "_PICK", "pick_part", part, robot_of[p], kProcess, printer, printer, {}};
    Task move{part + "_MOVE", "move_loaded", part, robot_of[p], kProcess, printer, kBoard, {pick.id}};
    Task place{part + "_PLACE", "place_part", part, robot_of[p], kProcess, kBoard, kBoard, {move.id}};
    tasks.push_back(pick);
    tasks.push_back(move);
    tasks.push_back(place);
  }

  // rank decides which part of a related pair comes first.
  std::vector<int> rank(spec.parts);
  {
    std::vector<int> perm = order;
    shuffle(perm, rng);
    for (int i = 0; i < spec.parts; ++i) rank[perm[i]] = i;
  }
  auto oriented = [&](std::pair<int, int> pr) {
    return rank[pr.first] < rank[pr.second] ? pr : std::pair{pr.second, pr.first};
  };
  std::vector<std::pair<int, int>> all_pairs;
  for (int a = 0; a < spec.parts; ++a) {
    for (int b = a + 1; b < spec.parts; ++b) all_pairs.emplace_back(a, b);
  }

  auto ordering_pairs = all_pairs;
  shuffle(ordering_pairs, rng);
  ordering_pairs.resize(spec.ordering_rules);

  // Place pairs on distinct robots can actually overlap; prefer them.
  auto mutex_pairs = all_pairs;
  shuffle(mutex_pairs, rng);
  std::stable_partition(mutex_pairs.begin(), mutex_pairs.end(), [&](auto pr) {
    return robot_of[pr.first] != robot_of[pr.second];
  });
  mutex_pairs.resize(spec.mutex_rules);

  TaskPlan raw("scenario-" + (spec.id.empty() ? std::string("custom") : spec.id) + "-"
                   + std::to_string(spec.seed),
               "assemble " + std::to_string(spec.parts) + " printed parts", tasks,
               &sc.resources);

  int next_id = 1;
  std::vector<std::pair<std::string, std::string>> safe_edges;
  for (auto pr : ordering_pairs) {
    auto [a, b] = oriented(pr);
    const Task & ta = raw.task(part_name(a) + "_MOVE");
    const Task & tb = raw.task(part_name(b) + "_MOVE");
    StructuredConstraint c;
    c.id = "r" + std::to_string(next_id++);
    c.type = ConstraintType::ordering;
    c.first = task_ap(ta, EventKind::start);
    c.second = task_ap(tb, EventKind::start);
    c.source_text = ta.id + " must occur before " + tb.id + ".";
    sc.constraints.push_back(std::move(c));
    safe_edges.emplace_back(ta.id, tb.id);
    sc.planted_unsafe = true;
  }
  for (auto pr : mutex_pairs) {
    auto [a, b] = oriented(pr);
    const Task & ta = raw.task(part_name(a) + "_PLACE");
    const Task & tb = raw.task(part_name(b) + "_PLACE");
    StructuredConstraint c;
    c.id = "r" + std::to_string(next_id++);
    c.type = ConstraintType::mutual_exclusion;
    c.first = task_ap(ta, EventKind::executing);
    c.second = task_ap(tb, EventKind::executing);
    c.source_text = ta.id + " and " + tb.id + " must not occur simultaneously.";
    sc.constraints.push_back(std::move(c));
    safe_edges.emplace_back(ta.id, tb.id);
    if (ta.resource != tb.resource) sc.planted_unsafe = true;
  }

  if (spec.planted) {
    sc.plan = std::move(raw);
  }
  else {
    // Edges follow rank, so they cannot close a cycle.
    for (const auto & [from, to] : safe_edges) raw = raw.with_edge(from, to);
    sc.plan = std::move(raw);
    sc.planted_unsafe = false;
  }
  return sc;
}

std::vector<ScenarioSpec> canonical_specs(std::uint64_t seed)
{
  return {{"S1", 2, 3, 1, 1, seed, true},
          {"S2", 3, 4, 2, 1, seed, true},
          {"S3", 4, 6, 2, 2, seed, true}};
}

std::vector<ScenarioSpec> parse_scenario_specs(const nlohmann::json & doc)
{
  const nlohmann::json * list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("scenarios")) {
      throw Error(ErrorKind::SchemaError, "benchmark spec needs a 'scenarios' list");
    }
    list = &doc["scenarios"];
  }
  if (!list->is_array()) {
    throw Error(ErrorKind::SchemaError, "'scenarios' must be a list");
  }
  std::vector<ScenarioSpec> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto & rec = (*list)[i];
    if (!rec.is_object()) throw Error(ErrorKind::SchemaError, "scenario entry must be a mapping");
    auto integer = [&](const char * key, std::optional<long> fallback) -> long {
      if (!rec.contains(key)) {
        if (fallback) return *fallback;
        throw Error(ErrorKind::SchemaError,
                    "scenario " + std::to_string(i) + " is missing '" + key + "'");
      }
      if (!rec[key].is_number_integer()) {
        throw Error(ErrorKind::SchemaError, std::string("'") + key + "' must be an integer");
      }
      return rec[key].get<long>();
    };
    ScenarioSpec s;
    s.id = rec.contains("id") ? rec["id"].get<std::string>() : "scenario" + std::to_string(i + 1);
    s.robots = static_cast<int>(integer("robots", std::nullopt));
    s.parts = static_cast<int>(integer("parts", std::nullopt));
    s.ordering_rules = static_cast<int>(integer("ordering_rules", 0));
    s.mutex_rules = static_cast<int>(integer("mutex_rules", 0));
    long seed = integer("seed", 0);
    if (seed < 0) throw Error(ErrorKind::SchemaError, "'seed' must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
    if (rec.contains("planted")) {
      if (!rec["planted"].is_boolean()) throw Error(ErrorKind::SchemaError, "'planted' must be a boolean");
      s.planted = rec["planted"].get<bool>();
    }
    if (rec.contains("rules") && integer("rules", 0) != s.rules()) {
      throw Error(ErrorKind::InfeasibleSpec,
                  "scenario '" + s.id + "': rules must equal ordering_rules + mutex_rules");
    }
    if (s.robots < 1 || s.parts < 1 || s.ordering_rules < 0 || s.mutex_rules < 0) {
      throw Error(ErrorKind::InfeasibleSpec,
                  "scenario '" + s.id + "' needs robots, parts >= 1 and non-negative rule counts");
    }
    out.push_back(s);
  }
  return out;
}

nlohmann::json scenario_spec_to_json(const ScenarioSpec & s)
{
  return {{"id", s.id},
          {"robots", s.robots},
          {"parts", s.parts},
          {"rules", s.rules()},
          {"ordering_rules", s.ordering_rules},
          {"mutex_rules", s.mutex_rules},
          {"seed", s.seed},
          {"planted", s.planted}};
}

std::optional<ReferenceFigures> reference_figures(const std::string & id)
{
  if (id == "S1") return ReferenceFigures{50.0, 92.5, 1.8, 0.10, 170};
  if (id == "S2") return ReferenceFigures{75.93, 91.67, 2.2, 1.53, 1378};
  if (id == "S3") return ReferenceFigures{50.0, 86.25, 3.9, 25.46, 14618};
  return std::nullopt;
}

}  // namespace planverify
