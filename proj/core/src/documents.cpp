#include "planverify/documents.h"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "planverify/error.h"

namespace planverify {

using nlohmann::json;

namespace {

json yaml_to_json(const YAML::Node & node)
{
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Sequence: {
      json out = json::array();
      for (const auto & item : node) out.push_back(yaml_to_json(item));
      return out;
    }
    case YAML::NodeType::Map: {
      json out = json::object();
      for (const auto & kv : node) {
        out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      }
      return out;
    }
    case YAML::NodeType::Scalar: {
      const std::string & s = node.Scalar();
      // Quoted scalars stay strings.
      if (node.Tag() == "!") return s;
      if (s == "true" || s == "True") return true;
      if (s == "false" || s == "False") return false;
      if (s == "null" || s == "~") return nullptr;
      try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used == s.size()) return v;
      }
      catch (const std::exception &) {
      }
      try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
      }
      catch (const std::exception &) {
      }
      return s;
    }
  }
  return nullptr;
}

[[noreturn]] void schema_error(const std::string & what)
{
  throw Error(ErrorKind::SchemaError, what);
}

std::string get_string(const json & obj,
                       const char * key,
                       const std::string & context,
                       bool required = true)
{
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) schema_error(context + ": missing field '" + key + "'");
    return {};
  }
  if (!it->is_string()) {
    schema_error(context + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> get_string_list(const json & obj,
                                         const char * key,
                                         const std::string & context)
{
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) {
    schema_error(context + ": field '" + key + "' must be a list");
  }
  for (const auto & item : *it) {
    if (!item.is_string()) {
      schema_error(context + ": entries of '" + key + "' must be strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::optional<AtomicProposition> get_ap(const json & obj,
                                        const char * key,
                                        const std::string & context)
{
  auto text = get_string(obj, key, context, false);
  if (text.empty()) return std::nullopt;
  try {
    return AtomicProposition::parse(text);
  }
  catch (const Error & e) {
    throw Error(ErrorKind::MalformedAp, context + ": " + e.what());
  }
}

}  // namespace

json parse_document_text(std::string_view text, bool yaml)
{
  if (yaml) {
    try {
      return yaml_to_json(YAML::Load(std::string(text)));
    }
    catch (const YAML::Exception & e) {
      schema_error(std::string("invalid YAML: ") + e.what());
    }
  }
  try {
    return json::parse(text);
  }
  catch (const json::exception & e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
}

json load_document(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot read '" + path.string() + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto ext = path.extension().string();
  bool yaml = ext == ".yaml" || ext == ".yml";
  try {
    return parse_document_text(buffer.str(), yaml);
  }
  catch (const Error & e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string dump_json(const json & doc)
{
  return doc.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  }
  out << text;
}

TaskPlan parse_plan(const json & doc, const ResourceSet * resources)
{
  if (!doc.is_object()) schema_error("plan document must be an object");
  std::string plan_id = get_string(doc, "plan_id", "plan", false);
  std::string requirement =
      get_string(doc, "product_requirement", "plan", false);
  std::vector<Task> tasks;
  auto it = doc.find("tasks");
  if (it != doc.end() && !it->is_null()) {
    if (!it->is_array()) schema_error("plan: 'tasks' must be a list");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto & rec = (*it)[i];
      std::string ctx = "plan task #" + std::to_string(i);
      if (!rec.is_object()) schema_error(ctx + " must be an object");
      Task t;
      t.id = get_string(rec, "id", ctx);
      ctx = "plan task '" + t.id + "'";
      t.function = get_string(rec, "function", ctx);
      t.part = get_string(rec, "part", ctx, false);
      t.resource = get_string(rec, "resource_jid", ctx);
      t.process = get_string(rec, "process", ctx, false);
      t.source_context = get_string(rec, "source", ctx, false);
      t.dest_context = get_string(rec, "dest", ctx, false);
      t.predecessors = get_string_list(rec, "predecessors", ctx);
      tasks.push_back(std::move(t));
    }
  }
  return TaskPlan(std::move(plan_id), std::move(requirement), std::move(tasks),
                  resources);
}

json task_to_json(const Task & t)
{
  return json{{"id", t.id},
              {"function", t.function},
              {"part", t.part},
              {"resource_jid", t.resource},
              {"process", t.process},
              {"source", t.source_context},
              {"dest", t.dest_context},
              {"predecessors", t.predecessors}};
}

json plan_to_json(const TaskPlan & plan)
{
  json tasks = json::array();
  for (const auto & t : plan.tasks()) tasks.push_back(task_to_json(t));
  return json{{"plan_id", plan.plan_id()},
              {"product_requirement", plan.product_requirement()},
              {"tasks", tasks}};
}

ResourceSet parse_resources(const json & doc)
{
  const json * list = &doc;
  if (doc.is_object()) {
    auto it = doc.find("resources");
    if (it == doc.end()) schema_error("resources: missing 'resources'");
    list = &*it;
  }
  if (!list->is_array()) schema_error("resources: expected a list");
  ResourceSet out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto & rec = (*list)[i];
    std::string ctx = "resource #" + std::to_string(i);
    if (!rec.is_object()) schema_error(ctx + " must be an object");
    Resource r;
    r.id = get_string(rec, "id", ctx);
    auto caps = get_string_list(rec, "capabilities", ctx);
    r.capabilities.insert(caps.begin(), caps.end());
    r.label = get_string(rec, "label", ctx, false);
    if (!out.resources.emplace(r.id, r).second) {
      schema_error("duplicate resource id '" + r.id + "'");
    }
  }
  return out;
}

json resources_to_json(const ResourceSet & resources)
{
  json list = json::array();
  for (const auto & [id, r] : resources.resources) {
    list.push_back(json{{"id", r.id},
                        {"capabilities", std::vector<std::string>(
                                             r.capabilities.begin(),
                                             r.capabilities.end())},
                        {"label", r.label}});
  }
  return json{{"resources", list}};
}

std::vector<StructuredConstraint> parse_constraints(const json & doc)
{
  const json * list = &doc;
  if (doc.is_object()) {
    auto it = doc.find("constraints");
    if (it == doc.end()) schema_error("constraints: missing 'constraints'");
    list = &*it;
  }
  if (list->is_null()) return {};
  if (!list->is_array()) schema_error("constraints: expected a list");
  std::vector<StructuredConstraint> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto & rec = (*list)[i];
    std::string ctx = "constraint #" + std::to_string(i);
    if (!rec.is_object()) schema_error(ctx + " must be an object");
    StructuredConstraint c;
    c.id = get_string(rec, "id", ctx, false);
    if (c.id.empty()) c.id = "c" + std::to_string(i + 1);
    ctx = "constraint '" + c.id + "'";
    c.type = parse_constraint_type(get_string(rec, "type", ctx));
    c.first = get_ap(rec, "first", ctx);
    c.second = get_ap(rec, "second", ctx);
    c.raw = get_string(rec, "raw", ctx, false);
    c.source_text = get_string(rec, "source_text", ctx, false);
    if (auto b = rec.find("bindings"); b != rec.end() && !b->is_null()) {
      if (!b->is_object()) schema_error(ctx + ": 'bindings' must be a map");
      for (const auto & [name, value] : b->items()) {
        if (!value.is_string()) {
          schema_error(ctx + ": binding '" + name + "' must be a string");
        }
        c.bindings.emplace(name, AtomicProposition::parse(value.get<std::string>()));
      }
    }
    if (c.type != ConstraintType::raw_ltlf && (!c.first || !c.second)) {
      schema_error(ctx + ": " + to_string(c.type)
                   + " constraints need 'first' and 'second'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

json constraint_to_json(const StructuredConstraint & c)
{
  json out{{"id", c.id}, {"type", to_string(c.type)}};
  if (c.first) out["first"] = c.first->to_string();
  if (c.second) out["second"] = c.second->to_string();
  if (!c.raw.empty()) out["raw"] = c.raw;
  if (!c.bindings.empty()) {
    json b = json::object();
    for (const auto & [name, ap] : c.bindings) b[name] = ap.to_string();
    out["bindings"] = b;
  }
  out["source_text"] = c.source_text;
  return out;
}

json constraints_to_json(const std::vector<StructuredConstraint> & constraints)
{
  json list = json::array();
  for (const auto & c : constraints) list.push_back(constraint_to_json(c));
  return json{{"constraints", list}};
}

json violation_to_json(const Violation & v)
{
  return json{{"constraint_id", v.constraint_id},
              {"kind", to_string(v.kind)},
              {"witness_events", v.witness_labels()},
              {"message", v.message}};
}

json report_to_json(const VerificationReport & report,
                    const ReportJsonOptions & options)
{
  json violations = json::array();
  for (const auto & v : report.violations) {
    violations.push_back(violation_to_json(v));
  }
  json explored = json::object();
  for (const auto & [id, n] : report.explored_states) explored[id] = n;
  json out{{"verdict", to_string(report.verdict)},
           {"violations", violations},
           {"explored_states", explored}};
  if (!report.inconclusive_constraints.empty()) {
    out["inconclusive_constraints"] = report.inconclusive_constraints;
  }
  if (!report.warnings.empty()) out["warnings"] = report.warnings;
  if (options.include_timing) {
    out["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(report.wall_time).count();
  } else {
    out["wall_time_ms"] = nullptr;
  }
  return out;
}

std::string format_report(const VerificationReport & report, bool include_timing)
{
  std::ostringstream os;
  os << "verdict: " << to_string(report.verdict) << "\n";
  for (const auto & [id, n] : report.explored_states) {
    os << "  " << id << ": " << n << " product states explored\n";
  }
  for (const auto & id : report.inconclusive_constraints) {
    os << "  " << id << ": state budget exceeded (inconclusive)\n";
  }
  for (const auto & w : report.warnings) os << "warning: " << w << "\n";
  for (const auto & v : report.violations) {
    os << "violation [" << to_string(v.kind) << "] " << v.message << "\n";
    if (!v.constraint_text.empty()) {
      os << "  requirement: " << v.constraint_text << "\n";
    }
    os << "  formula: " << v.formula.to_string() << "\n";
    os << "  witness_events = [";
    auto labels = v.witness_labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) os << ", ";
      os << labels[i];
    }
    os << "]\n";
  }
  if (include_timing) {
    os << "wall time: "
       << std::chrono::duration<double, std::milli>(report.wall_time).count()
       << " ms\n";
  }
  return os.str();
}

}  // namespace planverify
