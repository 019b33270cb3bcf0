#include <algorithm>
#include <cctype>
#include <regex>

#include "planverify/documents.h"
#include "planverify/llm.h"

namespace planverify {

namespace {

std::string trim_name(std::string s)
{
  auto junk = [](unsigned char c) {
    return std::isspace(c) || c == '.' || c == '"' || c == '\'' || c == '`';
  };
  while (!s.empty() && junk(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && junk(s[i])) ++i;
  return s.substr(i);
}

bool iequals(std::string_view a, std::string_view b)
{
  return a.size() == b.size()
         && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
              return std::tolower(static_cast<unsigned char>(x))
                     == std::tolower(static_cast<unsigned char>(y));
            });
}

// A task id, a full proposition, or a bare event name.
AtomicProposition resolve_name(const std::string & name,
                               EventKind kind,
                               const TaskPlan * plan)
{
  if (name.starts_with("ap/") || name.starts_with("AP/")) return parse_ap(name);
  if (plan) {
    for (const auto & t : plan->tasks()) {
      if (iequals(t.id, name)) {
        return AtomicProposition(t.process.empty() ? "*" : t.process,
                                 t.part.empty() ? "*" : t.part,
                                 t.resource.empty() ? "*" : t.resource,
                                 EventDescriptor{kind, t.function},
                                 t.context().empty() ? "*" : t.context());
      }
    }
  }
  if (name.empty() || name.find_first_of("/ \t") != std::string::npos) {
    throw Error(ErrorKind::UnrecognizedRequirement,
                "cannot turn '" + name + "' into an atomic proposition");
  }
  std::string w(kWildcard);
  return AtomicProposition(w, w, w, EventDescriptor{kind, name}, w);
}

}  // namespace

StructuredConstraint RuleBasedTranslator::translate(const std::string & text,
                                                    const std::string & id)
{
  static const std::regex ordering(
      R"(^\s*(.+?)\s+must\s+(?:occur|happen|start|be\s+performed)\s+before\s+(.+?)\s*$)",
      std::regex::icase);
  static const std::regex mutex(
      R"(^\s*(.+?)\s+and\s+(.+?)\s+must\s+not\s+(?:occur|happen|run|execute)\s+(?:simultaneously|at\s+the\s+same\s+time|concurrently)\s*\.?\s*$)",
      std::regex::icase);

  StructuredConstraint c;
  c.id = id;
  c.source_text = text;
  std::smatch m;
  if (std::regex_match(text, m, mutex)) {
    c.type = ConstraintType::mutual_exclusion;
    c.first = resolve_name(trim_name(m[1].str()), EventKind::executing, plan_);
    c.second = resolve_name(trim_name(m[2].str()), EventKind::executing, plan_);
    return c;
  }
  if (std::regex_match(text, m, ordering)) {
    c.type = ConstraintType::ordering;
    c.first = resolve_name(trim_name(m[1].str()), EventKind::start, plan_);
    c.second = resolve_name(trim_name(m[2].str()), EventKind::start, plan_);
    return c;
  }
  throw Error(ErrorKind::UnrecognizedRequirement,
              "no rule recognizes requirement '" + text + "'");
}

namespace {

const char * kTranslatorInstructions =
    "Translate one natural-language safety requirement for a manufacturing "
    "task plan into a structured constraint. Atomic propositions have the "
    "form ap/process/product/resource/event/context where event is "
    "start(f), done(f) or executing(f) and * is a wildcard; a task id from "
    "the plan may be used instead. Reply with one JSON object and nothing "
    "else: {\"type\": \"ordering\", \"first\": A, \"second\": B} when A must "
    "occur before B; {\"type\": \"mutual_exclusion\", \"first\": C, "
    "\"second\": D} when C and D must never hold together; {\"type\": "
    "\"raw_ltlf\", \"raw\": formula} for anything else expressible in LTLf "
    "over quoted propositions; {\"type\": \"unrecognized\"} otherwise.";

}  // namespace

StructuredConstraint LlmTranslator::translate(const std::string & text,
                                              const std::string & id)
{
  std::string user = "Requirement: " + text + "\n";
  if (plan_) {
    user += "Plan tasks:\n";
    for (const auto & t : plan_->tasks()) user += task_to_json(t).dump() + "\n";
  }
  return parse_translation_reply(client_.complete(kTranslatorInstructions, user),
                                 id, text, plan_);
}

StructuredConstraint parse_translation_reply(std::string_view content,
                                             const std::string & id,
                                             const std::string & text,
                                             const TaskPlan * plan)
{
  auto doc = parse_reply_object(content);
  if (!doc.contains("type") || !doc["type"].is_string()) {
    throw Error(ErrorKind::SchemaError, "translation reply has no string 'type'");
  }
  const auto type = doc["type"].get<std::string>();
  if (type == "unrecognized") {
    throw Error(ErrorKind::UnrecognizedRequirement,
                "endpoint could not translate '" + text + "'");
  }
  StructuredConstraint c;
  c.id = id;
  c.source_text = text;
  try {
    c.type = parse_constraint_type(type);
  }
  catch (const Error & e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
  auto field = [&](const char * name) -> std::string {
    if (!doc.contains(name) || !doc[name].is_string()) {
      throw Error(ErrorKind::SchemaError,
                  std::string("translation reply is missing string '") + name + "'");
    }
    return doc[name].get<std::string>();
  };
  try {
    if (c.type == ConstraintType::raw_ltlf) {
      c.raw = field("raw");
      translate_structured(c);
    }
    else {
      auto kind = c.type == ConstraintType::ordering ? EventKind::start
                                                     : EventKind::executing;
      c.first = resolve_name(field("first"), kind, plan);
      c.second = resolve_name(field("second"), kind, plan);
    }
  }
  catch (const Error & e) {
    if (e.kind() == ErrorKind::SchemaError) throw;
    throw Error(ErrorKind::SchemaError,
                std::string("translation reply rejected: ") + e.what());
  }
  return c;
}

}  // namespace planverify
