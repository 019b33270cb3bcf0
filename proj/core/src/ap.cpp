#include "planverify/ap.h"

#include <algorithm>
#include <cctype>

#include "planverify/error.h"

namespace planverify {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool field_equal(const std::string & pattern, std::string_view value)
{
  if (pattern == kWildcard) return true;
  if (pattern.size() != value.size()) return false;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != std::tolower(static_cast<unsigned char>(value[i]))) {
      return false;
    }
  }
  return true;
}

void check_field(const std::string & value, const char * name)
{
  if (value.empty()) {
    throw Error(ErrorKind::MalformedAp,
                std::string("atomic proposition field '") + name
                    + "' is empty");
  }
  if (value.find('/') != std::string::npos) {
    throw Error(ErrorKind::MalformedAp,
                std::string("atomic proposition field '") + name
                    + "' contains '/'");
  }
}

EventDescriptor parse_event(std::string_view text)
{
  text = trim(text);
  if (text.empty()) {
    throw Error(ErrorKind::MalformedAp, "empty event descriptor");
  }
  if (text == kWildcard) {
    return {EventKind::any, std::string(kWildcard)};
  }
  auto open = text.find('(');
  if (open == std::string_view::npos) {
    if (text.find(')') != std::string_view::npos) {
      throw Error(ErrorKind::MalformedAp,
                  "unbalanced event descriptor '" + std::string(text) + "'");
    }
    // A bare function name observes the task start.
    return {EventKind::start, canonical_field(text)};
  }
  if (text.back() != ')') {
    throw Error(ErrorKind::MalformedAp,
                "unbalanced event descriptor '" + std::string(text) + "'");
  }
  std::string kind = canonical_field(text.substr(0, open));
  std::string function =
      canonical_field(text.substr(open + 1, text.size() - open - 2));
  if (function.empty()) {
    throw Error(ErrorKind::MalformedAp,
                "event descriptor '" + std::string(text)
                    + "' has no function");
  }
  if (function.find_first_of("()") != std::string::npos) {
    throw Error(ErrorKind::MalformedAp,
                "nested parentheses in event descriptor '" + std::string(text)
                    + "'");
  }
  if (kind == "start") return {EventKind::start, function};
  if (kind == "done") return {EventKind::done, function};
  if (kind == "executing") return {EventKind::executing, function};
  throw Error(ErrorKind::MalformedAp,
              "unknown event descriptor kind '" + kind + "'");
}

}  // namespace

std::string canonical_field(std::string_view text)
{
  text = trim(text);
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string EventDescriptor::to_string() const
{
  switch (kind) {
    case EventKind::start: return "start(" + function + ")";
    case EventKind::done: return "done(" + function + ")";
    case EventKind::executing: return "executing(" + function + ")";
    case EventKind::any: return std::string(kWildcard);
  }
  return {};
}

AtomicProposition::AtomicProposition(std::string process,
                                     std::string product,
                                     std::string resource,
                                     EventDescriptor event,
                                     std::string context)
    : process_(canonical_field(process)),
      product_(canonical_field(product)),
      resource_(canonical_field(resource)),
      event_{event.kind, canonical_field(event.function)},
      context_(canonical_field(context))
{
  check_field(process_, "process");
  check_field(product_, "product");
  check_field(resource_, "resource");
  check_field(event_.function, "event");
  check_field(context_, "context");
  if (event_.kind == EventKind::any) event_.function = std::string(kWildcard);
}

AtomicProposition AtomicProposition::parse(std::string_view text)
{
  text = trim(text);
  if (text.empty()) {
    throw Error(ErrorKind::MalformedAp, "empty atomic proposition");
  }
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    auto slash = text.find('/', pos);
    if (slash == std::string_view::npos) {
      fields.push_back(text.substr(pos));
      break;
    }
    fields.push_back(text.substr(pos, slash - pos));
    pos = slash + 1;
  }
  if (fields.size() != 6) {
    throw Error(ErrorKind::MalformedAp,
                "atomic proposition '" + std::string(text) + "' has "
                    + std::to_string(fields.size())
                    + " slash-separated fields, expected 6");
  }
  if (canonical_field(fields[0]) != "ap") {
    throw Error(ErrorKind::MalformedAp,
                "atomic proposition '" + std::string(text)
                    + "' must start with 'ap/'");
  }
  for (std::size_t i = 1; i < fields.size(); ++i) {
    if (trim(fields[i]).empty()) {
      throw Error(ErrorKind::MalformedAp,
                  "atomic proposition '" + std::string(text)
                      + "' has an empty field");
    }
  }
  return AtomicProposition(std::string(fields[1]),
                           std::string(fields[2]),
                           std::string(fields[3]),
                           parse_event(fields[4]),
                           std::string(fields[5]));
}

bool AtomicProposition::is_ground() const
{
  return process_ != kWildcard && product_ != kWildcard
         && resource_ != kWildcard && context_ != kWildcard
         && event_.kind != EventKind::any && event_.function != kWildcard;
}

std::string AtomicProposition::to_string() const
{
  return "ap/" + process_ + "/" + product_ + "/" + resource_ + "/"
         + event_.to_string() + "/" + context_;
}

AtomicProposition parse_ap(std::string_view text)
{
  return AtomicProposition::parse(text);
}

const char * to_string(TransitionKind kind)
{
  return kind == TransitionKind::start ? "start" : "done";
}

std::string GroundEvent::label() const
{
  return task_id + "." + planverify::to_string(kind);
}

bool fields_match(const AtomicProposition & pattern, const GroundEvent & ev)
{
  return field_equal(pattern.process(), ev.process)
         && field_equal(pattern.product(), ev.product)
         && field_equal(pattern.resource(), ev.resource)
         && field_equal(pattern.event().function, ev.function)
         && field_equal(pattern.context(), ev.context);
}

bool matches(const AtomicProposition & pattern, const GroundEvent & ev)
{
  switch (pattern.event().kind) {
    case EventKind::executing: return false;
    case EventKind::start:
      if (ev.kind != TransitionKind::start) return false;
      break;
    case EventKind::done:
      if (ev.kind != TransitionKind::done) return false;
      break;
    case EventKind::any: break;
  }
  return fields_match(pattern, ev);
}

AtomicProposition ground_ap(const GroundEvent & ev)
{
  auto or_wild = [](const std::string & s) {
    return s.empty() ? std::string(kWildcard) : s;
  };
  EventKind kind =
      ev.kind == TransitionKind::start ? EventKind::start : EventKind::done;
  return AtomicProposition(or_wild(ev.process),
                           or_wild(ev.product),
                           or_wild(ev.resource),
                           {kind, or_wild(ev.function)},
                           or_wild(ev.context));
}

Alphabet make_alphabet(std::vector<AtomicProposition> aps)
{
  std::sort(aps.begin(), aps.end());
  aps.erase(std::unique(aps.begin(), aps.end()), aps.end());
  return aps;
}

}  // namespace planverify
