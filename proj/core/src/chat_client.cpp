#include <cstdlib>
#include <map>
#include <regex>
#include <set>

#include <httplib.h>

#include "planverify/llm.h"

namespace planverify {

namespace {

std::string env_or_empty(const char * name)
{
  const char * v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

struct Endpoint
{
  std::string origin;
  std::string path;
};

Endpoint split_url(const std::string & base)
{
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(base, m, re)) {
    throw Error(ErrorKind::ConfigError,
                "PLANVERIFY_LLM_BASE_URL must look like http(s)://host[:port][/prefix], got '"
                    + base + "'");
  }
  std::string prefix = m[2].matched ? m[2].str() : std::string();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  if (prefix.size() >= 3 && prefix.ends_with("/v1")) prefix.resize(prefix.size() - 3);
  return {m[1].str(), prefix + "/v1/chat/completions"};
}

const char * kRepairSystemSuffix =
    "\nRespond with only the JSON object described in the output schema.";

}  // namespace

ChatConfig ChatConfig::from_env()
{
  ChatConfig c;
  c.base_url = env_or_empty("PLANVERIFY_LLM_BASE_URL");
  c.api_key = env_or_empty("PLANVERIFY_LLM_API_KEY");
  c.model = env_or_empty("PLANVERIFY_LLM_MODEL");
  if (c.base_url.empty()) {
    throw Error(ErrorKind::ConfigError, "PLANVERIFY_LLM_BASE_URL is not set");
  }
  if (c.model.empty()) {
    throw Error(ErrorKind::ConfigError, "PLANVERIFY_LLM_MODEL is not set");
  }
  split_url(c.base_url);
  return c;
}

ChatClient::ChatClient(ChatConfig config) : config_(std::move(config))
{
  split_url(config_.base_url);
}

nlohmann::json ChatClient::build_request(const std::string & system,
                                         const std::string & user) const
{
  return {{"model", config_.model},
          {"temperature", 0},
          {"messages",
           nlohmann::json::array({{{"role", "system"}, {"content", system}},
                                  {{"role", "user"}, {"content", user}}})}};
}

std::string ChatClient::complete(const std::string & system,
                                 const std::string & user) const
{
  const Endpoint ep = split_url(config_.base_url);
  httplib::Client cli(ep.origin);
  const auto secs = static_cast<time_t>(config_.timeout.count());
  cli.set_connection_timeout(secs, 0);
  cli.set_read_timeout(secs, 0);
  cli.set_write_timeout(secs, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  auto res = cli.Post(ep.path, headers, build_request(system, user).dump(),
                      "application/json");
  if (!res) {
    throw Error(ErrorKind::TransportError,
                "request to " + ep.origin + ep.path
                    + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorKind::TransportError,
                "endpoint returned HTTP " + std::to_string(res->status) + ": "
                    + res->body.substr(0, 200));
  }
  try {
    auto body = nlohmann::json::parse(res->body);
    const auto & content = body.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw std::runtime_error("content is not a string");
    return content.get<std::string>();
  }
  catch (const std::exception & e) {
    throw Error(ErrorKind::SchemaError,
                std::string("unexpected chat-completion response: ") + e.what());
  }
}

nlohmann::json parse_reply_object(std::string_view content)
{
  auto begin = content.find('{');
  auto end = content.rfind('}');
  if (begin == std::string_view::npos || end == std::string_view::npos || end < begin) {
    throw Error(ErrorKind::SchemaError, "reply contains no JSON object");
  }
  try {
    auto doc = nlohmann::json::parse(content.substr(begin, end - begin + 1));
    if (!doc.is_object()) throw std::runtime_error("not an object");
    return doc;
  }
  catch (const std::exception & e) {
    throw Error(ErrorKind::SchemaError, std::string("reply is not valid JSON: ") + e.what());
  }
}

TaskPlan apply_repair_reply(const TaskPlan & plan, std::string_view content)
{
  auto doc = parse_reply_object(content);
  if (!doc.contains("tasks") || !doc["tasks"].is_array()) {
    throw Error(ErrorKind::SchemaError, "reply must have a 'tasks' array");
  }
  std::map<std::string, std::vector<std::string>> preds;
  for (const auto & rec : doc["tasks"]) {
    if (!rec.is_object()) throw Error(ErrorKind::SchemaError, "task record is not an object");
    if (!rec.contains("id") || !rec["id"].is_string()) {
      throw Error(ErrorKind::SchemaError, "task record without a string 'id'");
    }
    const std::string id = rec["id"].get<std::string>();
    if (!plan.index_of(id)) {
      throw Error(ErrorKind::SchemaError, "reply introduces unknown task '" + id + "'");
    }
    if (preds.contains(id)) {
      throw Error(ErrorKind::SchemaError, "reply lists task '" + id + "' twice");
    }
    if (!rec.contains("change_reason") || !rec["change_reason"].is_string()) {
      throw Error(ErrorKind::SchemaError,
                  "task '" + id + "' is missing a string 'change_reason'");
    }
    if (!rec.contains("predecessors") || !rec["predecessors"].is_array()) {
      throw Error(ErrorKind::SchemaError,
                  "task '" + id + "' is missing a 'predecessors' array");
    }
    if (rec.contains("resource_jid")
        && rec["resource_jid"] != nlohmann::json(plan.task(id).resource)) {
      throw Error(ErrorKind::SchemaError,
                  "task '" + id + "' may not change its resource assignment");
    }
    auto & list = preds[id];
    for (const auto & p : rec["predecessors"]) {
      if (!p.is_string()) {
        throw Error(ErrorKind::SchemaError, "predecessor of '" + id + "' is not a string");
      }
      list.push_back(p.get<std::string>());
    }
  }
  if (preds.size() != plan.size()) {
    throw Error(ErrorKind::SchemaError,
                "reply lists " + std::to_string(preds.size()) + " of "
                    + std::to_string(plan.size()) + " tasks");
  }
  try {
    return plan.with_predecessors(preds);
  }
  catch (const Error & e) {
    throw Error(ErrorKind::SchemaError,
                std::string("reply does not describe a valid plan: ") + e.what());
  }
}

TaskPlan LlmPlanner::repair(const RepairRequest & request)
{
  auto content = client_.complete(
      request.prompt.system_instructions + kRepairSystemSuffix,
      request.prompt.user_message());
  return apply_repair_reply(request.plan, content);
}

}  // namespace planverify
