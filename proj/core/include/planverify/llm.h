#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "planverify/constraints.h"
#include "planverify/feedback.h"
#include "planverify/plan.h"

namespace planverify {

struct ChatConfig
{
  // scheme://host[:port][/prefix]; requests go to {prefix}/v1/chat/completions.
  std::string base_url;
  std::string api_key;
  std::string model;
  std::chrono::seconds timeout{120};

  /// Reads PLANVERIFY_LLM_BASE_URL, PLANVERIFY_LLM_API_KEY and
  /// PLANVERIFY_LLM_MODEL. Throws ConfigError if the URL or model is unset.
  static ChatConfig from_env();
};

/// Minimal client for the chat-completion wire protocol.
class ChatClient
{
 public:
  explicit ChatClient(ChatConfig config);

  const ChatConfig & config() const { return config_; }

  nlohmann::json build_request(const std::string & system,
                               const std::string & user) const;

  /// Content of the first choice. Throws TransportError on connection
  /// failure or a non-2xx status, SchemaError on an unexpected body.
  std::string complete(const std::string & system, const std::string & user) const;

 private:
  ChatConfig config_;
};

/// Extracts a JSON object from a reply, tolerating a surrounding ```json
/// fence. Throws SchemaError.
nlohmann::json parse_reply_object(std::string_view content);

/// Applies a {tasks: [{id, predecessors, change_reason}]} reply to `plan`.
/// The reply must list every task exactly once and nothing else; resource
/// assignments cannot change. Throws SchemaError.
TaskPlan apply_repair_reply(const TaskPlan & plan, std::string_view content);

class LlmPlanner final : public Planner
{
 public:
  explicit LlmPlanner(ChatClient client) : client_(std::move(client)) {}

  std::string name() const override { return "llm"; }
  TaskPlan repair(const RepairRequest & request) override;

 private:
  ChatClient client_;
};

class RequirementTranslator
{
 public:
  virtual ~RequirementTranslator() = default;

  virtual StructuredConstraint translate(const std::string & text,
                                         const std::string & id) = 0;
};

/// Recognizes "<A> must occur before <B>" and "<C> and <D> must not occur
/// simultaneously" (or "at the same time"). Names resolve to task events
/// when a plan is given: start events for ordering, executing levels for
/// mutual exclusion. Otherwise a name becomes the function field of a
/// wildcard proposition. Throws UnrecognizedRequirement.
class RuleBasedTranslator final : public RequirementTranslator
{
 public:
  explicit RuleBasedTranslator(const TaskPlan * plan = nullptr) : plan_(plan) {}

  StructuredConstraint translate(const std::string & text,
                                 const std::string & id) override;

 private:
  const TaskPlan * plan_;
};

/// Asks the endpoint for {type, first, second} or {type: raw_ltlf, raw}.
class LlmTranslator final : public RequirementTranslator
{
 public:
  LlmTranslator(ChatClient client, const TaskPlan * plan = nullptr)
      : client_(std::move(client)), plan_(plan)
  {
  }

  StructuredConstraint translate(const std::string & text,
                                 const std::string & id) override;

 private:
  ChatClient client_;
  const TaskPlan * plan_;
};

/// Validates a translator reply; task ids resolve against `plan` when
/// given. Throws SchemaError, or UnrecognizedRequirement when the reply is
/// {type: "unrecognized"}.
StructuredConstraint parse_translation_reply(std::string_view content,
                                             const std::string & id,
                                             const std::string & text,
                                             const TaskPlan * plan = nullptr);

}  // namespace planverify
