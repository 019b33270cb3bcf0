#pragma once

#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace planverify::testing {

/// Local chat-completion endpoint. The handler sees each request body and
/// returns the assistant content; a non-200 status is sent back with the
/// content as the raw body.
class MockLlmServer
{
 public:
  struct Reply
  {
    int status = 200;
    std::string content;
  };
  using Handler = std::function<Reply(const nlohmann::json & request)>;

  explicit MockLlmServer(Handler handler) : handler_(std::move(handler))
  {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request & req, httplib::Response & res) {
                   auto body = nlohmann::json::parse(req.body, nullptr, false);
                   Reply reply;
                   {
                     std::lock_guard lock(mutex_);
                     requests_.push_back(body);
                     authorization_.push_back(req.get_header_value("Authorization"));
                   }
                   reply = handler_(body);
                   res.status = reply.status;
                   if (reply.status == 200) {
                     nlohmann::json out = {
                         {"id", "mock"},
                         {"object", "chat.completion"},
                         {"choices",
                          {{{"index", 0},
                            {"message", {{"role", "assistant"}, {"content", reply.content}}},
                            {"finish_reason", "stop"}}}}};
                     res.set_content(out.dump(), "application/json");
                   }
                   else {
                     res.set_content(reply.content, "text/plain");
                   }
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockLlmServer()
  {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  MockLlmServer(const MockLlmServer &) = delete;
  MockLlmServer & operator=(const MockLlmServer &) = delete;

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::vector<nlohmann::json> requests() const
  {
    std::lock_guard lock(mutex_);
    return requests_;
  }

  std::vector<std::string> authorization() const
  {
    std::lock_guard lock(mutex_);
    return authorization_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mutex_;
  std::vector<nlohmann::json> requests_;
  std::vector<std::string> authorization_;
};

}  // namespace planverify::testing
