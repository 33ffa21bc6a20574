#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mcox/llm_planner.hpp"

namespace mcox {

struct EndpointConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  std::string api_key_env = "MCOX_API_KEY";
  double timeout_s = 120.0;
  int max_retries = 3;
  double backoff_initial_s = 1.0;  // doubled after every failed attempt
  int image_scale = kDefaultImageScale;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;  // 0 when the request never completed
  std::string body;
  std::string error;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                            double timeout_s) = 0;
};

/// cpp-httplib backed transport; supports http:// and https:// URLs.
class HttplibTransport : public HttpTransport {
 public:
  HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                    double timeout_s) override;
};

/// Chat-completions request: one user message carrying the prompt text and
/// the map image as a base64 data URL.
nlohmann::json build_request_body(const EndpointConfig& cfg, const Prompt& prompt);

/// Assistant text from a chat-completions response body.
std::string extract_message_text(const std::string& response_body);

std::string chat_completions_url(const EndpointConfig& cfg);

using Sleeper = std::function<void(double seconds)>;
void sleep_seconds(double seconds);

/// POSTs the prompt and returns the assistant text. Transport failures, 429
/// and 5xx responses are retried with exponential backoff up to
/// cfg.max_retries times. Throws Error(kConfig) when the key variable is
/// unset (before any request) and Error(kEndpoint) for every other failure.
std::string query_endpoint(const EndpointConfig& cfg, const Prompt& prompt, HttpTransport& transport,
                           const Sleeper& sleeper = sleep_seconds);

}  // namespace mcox
