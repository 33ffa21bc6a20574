#include "mcox/endpoint.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "mcox/error.hpp"

namespace mcox {

namespace {

// Splits "scheme://host[:port]/path" into origin and path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

}  // namespace

HttpResponse HttplibTransport::post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                                    double timeout_s) {
  const auto [origin, path] = split_url(url);
  httplib::Client client(origin);
  const auto secs = static_cast<time_t>(timeout_s);
  const auto usecs = static_cast<time_t>((timeout_s - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);
  auto res = client.Post(path, hdrs, body, "application/json");
  if (!res) return {0, "", httplib::to_string(res.error())};
  return {res->status, res->body, ""};
}

std::string chat_completions_url(const EndpointConfig& cfg) {
  std::string base = cfg.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + "/chat/completions";
}

nlohmann::json build_request_body(const EndpointConfig& cfg, const Prompt& prompt) {
  nlohmann::json content = nlohmann::json::array();
  content.push_back({{"type", "text"}, {"text", prompt.text}});
  if (!prompt.image_base64.empty()) {
    content.push_back(
        {{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + prompt.image_base64}}}});
  }
  return {{"model", cfg.model}, {"messages", nlohmann::json::array({{{"role", "user"}, {"content", content}}})}};
}

std::string extract_message_text(const std::string& response_body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(response_body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kEndpoint, std::string("malformed response JSON: ") + e.what());
  }
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw Error(ErrorKind::kEndpoint, "response has no choices");
  }
  const auto& message = j["choices"][0].value("message", nlohmann::json::object());
  const auto content = message.value("content", nlohmann::json());
  if (content.is_string()) return content.get<std::string>();
  if (content.is_array()) {
    std::string text;
    for (const auto& part : content) {
      if (part.value("type", "") == "text") text += part.value("text", "");
    }
    return text;
  }
  throw Error(ErrorKind::kEndpoint, "response message has no text content");
}

void sleep_seconds(double seconds) {
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

std::string query_endpoint(const EndpointConfig& cfg, const Prompt& prompt, HttpTransport& transport,
                           const Sleeper& sleeper) {
  if (cfg.timeout_s <= 0.0) throw Error(ErrorKind::kConfig, "llm.timeout_s must be positive");
  if (cfg.max_retries < 0) throw Error(ErrorKind::kConfig, "llm.max_retries must be >= 0");
  const char* key = std::getenv(cfg.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorKind::kConfig, "environment variable " + cfg.api_key_env + " is not set");
  }
  const HttpHeaders headers{{"Authorization", std::string("Bearer ") + key}};
  const std::string body = build_request_body(cfg, prompt).dump();
  const std::string url = chat_completions_url(cfg);

  std::string last_error;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) sleeper(cfg.backoff_initial_s * std::pow(2.0, attempt - 1));
    const HttpResponse res = transport.post(url, headers, body, cfg.timeout_s);
    if (res.status >= 200 && res.status < 300) return extract_message_text(res.body);
    const bool transient = res.status == 0 || res.status == 429 || res.status >= 500;
    last_error = res.status == 0 ? "transport error: " + res.error
                                 : "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 300);
    if (!transient) throw Error(ErrorKind::kEndpoint, last_error);
  }
  throw Error(ErrorKind::kEndpoint,
              "giving up after " + std::to_string(cfg.max_retries) + " retries; last error: " + last_error);
}

}  // namespace mcox
