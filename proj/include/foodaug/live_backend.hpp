#pragma once

#include <string>

#include <httplib.h>
#include <json.hpp>

#include "foodaug/generator.hpp"

namespace foodaug {

namespace detail {

struct ParsedUrl {
  std::string base;  // scheme://host:port
  std::string path;
};

inline ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorKind::config, "endpoint URL lacks scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace detail

// One chat-completions call. Transport and 5xx failures are retried by the
// generate() wrapper; 429 is flagged as rate limiting so the retry delays.
inline std::string LiveEndpointBackend::complete(
    const GenerationRequest& request, const std::string& rendered_prompt) {
  auto parsed = detail::parse_url(config_.url);
  httplib::Client client(parsed.base);
  client.set_connection_timeout(config_.timeout_seconds);
  client.set_read_timeout(config_.timeout_seconds);

  nlohmann::json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array(
      {nlohmann::json{{"role", "user"}, {"content", rendered_prompt}}});
  body["temperature"] = request.decoding.temperature;
  body["max_tokens"] = request.decoding.max_output_tokens;
  body["seed"] = request.decoding.sampling_seed;

  httplib::Headers headers;
  if (!config_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(parsed.path, headers, body.dump(), "application/json");
  if (!res)
    throw TransportFailure("endpoint " + config_.url + " unreachable: " +
                           httplib::to_string(res.error()));
  if (res->status == 429)
    throw TransportFailure("endpoint rate limited the request", true);
  if (res->status >= 500)
    throw TransportFailure("endpoint returned status " +
                           std::to_string(res->status));
  if (res->status < 200 || res->status >= 300)
    throw Error(ErrorKind::generation,
                "endpoint rejected the request with status " +
                    std::to_string(res->status) + ": " + res->body);

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse,
                std::string("endpoint reply is not JSON: ") + e.what());
  }
  if (!reply.contains("choices") || reply["choices"].empty() ||
      !reply["choices"][0].contains("message") ||
      !reply["choices"][0]["message"].contains("content"))
    throw Error(ErrorKind::parse,
                "endpoint reply lacks choices[0].message.content: " + res->body);
  return reply["choices"][0]["message"]["content"].get<std::string>();
}

}  // namespace foodaug
