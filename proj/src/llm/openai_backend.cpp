#include "fairplay/llm/openai_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "fairplay/core/log.hpp"

namespace fairplay::llm {

namespace {

// Splits "https://host:port/base" into "https://host:port" and "/base".
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint must start with http:// or https://");
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {endpoint, ""};
    std::string path = endpoint.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {endpoint.substr(0, path_start), path};
}

bool retryable(int status) {
    return status == 408 || status == 409 || status == 429 || status >= 500;
}

}  // namespace

OpenAIBackend::OpenAIBackend(BackendConfig config) : config_(std::move(config)) {
    config_.validate();
    std::tie(scheme_host_port_, base_path_) = split_endpoint(config_.endpoint);
    if (const char* key = std::getenv(config_.credential_env.c_str())) credential_ = key;
}

std::string OpenAIBackend::identity() const {
    return "openai:" + config_.endpoint + ":" + config_.model;
}

std::string OpenAIBackend::complete(const ChatRequest& request) {
    nlohmann::json body = {
        {"model", config_.model},
        {"messages", to_json(request.messages)},
        {"temperature", request.temperature},
        // Endpoints take a signed 64-bit seed.
        {"seed", static_cast<std::int64_t>(request.nonce & 0x7fffffffffffffffULL)},
    };
    const auto payload = body.dump();
    httplib::Headers headers;
    if (!credential_.empty()) headers.emplace("Authorization", "Bearer " + credential_);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250 << std::min(attempt - 1, 5)));
        httplib::Client client(scheme_host_port_);
        const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
        client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
        const auto res = client.Post(base_path_ + "/chat/completions", headers, payload, "application/json");
        if (!res) {
            last_error = "request failed: " + httplib::to_string(res.error());
        } else if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300);
            if (!retryable(res->status)) break;
        } else {
            try {
                const auto reply = nlohmann::json::parse(res->body);
                return reply.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("malformed completion response: ") + e.what();
            }
        }
        if (attempt < config_.retries) log_warning(identity() + ": " + last_error + "; retrying");
    }
    throw BackendError(identity() + ": " + last_error);
}

}  // namespace fairplay::llm
