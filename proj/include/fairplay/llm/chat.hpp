#pragma once

// Chat-model backends: the request shape shared by every backend and the
// configuration used to construct one.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fairplay::llm {

struct ChatMessage {
    std::string role;  // "system", "user" or "assistant"
    std::string content;
    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 1.0;
    // Distinguishes otherwise identical requests (independent samples). Sent
    // as the sampling seed where the endpoint supports one.
    std::uint64_t nonce = 0;
};

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    // Model and settings that determine replies; part of every cache key.
    virtual std::string identity() const = 0;
    // Throws BackendError once the retry budget is spent. Must be safe to call
    // from several threads at once.
    virtual std::string complete(const ChatRequest& request) = 0;
};

struct BackendConfig {
    std::string kind = "mock";  // "mock" or "openai"
    std::string endpoint = "https://api.openai.com/v1";
    std::string model = "gpt-4o";
    double temperature = 1.0;
    double timeout_seconds = 120.0;
    int retries = 3;
    std::string credential_env = "OPENAI_API_KEY";
    std::size_t max_parallel = 4;
    std::string cache_dir;  // empty disables caching

    // Throws std::invalid_argument for negative temperature/retries, zero parallelism
    // or an unknown kind.
    void validate() const;
};

// Backend described by the config, wrapped in a cache when cache_dir is set.
std::shared_ptr<ChatBackend> make_backend(const BackendConfig& config);

// Test double: every call is answered by a user function.
class ScriptedBackend final : public ChatBackend {
public:
    using Script = std::function<std::string(const ChatRequest&)>;
    explicit ScriptedBackend(Script script, std::string identity = "scripted");
    std::string identity() const override { return identity_; }
    std::string complete(const ChatRequest& request) override;

private:
    Script script_;
    std::string identity_;
};

nlohmann::json to_json(const std::vector<ChatMessage>& messages);
std::vector<ChatMessage> messages_from_json(const nlohmann::json& doc);

}  // namespace fairplay::llm
