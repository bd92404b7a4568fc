#include "fairplay/llm/chat.hpp"

#include "fairplay/llm/cache.hpp"
#include "fairplay/llm/mock_backend.hpp"
#include "fairplay/llm/openai_backend.hpp"

namespace fairplay::llm {

void BackendConfig::validate() const {
    if (kind != "mock" && kind != "openai") throw std::invalid_argument("unknown backend kind '" + kind + "'");
    if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
    if (retries < 0) throw std::invalid_argument("retry budget must be >= 0");
    if (max_parallel == 0) throw std::invalid_argument("parallelism bound must be >= 1");
    if (!(timeout_seconds > 0.0)) throw std::invalid_argument("request timeout must be positive");
}

std::shared_ptr<ChatBackend> make_backend(const BackendConfig& config) {
    config.validate();
    std::shared_ptr<ChatBackend> backend;
    if (config.kind == "mock")
        backend = std::make_shared<MockBackend>();
    else
        backend = std::make_shared<OpenAIBackend>(config);
    if (!config.cache_dir.empty()) backend = std::make_shared<CachedBackend>(backend, config.cache_dir);
    return backend;
}

ScriptedBackend::ScriptedBackend(Script script, std::string identity)
    : script_(std::move(script)), identity_(std::move(identity)) {}

std::string ScriptedBackend::complete(const ChatRequest& request) {
    return script_(request);
}

nlohmann::json to_json(const std::vector<ChatMessage>& messages) {
    auto out = nlohmann::json::array();
    for (const auto& m : messages) out.push_back({{"role", m.role}, {"content", m.content}});
    return out;
}

std::vector<ChatMessage> messages_from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw std::invalid_argument("messages must be a JSON array");
    std::vector<ChatMessage> out;
    for (const auto& m : doc) {
        if (!m.is_object() || !m.contains("role") || !m.contains("content") || !m["role"].is_string() ||
            !m["content"].is_string())
            throw std::invalid_argument("each message needs string 'role' and 'content'");
        out.push_back({m["role"].get<std::string>(), m["content"].get<std::string>()});
    }
    return out;
}

}  // namespace fairplay::llm
