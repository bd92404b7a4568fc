#pragma once

// OpenAI-compatible chat completions over HTTP(S).

#include "fairplay/llm/chat.hpp"

namespace fairplay::llm {

class OpenAIBackend final : public ChatBackend {
public:
    // The credential is read from the environment variable named in the
    // config at construction; a missing variable sends no Authorization header.
    explicit OpenAIBackend(BackendConfig config);
    std::string identity() const override;
    std::string complete(const ChatRequest& request) override;

private:
    BackendConfig config_;
    std::string scheme_host_port_;
    std::string base_path_;
    std::string credential_;
};

}  // namespace fairplay::llm
