#pragma once

// Content-addressed reply cache: one JSON file per request hash holding the
// request (the transcript so far) and the reply.

#include <memory>
#include <optional>
#include <string>

#include "fairplay/llm/chat.hpp"

namespace fairplay::llm {

// Key material for a request: backend identity, temperature, nonce and messages.
std::string cache_key(const std::string& backend_identity, const ChatRequest& request);

class ReplyCache {
public:
    explicit ReplyCache(std::string directory);

    // A missing, unreadable or mismatching entry is a miss; the last two also log a warning.
    std::optional<std::string> lookup(const std::string& backend_identity, const ChatRequest& request) const;
    // Writes go through a temporary file and a rename, so concurrent writers of
    // the same entry (which carry identical contents) are safe.
    void store(const std::string& backend_identity, const ChatRequest& request, const std::string& reply) const;

    std::string path_for(const std::string& key) const;

private:
    std::string dir_;
};

class CachedBackend final : public ChatBackend {
public:
    CachedBackend(std::shared_ptr<ChatBackend> inner, std::string directory);
    std::string identity() const override { return inner_->identity(); }
    std::string complete(const ChatRequest& request) override;

private:
    std::shared_ptr<ChatBackend> inner_;
    ReplyCache cache_;
};

}  // namespace fairplay::llm
