#pragma once

// Append-only record of one conversation, with a content hash that does not
// depend on how the record was serialized.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fairplay/llm/chat.hpp"

namespace fairplay::llm {

// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

class Transcript {
public:
    Transcript() = default;
    Transcript(std::string backend_identity, std::uint64_t nonce);

    void append(ChatMessage message) { messages_.push_back(std::move(message)); }
    const std::vector<ChatMessage>& messages() const noexcept { return messages_; }
    const std::string& backend_identity() const noexcept { return backend_; }
    std::uint64_t nonce() const noexcept { return nonce_; }

    // Messages other than the system prompt.
    std::size_t turn_count() const;
    // SHA-256 over the canonical JSON of identity, nonce and messages.
    std::string content_hash() const;

    nlohmann::json to_json() const;
    static Transcript from_json(const nlohmann::json& doc);

    friend bool operator==(const Transcript&, const Transcript&) = default;

private:
    std::string backend_;
    std::uint64_t nonce_ = 0;
    std::vector<ChatMessage> messages_;
};

}  // namespace fairplay::llm
