#include "fairplay/llm/transcript.hpp"

#include <array>
#include <memory>

#include <openssl/evp.h>

namespace fairplay::llm {

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

Transcript::Transcript(std::string backend_identity, std::uint64_t nonce)
    : backend_(std::move(backend_identity)), nonce_(nonce) {}

std::size_t Transcript::turn_count() const {
    std::size_t n = 0;
    for (const auto& m : messages_)
        if (m.role != "system") ++n;
    return n;
}

nlohmann::json Transcript::to_json() const {
    return {{"backend", backend_}, {"nonce", nonce_}, {"messages", llm::to_json(messages_)}};
}

std::string Transcript::content_hash() const {
    // nlohmann::json keeps object keys sorted, so dump() is canonical.
    return sha256_hex(to_json().dump());
}

Transcript Transcript::from_json(const nlohmann::json& doc) {
    Transcript t(doc.at("backend").get<std::string>(), doc.at("nonce").get<std::uint64_t>());
    t.messages_ = messages_from_json(doc.at("messages"));
    return t;
}

}  // namespace fairplay::llm
