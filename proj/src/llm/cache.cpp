#include "fairplay/llm/cache.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "fairplay/core/log.hpp"
#include "fairplay/llm/transcript.hpp"

namespace fs = std::filesystem;

namespace fairplay::llm {

namespace {

nlohmann::json request_json(const std::string& identity, const ChatRequest& request) {
    return {{"backend", identity},
            {"temperature", request.temperature},
            {"nonce", request.nonce},
            {"messages", to_json(request.messages)}};
}

}  // namespace

std::string cache_key(const std::string& backend_identity, const ChatRequest& request) {
    return sha256_hex(request_json(backend_identity, request).dump());
}

ReplyCache::ReplyCache(std::string directory) : dir_(std::move(directory)) {
    fs::create_directories(dir_);
}

std::string ReplyCache::path_for(const std::string& key) const {
    return (fs::path(dir_) / key.substr(0, 2) / (key + ".json")).string();
}

std::optional<std::string> ReplyCache::lookup(const std::string& backend_identity, const ChatRequest& request) const {
    const auto key = cache_key(backend_identity, request);
    const auto path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.at("request") != request_json(backend_identity, request)) {
            log_warning("cache entry " + path + " does not match its request; ignoring it");
            return std::nullopt;
        }
        return doc.at("reply").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        log_warning("cache entry " + path + " is corrupt (" + e.what() + "); treating it as a miss");
        return std::nullopt;
    }
}

void ReplyCache::store(const std::string& backend_identity, const ChatRequest& request,
                       const std::string& reply) const {
    const auto key = cache_key(backend_identity, request);
    const fs::path path = path_for(key);
    fs::create_directories(path.parent_path());
    const nlohmann::json doc = {{"request", request_json(backend_identity, request)}, {"reply", reply}};

    static std::atomic<unsigned long> counter{0};
    std::ostringstream tmp_name;
    tmp_name << key << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
    const fs::path tmp = path.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary);
        out << doc.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move cache file into place: " + path.string());
    }
}

CachedBackend::CachedBackend(std::shared_ptr<ChatBackend> inner, std::string directory)
    : inner_(std::move(inner)), cache_(std::move(directory)) {}

std::string CachedBackend::complete(const ChatRequest& request) {
    const auto id = inner_->identity();
    if (auto hit = cache_.lookup(id, request)) return *hit;
    auto reply = inner_->complete(request);
    cache_.store(id, request, reply);
    return reply;
}

}  // namespace fairplay::llm
