#include "fairplay/llm/generation.hpp"

#include <regex>
#include <stdexcept>

#include "fairplay/core/log.hpp"
#include "fairplay/core/story_io.hpp"
#include "fairplay/llm/prompts.hpp"

namespace fairplay::llm {

void GenerationJob::validate() const {
    if (target_paragraphs < 3) throw std::invalid_argument("a story needs at least 3 paragraphs");
    if (template_version != kPromptVersion)
        throw std::invalid_argument("unknown prompt template version '" + template_version + "'");
    if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
}

std::vector<std::string> split_paragraphs(const std::string& text) {
    static const std::regex blank_line(R"(\r?\n[ \t]*\r?\n)");
    std::vector<std::string> out;
    for (std::sregex_token_iterator it(text.begin(), text.end(), blank_line, -1), end; it != end; ++it) {
        std::string chunk = *it;
        const auto first = chunk.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        const auto last = chunk.find_last_not_of(" \t\r\n");
        out.push_back(chunk.substr(first, last - first + 1));
    }
    return out;
}

nlohmann::json generated_story_to_json(const GeneratedStory& g) {
    return {{"story", story_to_json(g.story)},
            {"transcript", g.transcript.to_json()},
            {"warnings", g.warnings},
            {"nonce", g.transcript.nonce()}};
}

GeneratedStory generated_story_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("story") || !doc.contains("transcript"))
        throw std::invalid_argument("generated story needs 'story' and 'transcript'");
    GeneratedStory g{story_from_json(doc.at("story")), Transcript::from_json(doc.at("transcript")), {}};
    if (doc.contains("warnings")) g.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return g;
}

namespace {

std::vector<ChatMessage> handshake(const GenerationJob& job) {
    return {{"system", kSystemPrompt},
            {"user", generation_instruction(job.target_paragraphs, job.suspects)},
            {"assistant", kGenerationAck}};
}

// Requests paragraphs first..N on top of `transcript`.
GeneratedStory continue_generation(ChatBackend& backend, const GenerationJob& job, std::uint64_t nonce,
                                   std::size_t first, std::vector<std::string> paragraphs, Transcript transcript) {
    const std::size_t n = job.target_paragraphs;
    std::vector<std::string> warnings;
    for (std::size_t p = first; p <= n; ++p) {
        transcript.append({"user", paragraph_request(p, n)});
        const std::string reply = backend.complete({transcript.messages(), job.temperature, nonce});
        auto chunks = split_paragraphs(reply);
        if (chunks.empty()) {
            chunks.emplace_back();
            warnings.push_back("paragraph " + std::to_string(p) + ": empty reply");
            log_warning(warnings.back());
        } else if (chunks.size() > 1) {
            warnings.push_back("paragraph " + std::to_string(p) + ": reply held " + std::to_string(chunks.size()) +
                               " paragraphs, kept the first");
            log_warning(warnings.back());
        }
        transcript.append({"assistant", chunks.front()});
        paragraphs.push_back(chunks.front());
    }
    return {Story(std::move(paragraphs)), std::move(transcript), std::move(warnings)};
}

}  // namespace

GeneratedStory generate_story(ChatBackend& backend, const GenerationJob& job, std::uint64_t nonce) {
    job.validate();
    Transcript transcript(backend.identity(), nonce);
    for (auto& m : handshake(job)) transcript.append(std::move(m));
    return continue_generation(backend, job, nonce, 1, {}, std::move(transcript));
}

GeneratedStory resume_story(ChatBackend& backend, const GeneratedStory& source, std::size_t i,
                            const GenerationJob& job, std::uint64_t nonce) {
    job.validate();
    const std::size_t n = source.story.size();
    if (job.target_paragraphs != n) throw std::invalid_argument("resume job length differs from the source story");
    if (i > n) throw std::out_of_range("resume point beyond the end of the story");
    if (i == n) return source;

    const auto& turns = source.transcript.messages();
    if (turns.size() < 3 + 2 * i) throw std::invalid_argument("source transcript is shorter than the resume point");
    for (std::size_t p = 1; p <= i; ++p) {
        const auto& ask = turns[1 + 2 * p];
        const auto& reply = turns[2 + 2 * p];
        if (ask.role != "user" || ask.content != paragraph_request(p, n) || reply.role != "assistant" ||
            reply.content != source.story.paragraph(p))
            throw std::invalid_argument("source transcript does not follow the generation protocol");
    }

    Transcript transcript(backend.identity(), nonce);
    for (auto& m : handshake(job)) transcript.append(std::move(m));
    std::vector<std::string> paragraphs;
    for (std::size_t p = 1; p <= i; ++p) {
        transcript.append(turns[1 + 2 * p]);
        transcript.append(turns[2 + 2 * p]);
        paragraphs.push_back(source.story.paragraph(p));
    }
    return continue_generation(backend, job, nonce, i + 1, std::move(paragraphs), std::move(transcript));
}

}  // namespace fairplay::llm
