#pragma once

// Paragraph-by-paragraph story generation over a chat backend, and resumption
// from any prefix of an earlier generation with the same prompts.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairplay/core/story.hpp"
#include "fairplay/llm/chat.hpp"
#include "fairplay/llm/transcript.hpp"

namespace fairplay::llm {

struct GenerationJob {
    std::size_t target_paragraphs = 25;
    // Required for resampling runs so continuations keep the original cast.
    std::optional<std::vector<std::string>> suspects;
    std::string template_version = "v1";
    double temperature = 1.0;

    // Throws std::invalid_argument for fewer than 3 paragraphs or an unknown template version.
    void validate() const;
};

struct GeneratedStory {
    Story story;
    Transcript transcript;
    std::vector<std::string> warnings;  // protocol warnings, also logged
};

// Throws BackendError when the backend gives up.
GeneratedStory generate_story(ChatBackend& backend, const GenerationJob& job, std::uint64_t nonce);

// Keeps paragraphs 1..i of `source` with their exact turns and samples the
// rest under `nonce`. When the job names suspects, the instruction turn is the
// name-bearing one. i = N returns `source` unchanged; i = 0 is a fresh generation.
GeneratedStory resume_story(ChatBackend& backend, const GeneratedStory& source, std::size_t i,
                            const GenerationJob& job, std::uint64_t nonce);

// { "story": <story object>, "transcript": {...}, "warnings": [..], "nonce": n }
nlohmann::json generated_story_to_json(const GeneratedStory& g);
GeneratedStory generated_story_from_json(const nlohmann::json& doc);

// Blank-line-separated paragraphs with surrounding whitespace trimmed; empty
// chunks are dropped.
std::vector<std::string> split_paragraphs(const std::string& text);

}  // namespace fairplay::llm
