#pragma once

// Prompt texts of the generation, gullible-reader and paragraph-filling
// protocols. Rendering with the slot names themselves (e.g. "<story text>")
// reproduces the published templates.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairplay::llm {

inline constexpr const char* kPromptVersion = "v1";

inline constexpr const char* kSystemPrompt = "You are a story writer.";
inline constexpr const char* kGenerationAck = "Understood. Please provide the paragraph number.";
inline constexpr const char* kLastParagraphNote = " (the last paragraph in the story)";

// `story_length` is substituted verbatim; `suspects`, when given, are listed
// after the instruction (sampling runs keep the original cast).
std::string generation_instruction(const std::string& story_length,
                                   const std::optional<std::vector<std::string>>& suspects = std::nullopt);
std::string generation_instruction(std::size_t story_length,
                                   const std::optional<std::vector<std::string>>& suspects = std::nullopt);

// "Now generate Paragraph <i + 1> out of <story length>", plus the last-paragraph note.
std::string paragraph_request(std::size_t paragraph, std::size_t story_length);

// Without a suspect list the line naming the suspects is omitted (first
// generation, where the judge introduces the cast).
std::string gullible_prompt(const std::string& story_text, const std::optional<std::string>& suspect_list);
std::string format_suspect_list(std::span<const std::string> suspects);

std::string fill_prompt(const std::string& story_text, const std::string& option_list);
// "a. first\n\nb. second ..."
std::string format_option_list(std::span<const std::string> paragraphs);

inline constexpr const char* kMissingMarker = "[MISSING]";
inline constexpr const char* kHiddenMarker = "[HIDDEN]";

// Sent once after an unparseable judge reply.
inline constexpr const char* kJudgeRepairNudge =
    "Reply with the machine-readable object only: a JSON dictionary with the keys \"suspects\", "
    "\"probabilities\" and \"distractor_probabilities\", and nothing else.";
inline constexpr const char* kFillRepairNudge =
    "Reply with the machine-readable object only: a JSON dictionary with the keys \"options\" and "
    "\"probabilities\", and nothing else.";

}  // namespace fairplay::llm
