#include "fairplay/llm/prompts.hpp"

#include <stdexcept>

namespace fairplay::llm {

namespace {

constexpr const char* kGenerationTemplate =
    R"(We will generate a misleading detective story step by step. There will be <story length> paragraphs in total.
I will ask you to generate one paragraph at a time.

At least four characters should be introduced in the story and one of them will be the culprit.

The story must also have a distracting character that should be suspected as the true culprit.
The clues should be misleading and point to the distracting character until the end of the story when the truth is discovered. Make sure that the clues are consistent with the true outcome.
The distracting character must be one of the four suspects.

I will give you the paragraph number and only then will you write the paragraph itself. In each step you will generate a single paragraph -- do NOT write multiple paragraphs in a single step.
Make sure to reveal the true culprit by the end of the story. Do not add numbers to the paragraphs.
Be focused on the story writing without extra explanations.)";

constexpr const char* kGullibleHead =
    R"(I want you to give me likelihood estimates for the true and distracting culprit identities in the following story.
I want lists of four prediction probabilities, a value for each of four suspects (representing the likelihood that the suspect is the true or distracting culprit). Even if a suspect is completely ruled out, he should still be included (and assigned a low probability).

Give me a JSON dictionary with the probabilities. Make sure to follow the exact format in the example. Give me only the JSON. Do not put comments in the JSON.
)";

constexpr const char* kGullibleSuspectLine =
    "The suspects are: <list of suspects>. Please do not change the identity and order of suspects.\n";

constexpr const char* kGullibleTail =
    R"(
For example, if it's clear that A is the distracting culprit and B is the most likely true culprit, then return something like:
```json
{
"suspects": ["A", "B", "C", "D"],
"probabilities": [0.0, 0.9, 0.05, 0.05],
"distractor_probabilities": [1.0, 0.0, 0.0, 0.0]
}
```

I want you to give probability estimations as if the events in the story are real, ignoring the interest of the writer. You should estimate the most likely truth, even if is boring.

The story is:

## BEGINNING OF STORY ##

<story text>

## END OF STORY ##)";

constexpr const char* kFillTemplate =
    R"(I will give you a story with a missing paragraph (marked by "[MISSING]") and six options for filling it.

Give me a list of probabilities for the paragraph that can fill in the missing spot.
I stress that the goal is not to predict what was in the spot but rather to answer about what makes sense given the actual ending.

Notice that some paragraphs might be hidden (marked by [HIDDEN]). I will NOT ask you about filling those paragraphs, only the [MISSING] one.

For example, if the second options is the best, the first is also possible and the others make very little sense, then you answer should look like:
```json
{
"options": ["a", "b", "c", "d", "e", "f"],
"probabilities": [0.25, 0.55, 0.05, 0.05, 0.05, 0.05]
}
```

Your response should be the JSON dictionary only, with no additional text.

The story is:

## BEGINNING OF STORY ##

<story text>

## END OF STORY ##

The optional paragraphs are:

<list of the optional paragraphs, in the form a. first paragraph, b. second paragraph>)";

// Replaces the single occurrence of `slot`; substituted text is never rescanned.
std::string fill_slot(std::string text, const std::string& slot, const std::string& value) {
    const auto pos = text.find(slot);
    if (pos == std::string::npos) throw std::logic_error("template has no slot " + slot);
    return text.replace(pos, slot.size(), value);
}

}  // namespace

std::string generation_instruction(const std::string& story_length,
                                   const std::optional<std::vector<std::string>>& suspects) {
    auto text = fill_slot(kGenerationTemplate, "<story length>", story_length);
    if (suspects && !suspects->empty()) text += "\nThe suspects are: " + format_suspect_list(*suspects) + ".";
    return text;
}

std::string generation_instruction(std::size_t story_length,
                                   const std::optional<std::vector<std::string>>& suspects) {
    return generation_instruction(std::to_string(story_length), suspects);
}

std::string paragraph_request(std::size_t paragraph, std::size_t story_length) {
    if (paragraph < 1 || paragraph > story_length) throw std::out_of_range("paragraph number out of range");
    std::string s = "Now generate Paragraph " + std::to_string(paragraph) + " out of " + std::to_string(story_length);
    if (paragraph == story_length) s += kLastParagraphNote;
    return s;
}

std::string format_suspect_list(std::span<const std::string> suspects) {
    std::string s;
    for (std::size_t i = 0; i < suspects.size(); ++i) s += (i ? ", " : "") + suspects[i];
    return s;
}

std::string gullible_prompt(const std::string& story_text, const std::optional<std::string>& suspect_list) {
    std::string head = kGullibleHead;
    if (suspect_list) head += fill_slot(kGullibleSuspectLine, "<list of suspects>", *suspect_list);
    return head + fill_slot(kGullibleTail, "<story text>", story_text);
}

std::string fill_prompt(const std::string& story_text, const std::string& option_list) {
    // The option slot follows the story slot; filling it first keeps the
    // story slot's position valid whatever the substituted texts contain.
    const std::string options_slot =
        "<list of the optional paragraphs, in the form a. first paragraph, b. second paragraph>";
    std::string text = kFillTemplate;
    const auto story_pos = text.find("<story text>");
    const auto options_pos = text.find(options_slot);
    text.replace(options_pos, options_slot.size(), option_list);
    return text.replace(story_pos, std::string("<story text>").size(), story_text);
}

std::string format_option_list(std::span<const std::string> paragraphs) {
    if (paragraphs.size() > 26) throw std::invalid_argument("too many options to label");
    std::string s;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (i) s += "\n\n";
        s += static_cast<char>('a' + i);
        s += ". " + paragraphs[i];
    }
    return s;
}

}  // namespace fairplay::llm
