#pragma once

// Parsing of judge replies into belief vectors.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fairplay/core/prob_vector.hpp"

namespace fairplay::llm {

// Judge vectors may be off the simplex by this much; they are renormalized.
inline constexpr double kReplySumTolerance = 0.05;

class ReplyParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The JSON object in a reply: code fences and surrounding prose are ignored by
// taking the text from the first '{' to the last '}'.
nlohmann::json extract_json_object(std::string_view reply);

struct JudgeReply {
    std::vector<std::string> suspects;  // in `roster` order when a roster was given
    ProbVector culprit;
    ProbVector distractor;
};

// With a roster, the reply's suspects must be the same names (case and
// spacing aside, any order); vectors are reordered to the roster.
JudgeReply parse_judge_reply(std::string_view reply, const std::optional<std::vector<std::string>>& roster);

// Probabilities over `num_options` options labelled a, b, c, ...
ProbVector parse_fill_reply(std::string_view reply, std::size_t num_options);

}  // namespace fairplay::llm
