#include "fairplay/llm/parse.hpp"

#include "fairplay/core/story.hpp"

namespace fairplay::llm {

namespace {

std::vector<double> probability_list(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) throw ReplyParseError(std::string("reply has no list '") + key + "'");
    std::vector<double> out;
    for (const auto& v : doc[key]) {
        if (!v.is_number()) throw ReplyParseError(std::string("'") + key + "' holds a non-number");
        const double x = v.get<double>();
        if (!(x >= 0.0 && x <= 1.0 + kReplySumTolerance))
            throw ReplyParseError(std::string("'") + key + "' holds a value outside [0, 1]");
        out.push_back(x);
    }
    return out;
}

ProbVector to_belief(std::vector<double> w, const char* key) {
    try {
        return ProbVector::from_approximate(std::move(w), kReplySumTolerance);
    } catch (const SimplexError&) {
        throw ReplyParseError(std::string("'") + key + "' does not sum to 1");
    }
}

}  // namespace

nlohmann::json extract_json_object(std::string_view reply) {
    const auto open = reply.find('{');
    const auto close = reply.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw ReplyParseError("reply contains no JSON object");
    try {
        auto doc = nlohmann::json::parse(reply.substr(open, close - open + 1));
        if (!doc.is_object()) throw ReplyParseError("reply JSON is not an object");
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ReplyParseError(std::string("reply JSON does not parse: ") + e.what());
    }
}

JudgeReply parse_judge_reply(std::string_view reply, const std::optional<std::vector<std::string>>& roster) {
    const auto doc = extract_json_object(reply);
    if (!doc.contains("suspects") || !doc["suspects"].is_array()) throw ReplyParseError("reply has no suspect list");
    std::vector<std::string> names;
    for (const auto& s : doc["suspects"]) {
        if (!s.is_string()) throw ReplyParseError("suspect names must be strings");
        names.push_back(s.get<std::string>());
    }
    auto culprit = probability_list(doc, "probabilities");
    auto distractor = probability_list(doc, "distractor_probabilities");
    if (culprit.size() != names.size() || distractor.size() != names.size())
        throw ReplyParseError("probability lists do not match the suspect list");
    if (names.size() < 2) throw ReplyParseError("reply names fewer than two suspects");

    if (roster) {
        if (names.size() != roster->size())
            throw ReplyParseError("reply lists " + std::to_string(names.size()) + " suspects, the roster has " +
                                  std::to_string(roster->size()));
        std::vector<double> c(roster->size()), d(roster->size());
        std::vector<bool> seen(roster->size(), false);
        for (std::size_t i = 0; i < names.size(); ++i) {
            std::size_t slot = roster->size();
            for (std::size_t k = 0; k < roster->size(); ++k)
                if (normalized_name((*roster)[k]) == normalized_name(names[i])) slot = k;
            if (slot == roster->size()) throw ReplyParseError("reply names unknown suspect '" + names[i] + "'");
            if (seen[slot]) throw ReplyParseError("reply repeats suspect '" + names[i] + "'");
            seen[slot] = true;
            c[slot] = culprit[i];
            d[slot] = distractor[i];
        }
        return {*roster, to_belief(std::move(c), "probabilities"),
                to_belief(std::move(d), "distractor_probabilities")};
    }
    try {
        SuspectRoster check(names, 0);
    } catch (const std::invalid_argument& e) {
        throw ReplyParseError(std::string("reply suspect list is unusable: ") + e.what());
    }
    return {std::move(names), to_belief(std::move(culprit), "probabilities"),
            to_belief(std::move(distractor), "distractor_probabilities")};
}

ProbVector parse_fill_reply(std::string_view reply, std::size_t num_options) {
    const auto doc = extract_json_object(reply);
    auto probs = probability_list(doc, "probabilities");
    if (probs.size() != num_options)
        throw ReplyParseError("reply gives " + std::to_string(probs.size()) + " probabilities for " +
                              std::to_string(num_options) + " options");
    if (doc.contains("options")) {
        if (!doc["options"].is_array() || doc["options"].size() != num_options)
            throw ReplyParseError("option labels do not match the options offered");
        for (std::size_t i = 0; i < num_options; ++i) {
            const auto& label = doc["options"][i];
            if (!label.is_string() || label.get<std::string>() != std::string(1, static_cast<char>('a' + i)))
                throw ReplyParseError("option labels must be a, b, c, ... in order");
        }
    }
    return to_belief(std::move(probs), "probabilities");
}

}  // namespace fairplay::llm
