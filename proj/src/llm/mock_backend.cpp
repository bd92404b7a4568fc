#include "fairplay/llm/mock_backend.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "fairplay/core/random.hpp"
#include "fairplay/llm/prompts.hpp"

namespace fairplay::llm {

namespace {

std::uint64_t hash_text(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ mix_seed(seed);
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return mix_seed(h);
}

double hash_unit(std::string_view s, std::uint64_t seed) {
    return static_cast<double>(hash_text(s, seed) >> 11) * 0x1.0p-53;
}

std::vector<std::string> split_list(const std::string& list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(", ", start);
        if (end == std::string::npos) end = list.size();
        out.push_back(list.substr(start, end - start));
        start = end + 2;
    }
    return out;
}

// "A, B, C and D"
std::string join_names(const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) s += i + 1 == names.size() ? " and " : ", ";
        s += names[i];
    }
    return s;
}

constexpr const char* kIntro = "The suspects gathered at Marlow House: ";

std::optional<std::vector<std::string>> names_from_intro(const std::string& text) {
    const auto pos = text.find(kIntro);
    if (pos == std::string::npos) return std::nullopt;
    const auto start = pos + std::string(kIntro).size();
    const auto end = text.find('.', start);
    std::string list = text.substr(start, end - start);
    const auto last = list.rfind(" and ");
    if (last != std::string::npos) list.replace(last, 5, ", ");
    return split_list(list);
}

std::optional<std::string> find_named(const std::string& text, const std::string& before, const std::string& after,
                                      const std::vector<std::string>& names) {
    for (const auto& n : names)
        if (text.find(before + n + after) != std::string::npos) return n;
    return std::nullopt;
}

std::size_t count_mentions(const std::string& text, const std::string& name) {
    std::size_t count = 0;
    for (auto pos = text.find(name); pos != std::string::npos; pos = text.find(name, pos + name.size())) ++count;
    return count;
}

std::string between(const std::string& text, const std::string& open, const std::string& close) {
    const auto a = text.find(open);
    if (a == std::string::npos) return {};
    const auto start = a + open.size();
    const auto b = text.find(close, start);
    return text.substr(start, b == std::string::npos ? std::string::npos : b - start);
}

std::string write_paragraph(const ChatRequest& req) {
    const auto& instruction = req.messages.at(1).content;
    std::smatch m;
    static const std::regex length_re(R"(There will be (\d+) paragraphs)");
    static const std::regex request_re(R"(Now generate Paragraph (\d+) out of)");
    if (!std::regex_search(instruction, m, length_re)) return "I am not sure how long the story should be.";
    const auto n = static_cast<std::size_t>(std::stoul(m[1]));
    const auto& ask = req.messages.back().content;
    if (!std::regex_search(ask, m, request_re)) return kGenerationAck;
    const auto p = static_cast<std::size_t>(std::stoul(m[1]));

    std::vector<std::string> names = kMockDefaultSuspects;
    const auto given = instruction.find("\nThe suspects are: ");
    if (given != std::string::npos) {
        auto list = instruction.substr(given + 19);
        if (!list.empty() && list.back() == '.') list.pop_back();
        names = split_list(list);
    }
    std::string earlier;
    for (std::size_t i = 3; i + 1 < req.messages.size(); ++i)
        if (req.messages[i].role == "assistant") earlier += req.messages[i].content + "\n";
    if (auto intro = names_from_intro(earlier)) names = *intro;
    const std::size_t k = names.size();

    const std::uint64_t nonce = req.nonce;
    std::string distractor = find_named(earlier, "Suspicion falls on ", ",", names)
                                 .value_or(names[hash_text("distractor", nonce) % k]);
    std::vector<std::string> others;
    for (const auto& s : names)
        if (s != distractor) others.push_back(s);
    const std::string culprit = find_named(earlier, "belonging to ", " ", names)
                                    .value_or(others[hash_text("culprit", nonce) % others.size()]);

    const std::size_t commit = std::max<std::size_t>(2, (n + 1) / 2);
    const std::size_t confess = std::max(commit + 1, n - 1);
    std::vector<std::string> parts;
    if (p == 1) parts.push_back(kIntro + join_names(names) + ".");
    if (p == 2) parts.push_back("Suspicion falls on " + distractor + ", who was seen leaving the study with muddy boots.");
    if (p == commit) parts.push_back("A torn glove belonging to " + culprit + " lay behind the curtain.");
    if (p >= confess) {
        parts.push_back(p == n ? culprit + " confessed before the magistrate, and " + distractor +
                                     " was cleared of every suspicion."
                               : "At last the inspector laid out the evidence, and " + culprit + " confessed.");
    }
    if (parts.empty()) {
        const auto pick = hash_text("filler" + std::to_string(p), nonce);
        const std::string& someone = names[(pick >> 8) % k];
        switch (pick % 4) {
            case 0: parts.push_back(distractor + " insisted on an alibi that nobody could confirm."); break;
            case 1: parts.push_back("The inspector questioned " + someone + " about the missing key."); break;
            case 2: parts.push_back("Rain hammered the windows as " + someone + " paced the hall."); break;
            default: parts.push_back("A letter signed by " + someone + " turned up in the library."); break;
        }
    }
    std::string out;
    for (const auto& s : parts) out += (out.empty() ? "" : " ") + s;
    return out;
}

std::vector<double> rounded(std::vector<double> w) {
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x = std::round(x / total * 1000.0) / 1000.0;
    return w;
}

std::string judge_culprits(const std::string& prompt) {
    const std::string story = between(prompt, "## BEGINNING OF STORY ##\n\n", "\n\n## END OF STORY ##");
    std::vector<std::string> names = kMockDefaultSuspects;
    static const std::string list_head = "The suspects are: ";
    const auto listed = prompt.find(list_head);
    if (listed != std::string::npos && listed < prompt.find("## BEGINNING OF STORY ##"))
        names = split_list(between(prompt, list_head, ". Please do not change"));
    else if (auto intro = names_from_intro(story))
        names = *intro;
    const std::size_t k = names.size();

    std::vector<double> mentions(k);
    for (std::size_t i = 0; i < k; ++i)
        mentions[i] = 1.0 + static_cast<double>(count_mentions(story, names[i])) +
                      2.0 * static_cast<double>(count_mentions(story, "Suspicion falls on " + names[i]));
    const auto confessed = find_named(story, "", " confessed", names);
    std::vector<double> culprit = mentions, distractor = mentions;
    if (confessed) {
        const auto x = static_cast<std::size_t>(std::find(names.begin(), names.end(), *confessed) - names.begin());
        auto y = find_named(story, "Suspicion falls on ", ",", names);
        std::size_t d = 0;
        if (y && *y != *confessed) {
            d = static_cast<std::size_t>(std::find(names.begin(), names.end(), *y) - names.begin());
        } else {
            d = x == 0 ? 1 : 0;
            for (std::size_t i = 0; i < k; ++i)
                if (i != x && mentions[i] > mentions[d]) d = i;
        }
        const double rest = 0.15 / static_cast<double>(k - 1);
        for (std::size_t i = 0; i < k; ++i) {
            culprit[i] = i == x ? 0.85 : rest;
            distractor[i] = i == d ? 0.85 : rest;
        }
    }
    nlohmann::json reply = {{"suspects", names},
                            {"probabilities", rounded(culprit)},
                            {"distractor_probabilities", rounded(distractor)}};
    return "```json\n" + reply.dump() + "\n```";
}

std::string judge_fill(const std::string& prompt, std::uint64_t nonce) {
    const std::string story = between(prompt, "## BEGINNING OF STORY ##\n\n", "\n\n## END OF STORY ##");
    const std::string list = between(prompt, "The optional paragraphs are:\n\n", "\x01");
    std::vector<std::string> options;
    for (std::size_t start = 0; start < list.size();) {
        auto end = list.find("\n\n", start);
        if (end == std::string::npos) end = list.size();
        options.push_back(list.substr(start, end - start));
        start = end + 2;
    }
    static const std::regex confession_re(R"(([A-Z][A-Za-z]*(?: [A-Z][A-Za-z]*)*) confessed)");
    std::smatch m;
    std::optional<std::string> confessed;
    if (std::regex_search(story, m, confession_re)) confessed = m[1];
    static const std::regex clue_re(R"(belonging to ([A-Z][A-Za-z]*(?: [A-Z][A-Za-z]*)*) lay)");

    std::vector<double> w;
    for (const auto& option : options) {
        double score = 1.0 + hash_unit(option + prompt, nonce);
        if (confessed && std::regex_search(option, m, clue_re)) score = m[1] == *confessed ? score + 6.0 : 0.2;
        w.push_back(score);
    }
    nlohmann::json labels = nlohmann::json::array();
    for (std::size_t i = 0; i < options.size(); ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
    return nlohmann::json({{"options", labels}, {"probabilities", rounded(w)}}).dump();
}

}  // namespace

std::string MockBackend::complete(const ChatRequest& request) {
    if (request.messages.empty()) throw BackendError("mock backend got an empty request");
    if (request.messages.front().role == "system" && request.messages.front().content == kSystemPrompt &&
        request.messages.size() >= 2)
        return write_paragraph(request);
    // Repair turns repeat the original prompt's request; answer that prompt.
    const auto& prompt = request.messages.front().content;
    if (prompt.find(kMissingMarker) != std::string::npos &&
        prompt.find("The optional paragraphs are:") != std::string::npos)
        return judge_fill(prompt, request.nonce);
    if (prompt.find("likelihood estimates for the true and distracting culprit") != std::string::npos)
        return judge_culprits(prompt);
    return "I can only help with detective stories.";
}

}  // namespace fairplay::llm
