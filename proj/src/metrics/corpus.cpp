#include "fairplay/metrics/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "fairplay/core/story.hpp"

namespace fairplay::metrics {

std::size_t count_words(std::string_view text) {
    std::size_t n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        const bool space = std::isspace(c) != 0;
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

CorpusStats corpus_statistics(const std::vector<CorpusEntry>& stories, const std::vector<std::string>& roles) {
    if (stories.empty()) throw std::invalid_argument("corpus statistics need at least one story");
    CorpusStats s;
    s.story_count = stories.size();
    const auto n = static_cast<double>(stories.size());
    for (const auto& e : stories) s.word_count_mean += static_cast<double>(e.word_count) / n;
    double var = 0.0;
    for (const auto& e : stories) {
        const double d = static_cast<double>(e.word_count) - s.word_count_mean;
        var += d * d / n;
    }
    s.word_count_std = std::sqrt(var);

    for (const auto& role : roles) {
        RoleFrequency f;
        f.role = role;
        std::map<std::string, std::size_t> index;  // normalized name -> slot in counts
        for (const auto& e : stories) {
            const auto it = e.roles.find(role);
            if (it == e.roles.end()) throw std::invalid_argument("a story has no annotation for role '" + role + "'");
            const auto key = normalized_name(it->second);
            const auto [pos, fresh] = index.emplace(key, f.counts.size());
            if (fresh) f.counts.emplace_back(it->second, 0);
            ++f.counts[pos->second].second;
        }
        std::stable_sort(f.counts.begin(), f.counts.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        f.modal_name = f.counts.front().first;
        f.modal_probability = static_cast<double>(f.counts.front().second) / n;
        s.roles.push_back(std::move(f));
    }
    return s;
}

}  // namespace fairplay::metrics
