#pragma once

// Descriptive corpus statistics: story lengths and the most frequent name
// per character role.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fairplay::metrics {

// Whitespace-separated tokens.
std::size_t count_words(std::string_view text);

struct CorpusEntry {
    std::size_t word_count = 0;
    std::map<std::string, std::string> roles;  // role -> character name
};

struct RoleFrequency {
    std::string role;
    std::vector<std::pair<std::string, std::size_t>> counts;  // most frequent first, ties by name
    std::string modal_name;
    double modal_probability = 0.0;
};

struct CorpusStats {
    std::size_t story_count = 0;
    double word_count_mean = 0.0;
    double word_count_std = 0.0;  // population standard deviation
    std::vector<RoleFrequency> roles;
};

// Throws std::invalid_argument for an empty corpus or when a story lacks one
// of `roles`. Names are grouped case- and space-insensitively; the first
// spelling seen is reported.
CorpusStats corpus_statistics(const std::vector<CorpusEntry>& stories, const std::vector<std::string>& roles);

}  // namespace fairplay::metrics
