#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <span>
#include <string>
#include <vector>

namespace fairplay {

using SuspectIndex = std::size_t;

// Lower-cased name with runs of whitespace collapsed and trimmed; the key used
// wherever suspect names are compared.
std::string normalized_name(std::string_view name);

// Ordered suspect names with the true culprit and (optionally) the main distractor.
// Order is fixed at construction: judge prompts and belief vectors depend on it.
class SuspectRoster {
public:
    SuspectRoster(std::vector<std::string> suspects, SuspectIndex true_culprit,
                  std::optional<SuspectIndex> distractor = std::nullopt);

    std::size_t size() const noexcept { return suspects_.size(); }
    const std::vector<std::string>& suspects() const noexcept { return suspects_; }
    const std::string& name(SuspectIndex i) const { return suspects_.at(i); }
    SuspectIndex true_culprit() const noexcept { return true_culprit_; }
    std::optional<SuspectIndex> distractor() const noexcept { return distractor_; }

    // Case- and whitespace-insensitive lookup.
    std::optional<SuspectIndex> find(std::string_view name) const;

    friend bool operator==(const SuspectRoster&, const SuspectRoster&) = default;

private:
    std::vector<std::string> suspects_;
    SuspectIndex true_culprit_;
    std::optional<SuspectIndex> distractor_;
};

class StoryPrefix;

// A story x_1..x_N. The roster is absent for freshly generated stories until a
// judge has named the suspects.
class Story {
public:
    explicit Story(std::vector<std::string> paragraphs, std::optional<SuspectRoster> roster = std::nullopt,
                   std::optional<std::size_t> revelation_point = std::nullopt);

    std::size_t size() const noexcept { return paragraphs_.size(); }
    const std::vector<std::string>& paragraphs() const noexcept { return paragraphs_; }
    const std::string& paragraph(std::size_t one_based) const;
    const std::optional<SuspectRoster>& roster() const noexcept { return roster_; }
    // 1-based revelation paragraph r.
    std::optional<std::size_t> revelation_point() const noexcept { return revelation_point_; }

    const SuspectRoster& require_roster() const;

    Story with_roster(SuspectRoster roster) const;
    Story with_revelation_point(std::optional<std::size_t> r) const;

    // View over x_1..x_i; i = 0 is the empty prefix.
    StoryPrefix prefix(std::size_t i) const;

    friend bool operator==(const Story&, const Story&) = default;

private:
    std::vector<std::string> paragraphs_;
    std::optional<SuspectRoster> roster_;
    std::optional<std::size_t> revelation_point_;
};

// Non-owning prefix view; the story must outlive it.
class StoryPrefix {
public:
    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }
    std::span<const std::string> paragraphs() const noexcept {
        return std::span<const std::string>(story_->paragraphs()).first(length_);
    }
    const Story& story() const noexcept { return *story_; }
    const std::optional<SuspectRoster>& roster() const noexcept { return story_->roster(); }

    StoryPrefix prefix(std::size_t j) const;

    // Paragraphs joined by blank lines, as shown to judge models.
    std::string text() const;

    friend bool operator==(const StoryPrefix& a, const StoryPrefix& b) {
        return a.story_ == b.story_ && a.length_ == b.length_;
    }

private:
    friend class Story;
    StoryPrefix(const Story* story, std::size_t length) : story_(story), length_(length) {}

    const Story* story_;
    std::size_t length_;
};

// Ordered clue identifiers (symbols in synthetic mode). At most one clue per
// paragraph position, so a sequence is indexed by position directly.
using Clue = int;
using ClueSequence = std::vector<Clue>;

}  // namespace fairplay
