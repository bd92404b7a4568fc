#include "fairplay/core/story.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace fairplay {

std::string normalized_name(std::string_view s) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

SuspectRoster::SuspectRoster(std::vector<std::string> suspects, SuspectIndex true_culprit,
                             std::optional<SuspectIndex> distractor)
    : suspects_(std::move(suspects)), true_culprit_(true_culprit), distractor_(distractor) {
    if (suspects_.size() < 2) throw std::invalid_argument("a roster needs at least 2 suspects");
    std::set<std::string> seen;
    for (const auto& s : suspects_) {
        if (normalized_name(s).empty()) throw std::invalid_argument("suspect names must be non-empty");
        if (!seen.insert(normalized_name(s)).second)
            throw std::invalid_argument("duplicate suspect name: " + s);
    }
    if (true_culprit_ >= suspects_.size()) throw std::out_of_range("true culprit index out of range");
    if (distractor_) {
        if (*distractor_ >= suspects_.size()) throw std::out_of_range("distractor index out of range");
        if (*distractor_ == true_culprit_) throw std::invalid_argument("distractor must differ from the true culprit");
    }
}

std::optional<SuspectIndex> SuspectRoster::find(std::string_view name) const {
    const auto key = normalized_name(name);
    for (SuspectIndex i = 0; i < suspects_.size(); ++i)
        if (normalized_name(suspects_[i]) == key) return i;
    return std::nullopt;
}

Story::Story(std::vector<std::string> paragraphs, std::optional<SuspectRoster> roster,
             std::optional<std::size_t> revelation_point)
    : paragraphs_(std::move(paragraphs)), roster_(std::move(roster)), revelation_point_(revelation_point) {
    if (paragraphs_.empty()) throw std::invalid_argument("a story needs at least one paragraph");
    if (revelation_point_ && (*revelation_point_ < 1 || *revelation_point_ > paragraphs_.size()))
        throw std::out_of_range("revelation point must satisfy 1 <= r <= N");
}

const std::string& Story::paragraph(std::size_t one_based) const {
    if (one_based < 1 || one_based > paragraphs_.size()) throw std::out_of_range("paragraph index out of range");
    return paragraphs_[one_based - 1];
}

const SuspectRoster& Story::require_roster() const {
    if (!roster_) throw std::logic_error("story has no suspect roster");
    return *roster_;
}

Story Story::with_roster(SuspectRoster roster) const {
    return Story(paragraphs_, std::move(roster), revelation_point_);
}

Story Story::with_revelation_point(std::optional<std::size_t> r) const {
    return Story(paragraphs_, roster_, r);
}

StoryPrefix Story::prefix(std::size_t i) const {
    if (i > paragraphs_.size()) throw std::out_of_range("prefix length exceeds story length");
    return StoryPrefix(this, i);
}

StoryPrefix StoryPrefix::prefix(std::size_t j) const {
    if (j > length_) throw std::out_of_range("prefix length exceeds view length");
    return StoryPrefix(story_, j);
}

std::string StoryPrefix::text() const {
    std::string out;
    for (std::size_t i = 0; i < length_; ++i) {
        if (i) out += "\n\n";
        out += story_->paragraphs()[i];
    }
    return out;
}

}  // namespace fairplay
