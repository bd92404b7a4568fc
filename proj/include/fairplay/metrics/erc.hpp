#pragma once

// Expected revelation content: how well the clues after the revelation point
// predict the clues before it.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairplay/synthetic/world.hpp"

namespace fairplay::metrics {

// Exact ERC on a synthetic world. For each position j < r,
//   gap_j = E[p(c_j | C_{r..N})] - E[p(c_j)]
// with expectations under the world. `mean` averages over the r - 1 positions,
// `sum` adds them up; both are 0 when r = 1.
struct ErcExact {
    std::vector<double> per_position;  // index 0 = position 1
    double mean = 0.0;
    double sum = 0.0;
};

// Throws std::out_of_range unless 1 <= r <= N, and std::invalid_argument when
// the world's sequence space is too large to enumerate.
ErcExact erc_exact(const synthetic::SyntheticWorld& world, std::size_t revelation);

enum class ErcSetting {
    AfterRevelation,   // "AR": paragraphs r..N are shown after the mask
    BeforeRevelation,  // "BR": paragraphs p+1..r-1 are shown after the mask
};
std::string to_string(ErcSetting s);

// One multiple-choice question: the judge saw the options for masked position
// `position` and picked one. Each option carries the culprit of the story it
// leads to.
struct ErcChoiceRecord {
    std::size_t position = 0;
    ErcSetting setting = ErcSetting::AfterRevelation;
    std::size_t picked = 0;
    std::size_t true_option = 0;
    std::vector<std::optional<std::string>> option_culprits;
    std::string true_culprit;
};

// Whether a pick counts as correct: the original option, or any option whose
// story ends with the same culprit. Throws std::invalid_argument when the
// picked option has no culprit annotation.
bool erc_choice_correct(const ErcChoiceRecord& record);

// Probability that a uniformly random pick is counted correct.
double erc_choice_baseline(const ErcChoiceRecord& record);

struct ErcChoiceSummary {
    ErcSetting setting = ErcSetting::AfterRevelation;
    std::size_t records = 0;
    double raw_accuracy = 0.0;   // mean correctness
    double baseline = 0.0;       // mean chance correctness
    double excess = 0.0;         // raw_accuracy - baseline
    double excess_scaled = 0.0;  // N * excess
    double excess_sum = 0.0;     // sum over records of (correct - chance)
};

// Aggregates the records of one setting (others are ignored). Every option
// must carry a culprit annotation. `num_steps` is the story's N.
ErcChoiceSummary erc_multiple_choice(std::span<const ErcChoiceRecord> records, ErcSetting setting,
                                     std::size_t num_steps);

}  // namespace fairplay::metrics
