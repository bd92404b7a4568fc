#pragma once

// Story-level scores computed from reading curves and judge outputs.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairplay/core/prob_vector.hpp"
#include "fairplay/core/reading_curve.hpp"
#include "fairplay/core/story.hpp"

namespace fairplay::metrics {

// A judge prediction is "clear" when its top probability is strictly above this.
inline constexpr double kClearPrediction = 0.5;

inline constexpr const char* kNoClearCulprit = "no clear culprit";
inline constexpr const char* kNoClearDistractor = "no clear distractor";
inline constexpr const char* kSameIdentity = "predicted distractor is the same as the predicted culprit";

struct GenerationValidity {
    bool valid = false;
    double culprit_confidence = 0.0;
    double distractor_confidence = 0.0;
    SuspectIndex predicted_culprit = 0;
    SuspectIndex predicted_distractor = 0;
    std::vector<std::string> reasons;  // empty when valid
};

// Throws std::invalid_argument when a vector does not match the roster size.
GenerationValidity generation_validity(const ProbVector& judge_culprit, const ProbVector& judge_distractor,
                                       const SuspectRoster& roster);

// (1/N) sum_{i=1..N} values[i-1]; `values` must hold exactly N entries.
double mean_over_steps(std::span<const double> values);
// Same on a curve for one suspect; every step 1..N must be present
// (std::invalid_argument otherwise). Step 0 is ignored.
double mean_over_steps(const ReadingCurve& curve, SuspectIndex suspect, std::size_t num_steps);

// S_S from the gullible curve of the true culprit; low means surprising.
double surprise_score(const ReadingCurve& gullible, SuspectIndex true_culprit, std::size_t num_steps);
// S_C from the know-it-all curve of the true culprit.
double coherence_score(const ReadingCurve& know_it_all, SuspectIndex true_culprit, std::size_t num_steps);

struct FairPlay {
    double value = 0.0;             // S_C - S_S
    double scaled = 0.0;            // N * value, in paragraphs
    bool at_least_one_paragraph = false;  // value >= 1/N
};

FairPlay fair_play_score(double surprise, double coherence, std::size_t num_steps);

// Descriptive statistics of one series, quartiles by linear interpolation and
// whiskers at the most extreme points within 1.5 IQR of the box.
struct WhiskerStats {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    double mean = 0.0;
    double lower_whisker = 0.0, upper_whisker = 0.0;
    std::vector<double> outliers;
};

WhiskerStats whisker_stats(std::span<const double> values);

}  // namespace fairplay::metrics
