#pragma once

// Cross-entropy uninformedness and the surprise bands built on it. All values
// are in nats.

#include <cstddef>
#include <span>
#include <string>

#include "fairplay/core/prob_vector.hpp"

namespace fairplay::measures {

struct MeasureConfig {
    double log_floor = 1e-9;          // probabilities are clamped to this before the log
    double epsilon_external = 0.0;    // eps_ex
    double epsilon_intel = 0.0;       // eps_intel
    double epsilon_surprise = 0.0;    // eps_surprise
    double delta_surprise = 0.0;      // delta_surprise

    // Throws std::invalid_argument for negative thresholds or a floor outside (0, 1e-3].
    void validate() const;
};

// H(reference; reader) = -sum_y reference_y * log(max(reader_y, floor)).
double uninformedness(std::span<const double> reference, std::span<const double> reader, double log_floor);
double uninformedness(const ProbVector& reference, const ProbVector& reader, const MeasureConfig& config);

struct SurpriseBands {
    bool weak = false;    // H >= ln|Y| - eps_surprise
    bool strong = false;  // H >= ln|Y| + delta_surprise

    // "not-surprised", "weakly-surprised" or "strongly-surprised".
    std::string label() const;
};

SurpriseBands classify_surprise(double expected_uninformedness, std::size_t roster_size, const MeasureConfig& config);

}  // namespace fairplay::measures
