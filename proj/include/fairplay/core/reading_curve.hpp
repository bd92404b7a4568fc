#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fairplay/core/prob_vector.hpp"
#include "fairplay/core/story.hpp"

namespace fairplay {

struct CurveStep {
    std::size_t prefix_length;
    ProbVector belief;
};

// Per-prefix beliefs of one reader over one story, M(0), M(1), ..., M(N).
// Step 0 is mandatory and prefix lengths strictly increase.
class ReadingCurve {
public:
    ReadingCurve(std::string reader_label, std::vector<CurveStep> steps);

    const std::string& reader_label() const noexcept { return label_; }
    const std::vector<CurveStep>& steps() const noexcept { return steps_; }
    std::size_t num_suspects() const noexcept { return steps_.front().belief.size(); }
    std::size_t last_prefix_length() const noexcept { return steps_.back().prefix_length; }

    // Belief at prefix length i, if that step is present.
    const ProbVector* at_prefix(std::size_t i) const;

    friend bool operator==(const ReadingCurve&, const ReadingCurve&) = default;

private:
    std::string label_;
    std::vector<CurveStep> steps_;
};

// M^y(i) for every step of the curve, in step order.
std::vector<double> curve_for(const ReadingCurve& curve, SuspectIndex suspect);

}  // namespace fairplay
