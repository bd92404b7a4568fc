#include "fairplay/core/reading_curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace fairplay {

ReadingCurve::ReadingCurve(std::string reader_label, std::vector<CurveStep> steps)
    : label_(std::move(reader_label)), steps_(std::move(steps)) {
    if (steps_.empty() || steps_.front().prefix_length != 0)
        throw std::invalid_argument("reading curve must start with the empty-prefix step");
    for (std::size_t i = 1; i < steps_.size(); ++i) {
        if (steps_[i].prefix_length <= steps_[i - 1].prefix_length)
            throw std::invalid_argument("reading curve prefix lengths must strictly increase");
        if (steps_[i].belief.size() != steps_[0].belief.size())
            throw std::invalid_argument("reading curve beliefs must share one roster size");
    }
}

const ProbVector* ReadingCurve::at_prefix(std::size_t i) const {
    auto it = std::lower_bound(steps_.begin(), steps_.end(), i,
                               [](const CurveStep& s, std::size_t v) { return s.prefix_length < v; });
    if (it == steps_.end() || it->prefix_length != i) return nullptr;
    return &it->belief;
}

std::vector<double> curve_for(const ReadingCurve& curve, SuspectIndex suspect) {
    if (suspect >= curve.num_suspects()) throw std::out_of_range("suspect index out of range for curve");
    std::vector<double> out;
    out.reserve(curve.steps().size());
    for (const auto& step : curve.steps()) out.push_back(step.belief[suspect]);
    return out;
}

}  // namespace fairplay
