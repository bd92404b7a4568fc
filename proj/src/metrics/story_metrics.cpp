#include "fairplay/metrics/story_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairplay::metrics {

GenerationValidity generation_validity(const ProbVector& judge_culprit, const ProbVector& judge_distractor,
                                       const SuspectRoster& roster) {
    if (judge_culprit.size() != roster.size() || judge_distractor.size() != roster.size())
        throw std::invalid_argument("judge vectors must match the roster size");
    GenerationValidity v;
    v.predicted_culprit = judge_culprit.argmax();
    v.predicted_distractor = judge_distractor.argmax();
    v.culprit_confidence = judge_culprit.max();
    v.distractor_confidence = judge_distractor.max();
    if (!(v.culprit_confidence > kClearPrediction)) v.reasons.emplace_back(kNoClearCulprit);
    if (!(v.distractor_confidence > kClearPrediction)) v.reasons.emplace_back(kNoClearDistractor);
    if (v.predicted_culprit == v.predicted_distractor) v.reasons.emplace_back(kSameIdentity);
    v.valid = v.reasons.empty();
    return v;
}

double mean_over_steps(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("curve mean needs at least one step");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double mean_over_steps(const ReadingCurve& curve, SuspectIndex suspect, std::size_t num_steps) {
    if (suspect >= curve.num_suspects()) throw std::out_of_range("suspect index outside the curve");
    std::vector<double> values;
    values.reserve(num_steps);
    for (std::size_t i = 1; i <= num_steps; ++i) {
        const auto* b = curve.at_prefix(i);
        if (!b)
            throw std::invalid_argument("curve '" + curve.reader_label() + "' is missing step " + std::to_string(i));
        values.push_back((*b)[suspect]);
    }
    return mean_over_steps(values);
}

double surprise_score(const ReadingCurve& gullible, SuspectIndex true_culprit, std::size_t num_steps) {
    return mean_over_steps(gullible, true_culprit, num_steps);
}

double coherence_score(const ReadingCurve& know_it_all, SuspectIndex true_culprit, std::size_t num_steps) {
    return mean_over_steps(know_it_all, true_culprit, num_steps);
}

FairPlay fair_play_score(double surprise, double coherence, std::size_t num_steps) {
    if (num_steps == 0) throw std::invalid_argument("fair play needs N >= 1");
    FairPlay fp;
    fp.value = coherence - surprise;
    fp.scaled = static_cast<double>(num_steps) * fp.value;
    // Tiny slack so that exactly one paragraph's worth is not lost to rounding.
    fp.at_least_one_paragraph = fp.value >= 1.0 / static_cast<double>(num_steps) - 1e-12;
    return fp;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

WhiskerStats whisker_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("whisker statistics need at least one value");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    WhiskerStats s;
    s.min = v.front();
    s.max = v.back();
    s.q1 = quantile_sorted(v, 0.25);
    s.median = quantile_sorted(v, 0.5);
    s.q3 = quantile_sorted(v, 0.75);
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr, hi_fence = s.q3 + 1.5 * iqr;
    s.lower_whisker = s.q1;
    s.upper_whisker = s.q3;
    for (double x : v) {
        if (x < lo_fence || x > hi_fence) {
            s.outliers.push_back(x);
            continue;
        }
        s.lower_whisker = std::min(s.lower_whisker, x);
        s.upper_whisker = std::max(s.upper_whisker, x);
    }
    return s;
}

}  // namespace fairplay::metrics
