#include "fairplay/measures/verification.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fairplay/core/story_io.hpp"
#include "fairplay/measures/tradeoff.hpp"

namespace fairplay::measures {

std::string LogGapBoundReport::summary() const {
    std::ostringstream s;
    s << "measured log gap " << format_double(measured_epsilon);
    if (!precondition_holds) {
        s << " exceeds epsilon " << format_double(epsilon) << "; precondition fails";
        if (witness) {
            s << " at prefix [";
            for (std::size_t i = 0; i < witness->prefix.size(); ++i) s << (i ? " " : "") << witness->prefix[i];
            s << "], culprit " << witness->culprit << " (" << format_double(witness->reference_probability) << " vs "
              << format_double(witness->reader_probability) << ")";
        }
        return s.str();
    }
    s << ", max C-Eff gap " << format_double(max_ceff_gap) << (bound_holds ? " <= " : " > ") << "2 eps = "
      << format_double(2.0 * epsilon);
    return s.str();
}

LogGapBoundReport verify_log_gap_bound(const Scenario& scenario, BeliefTracker& reference, BeliefTracker& reader,
                                       std::optional<double> epsilon, double log_floor) {
    LogGapBoundReport report;
    BeliefTracker* readers[] = {&reference, &reader};

    walk_prefix_tree(scenario, readers,
                     [&](std::span<const Clue> prefix, double, std::span<const double>,
                         std::span<BeliefTracker* const> rs) {
                         const auto a = rs[0]->belief();
                         const auto b = rs[1]->belief();
                         for (SuspectIndex y = 0; y < a.size(); ++y) {
                             double gap = 0.0;
                             if (a[y] == 0.0 && b[y] == 0.0) {
                                 gap = 0.0;
                             } else if (a[y] == 0.0 || b[y] == 0.0) {
                                 gap = std::numeric_limits<double>::infinity();
                             } else {
                                 gap = std::abs(std::log(b[y]) - std::log(a[y]));
                             }
                             if (gap > report.measured_epsilon || (!report.witness && gap > 0.0)) {
                                 report.measured_epsilon = std::max(report.measured_epsilon, gap);
                                 report.witness =
                                     LogGapWitness{ClueSequence(prefix.begin(), prefix.end()), y, a[y], b[y]};
                             }
                         }
                     });

    report.epsilon = epsilon.value_or(report.measured_epsilon);
    report.precondition_holds = report.measured_epsilon <= report.epsilon;
    if (!report.precondition_holds) return report;

    ExpectationOptions options;
    options.mode = ExpectationMode::Exact;
    options.log_floor = log_floor;
    const auto h = expected_uninformedness(scenario, readers, options);
    const auto ref = clue_effectiveness_series(h.per_reader[0]);
    const auto other = clue_effectiveness_series(h.per_reader[1]);
    report.bound_holds = true;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double gap = std::abs(other[i] - ref[i]);
        report.ceff_gaps.push_back(gap);
        report.max_ceff_gap = std::max(report.max_ceff_gap, gap);
        if (gap > 2.0 * report.epsilon + kBoundSlack) report.bound_holds = false;
    }
    return report;
}

LogGapBoundReport verify_lemma_intelligence(const Scenario& scenario, BeliefTracker& reader,
                                            std::optional<double> epsilon_log, double log_floor) {
    auto brilliant = scenario.make_reader(ReaderKind::Brilliant);
    return verify_log_gap_bound(scenario, *brilliant, reader, epsilon_log, log_floor);
}

LogGapBoundReport verify_genre_proposition(const GenreMixture& mixture, std::size_t component,
                                           std::optional<double> epsilon_g, double log_floor) {
    const auto scenario = Scenario::genre(mixture, component);
    auto own = scenario.make_reader(ReaderKind::KnowItAll);
    auto genre = scenario.make_reader(ReaderKind::Brilliant);
    return verify_log_gap_bound(scenario, *own, *genre, epsilon_g, log_floor);
}

}  // namespace fairplay::measures
