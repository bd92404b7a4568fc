#pragma once

// Executable checks of the two appendix results: a reader that stays within
// eps (in log-probability) of the brilliant detective has clue effectiveness
// within 2 eps of it, and a genre close to its component yields external
// coherence.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fairplay/measures/enumeration.hpp"

namespace fairplay::measures {

struct LogGapWitness {
    ClueSequence prefix;
    SuspectIndex culprit = 0;
    double reference_probability = 0.0;
    double reader_probability = 0.0;
};

struct LogGapBoundReport {
    // Largest |log p_reader - log p_reference| over positive-probability prefixes
    // and all culprits (infinite when exactly one of the two is zero).
    double measured_epsilon = 0.0;
    double epsilon = 0.0;                     // the epsilon the bound is asserted with
    bool precondition_holds = false;
    std::optional<LogGapWitness> witness;     // where the largest gap occurs
    std::vector<double> ceff_gaps;            // |C-Eff_reader(i) - C-Eff_reference(i)|, index 0 = step 1
    double max_ceff_gap = 0.0;
    bool bound_holds = false;                 // every gap <= 2 eps (only meaningful with the precondition)

    std::string summary() const;
};

// Compares two readers on the scenario's prefix tree (exact enumeration only).
// With `epsilon` unset, the measured epsilon is used.
LogGapBoundReport verify_log_gap_bound(const Scenario& scenario, BeliefTracker& reference, BeliefTracker& reader,
                                       std::optional<double> epsilon, double log_floor = 1e-9);

// Reader M against the brilliant detective of the scenario.
LogGapBoundReport verify_lemma_intelligence(const Scenario& scenario, BeliefTracker& reader,
                                            std::optional<double> epsilon_log, double log_floor = 1e-9);

// The component's own detective against the genre detective, on stories
// written by that component.
LogGapBoundReport verify_genre_proposition(const GenreMixture& mixture, std::size_t component,
                                           std::optional<double> epsilon_g, double log_floor = 1e-9);

}  // namespace fairplay::measures
