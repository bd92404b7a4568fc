#pragma once

// Exact detective and reader models on synthetic worlds.

#include <cstddef>
#include <span>
#include <vector>

#include "fairplay/core/prob_vector.hpp"
#include "fairplay/core/reading_curve.hpp"
#include "fairplay/synthetic/world.hpp"

namespace fairplay::synthetic {

// Brilliant detective D1: sums the kernel probability of every continuation
// C_{i+1..N} of the observed prefix into the culprit its full sequence implies.
// Throws ZeroProbabilityPrefix for impossible observations.
ProbVector brilliant_detective(const SyntheticWorld& world, std::span<const Clue> observed);

// p(Y | prefix) by normalizing the forward joint weights; equal to the
// brilliant detective but linear in the prefix length.
ProbVector posterior(const SyntheticWorld& world, std::span<const Clue> observed);
ProbVector posterior(const GenreMixture& mixture, std::span<const Clue> observed);

enum class GullibleVariant {
    AllClues,   // product of per-clue marginal likelihoods
    LastClue,   // only the most recent clue counts
};

// Per-position clue marginals p(c_j = c | y), ignoring how clues depend on one
// another. This is the whole of what the gullible detective knows.
class MarginalClueTable {
public:
    explicit MarginalClueTable(const SyntheticWorld& world);
    explicit MarginalClueTable(const GenreMixture& mixture);

    double operator()(std::size_t step, SuspectIndex culprit, Clue clue) const {
        return table_[((step - 1) * num_suspects_ + culprit) * alphabet_size_ + static_cast<std::size_t>(clue)];
    }
    std::size_t num_suspects() const noexcept { return num_suspects_; }
    std::size_t num_steps() const noexcept { return num_steps_; }

private:
    void add_world(const SyntheticWorld& world, std::span<const double> culprit_weights);

    std::size_t num_suspects_;
    std::size_t num_steps_;
    std::size_t alphabet_size_;
    std::vector<double> table_;
};

// Gullible detective D0: marginal-likelihood scoring of the observed clues,
// normalized. Degenerate evidence (all scores zero) yields a uniform belief.
ProbVector gullible_detective(const MarginalClueTable& marginals, std::span<const Clue> observed,
                              GullibleVariant variant = GullibleVariant::AllClues);
ProbVector gullible_detective(const SyntheticWorld& world, std::span<const Clue> observed,
                              GullibleVariant variant = GullibleVariant::AllClues);

// Know-it-all reader M-inf: marginalizes continuations under the true story
// model. In a single world the text carries exactly the clues.
ProbVector know_it_all_reader(const SyntheticWorld& world, std::span<const Clue> observed);
// Mixture form: with `component` the reader knows which model wrote the story;
// without it the reader only knows the mixture.
ProbVector know_it_all_reader(const GenreMixture& mixture, std::span<const Clue> observed,
                              std::optional<std::size_t> component = std::nullopt);

// Genre detective: Bayesian over both component and culprit.
ProbVector genre_detective(const GenreMixture& mixture, std::span<const Clue> observed);

struct ReaderCurves {
    ReadingCurve gullible;
    ReadingCurve brilliant;
    ReadingCurve know_it_all;
};

// Curves for steps 0..N of one sampled story.
ReaderCurves reading_curves(const SyntheticWorld& world, std::span<const Clue> story,
                            GullibleVariant variant = GullibleVariant::AllClues);
// Story written by `component`; brilliant and gullible readers use the genre.
ReaderCurves reading_curves(const GenreMixture& mixture, std::size_t component, std::span<const Clue> story,
                            GullibleVariant variant = GullibleVariant::AllClues);

}  // namespace fairplay::synthetic
