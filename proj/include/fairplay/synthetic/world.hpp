#pragma once

// Finite two-level whodunit model: a culprit prior and a clue kernel
// p(c_i | culprit, last k clues) with a step index, so that every quantity can
// be computed exactly by enumerating clue sequences.
//
// The conclusive rule maps the final clue to a culprit. Validation requires that
// each culprit's final-step rows only emit clues mapped to that culprit, which
// makes every full sequence with nonzero probability imply exactly one culprit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "fairplay/core/prob_vector.hpp"
#include "fairplay/core/story.hpp"

namespace fairplay::synthetic {

inline constexpr std::size_t kMaxAlphabet = 6;
inline constexpr std::size_t kMaxContextOrder = 2;
inline constexpr double kKernelRowTolerance = 1e-12;

class WorldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SyntheticWorld {
public:
    struct Shape {
        std::vector<std::string> suspects;
        std::vector<std::string> alphabet;
        std::size_t num_steps = 0;
        std::size_t context_order = 1;
    };

    // Builder-style construction: start from a shape, fill rows, then validate().
    explicit SyntheticWorld(Shape shape);

    std::size_t num_suspects() const noexcept { return suspects_.size(); }
    std::size_t num_steps() const noexcept { return num_steps_; }
    std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
    std::size_t context_order() const noexcept { return context_order_; }
    std::size_t num_contexts() const noexcept { return num_contexts_; }
    const std::vector<std::string>& suspects() const noexcept { return suspects_; }
    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }

    const ProbVector& prior() const { return prior_; }
    void set_prior(ProbVector prior);

    // Context index summarizing the last k clues of `preceding`.
    std::size_t context_of(std::span<const Clue> preceding) const;
    // Context reached after appending `next` to a prefix whose context is `ctx`.
    std::size_t advance_context(std::size_t ctx, Clue next) const {
        return next_context_[ctx * alphabet_.size() + static_cast<std::size_t>(next)];
    }
    static constexpr std::size_t kEmptyContext = 0;

    // Kernel row p(. | culprit, context) at 1-based `step`.
    std::span<const double> row(std::size_t step, SuspectIndex culprit, std::size_t context) const;
    double kernel(std::size_t step, SuspectIndex culprit, std::size_t context, Clue clue) const {
        return kernel_[offset(step, culprit, context) + static_cast<std::size_t>(clue)];
    }
    // Rows for every culprit at (step, context): culprit y's row starts
    // y * culprit_stride() entries after the returned pointer.
    const double* rows_at(std::size_t step, std::size_t context) const {
        return kernel_.data() + offset(step, 0, context);
    }
    std::size_t culprit_stride() const noexcept { return num_contexts_ * alphabet_.size(); }
    void set_row(std::size_t step, SuspectIndex culprit, std::size_t context, std::span<const double> probs);
    // Convenience: set the same row for every context.
    void set_row_all_contexts(std::size_t step, SuspectIndex culprit, std::span<const double> probs);

    // Culprit implied by a final clue, if that clue is conclusive.
    std::optional<SuspectIndex> conclusive_culprit(Clue final_clue) const;
    void set_conclusive(Clue final_clue, SuspectIndex culprit);
    // Culprit implied by a full-length sequence (C |- Y).
    SuspectIndex conclusive_rule(std::span<const Clue> full_sequence) const;

    // Main distractor for stories whose culprit is `culprit`, if declared.
    std::optional<SuspectIndex> distractor_of(SuspectIndex culprit) const;
    void set_distractor(SuspectIndex culprit, SuspectIndex distractor);

    // Checks rows, prior and conclusive-rule consistency. Throws WorldError.
    void validate() const;

    // p(culprit, prefix) for every culprit.
    std::vector<double> joint_weights(std::span<const Clue> prefix) const;
    void check_prefix(std::span<const Clue> prefix) const;

    // Number of full-length sequences, |alphabet|^N (saturating).
    std::uint64_t sequence_count() const noexcept;

    SuspectRoster roster_for(SuspectIndex culprit) const;

    // Process-wide unique stamp of the current contents. It changes on every
    // mutation and copy, so derived tables can be cached against it.
    std::uint64_t revision() const noexcept { return revision_.value; }

private:
    struct Revision {
        std::uint64_t value = next();
        Revision() = default;
        Revision(const Revision&) : value(next()) {}
        Revision& operator=(const Revision&) {
            value = next();
            return *this;
        }
        void bump() { value = next(); }
        static std::uint64_t next();
    };

    std::size_t offset(std::size_t step, SuspectIndex culprit, std::size_t context) const {
        if (step < 1 || step > num_steps_ || culprit >= suspects_.size() || context >= num_contexts_)
            throw_bad_index(step, culprit, context);
        return (((step - 1) * suspects_.size() + culprit) * num_contexts_ + context) * alphabet_.size();
    }
    [[noreturn]] void throw_bad_index(std::size_t step, SuspectIndex culprit, std::size_t context) const;

    std::vector<std::string> suspects_;
    std::vector<std::string> alphabet_;
    std::size_t num_steps_;
    std::size_t context_order_;
    std::size_t num_contexts_;
    std::vector<std::size_t> next_context_;  // [ctx * |alphabet| + clue]
    ProbVector prior_;
    std::vector<double> kernel_;
    std::vector<bool> row_set_;
    std::vector<std::optional<SuspectIndex>> conclusive_;
    std::vector<std::optional<SuspectIndex>> distractors_;
    Revision revision_;
};

// Weighted mixture of worlds sharing roster size, N and alphabet: the genre model.
class GenreMixture {
public:
    GenreMixture(std::vector<SyntheticWorld> worlds, ProbVector weights);

    std::size_t size() const noexcept { return worlds_.size(); }
    const SyntheticWorld& world(std::size_t m) const { return worlds_.at(m); }
    const ProbVector& weights() const noexcept { return weights_; }
    std::size_t num_suspects() const noexcept { return worlds_.front().num_suspects(); }
    std::size_t num_steps() const noexcept { return worlds_.front().num_steps(); }
    std::size_t alphabet_size() const noexcept { return worlds_.front().alphabet_size(); }

    // Sum over components of weight * p_m(culprit, prefix).
    std::vector<double> joint_weights(std::span<const Clue> prefix) const;

private:
    std::vector<SyntheticWorld> worlds_;
    ProbVector weights_;
};

struct SampledStory {
    ClueSequence clues;
    SuspectIndex culprit;
};

// Culprit from the prior, then clues stepwise from that culprit's kernel rows.
SampledStory sample_story(const SyntheticWorld& world, std::uint64_t seed);
// Component from the mixture weights first; reports it alongside the story.
SampledStory sample_story(const GenreMixture& mixture, std::uint64_t seed, std::size_t* component = nullptr);

class ZeroProbabilityPrefix : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace fairplay::synthetic
