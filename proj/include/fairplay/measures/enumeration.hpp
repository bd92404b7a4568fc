#pragma once

// Readers as incremental belief trackers, and expectations over story prefixes
// drawn from the story model, either by walking the whole prefix tree or by
// Monte-Carlo over sampled stories.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fairplay/synthetic/detectives.hpp"
#include "fairplay/synthetic/world.hpp"

namespace fairplay::measures {

using synthetic::GenreMixture;
using synthetic::GullibleVariant;
using synthetic::SyntheticWorld;

// A reader evaluated along a clue sequence: push/pop extend and shrink the
// current prefix, belief() is the normalized belief for it.
class BeliefTracker {
public:
    virtual ~BeliefTracker() = default;
    virtual void reset() = 0;
    virtual void push(Clue clue) = 0;
    virtual void pop() = 0;
    virtual std::span<const double> belief() const = 0;
    virtual std::unique_ptr<BeliefTracker> clone_fresh() const = 0;
};

// Exact posterior under a world; mass() is p(prefix) under that world and
// joint() holds p(y, prefix). A zero-mass prefix reports a uniform belief.
class WorldPosteriorTracker final : public BeliefTracker {
public:
    explicit WorldPosteriorTracker(const SyntheticWorld& world);
    void reset() override;
    void push(Clue clue) override;
    void pop() override;
    std::span<const double> belief() const override { return frames_.back().belief; }
    std::unique_ptr<BeliefTracker> clone_fresh() const override;
    double mass() const noexcept { return frames_.back().mass; }
    std::span<const double> joint() const noexcept { return frames_.back().joint; }

private:
    struct Frame {
        std::vector<double> joint;
        std::vector<double> belief;
        double mass;
        std::size_t context;
    };
    const SyntheticWorld* world_;
    std::vector<Frame> frames_;
};

// Exact posterior under a genre mixture (component marginalized out).
class MixturePosteriorTracker final : public BeliefTracker {
public:
    explicit MixturePosteriorTracker(const GenreMixture& mixture);
    void reset() override;
    void push(Clue clue) override;
    void pop() override;
    std::span<const double> belief() const override { return beliefs_.back(); }
    std::unique_ptr<BeliefTracker> clone_fresh() const override;

private:
    void refresh();
    const GenreMixture* mixture_;
    std::vector<WorldPosteriorTracker> components_;
    std::vector<std::vector<double>> beliefs_;
};

class GullibleTracker final : public BeliefTracker {
public:
    GullibleTracker(std::shared_ptr<const synthetic::MarginalClueTable> marginals, GullibleVariant variant);
    void reset() override;
    void push(Clue clue) override;
    void pop() override;
    std::span<const double> belief() const override { return beliefs_.back(); }
    std::unique_ptr<BeliefTracker> clone_fresh() const override;

private:
    std::shared_ptr<const synthetic::MarginalClueTable> marginals_;
    GullibleVariant variant_;
    std::vector<std::vector<double>> scores_;
    std::vector<std::vector<double>> beliefs_;
};

// Wraps another reader and scales its belief for culprit y by exp(u), with u
// uniform in [-log_magnitude/2, log_magnitude/2] drawn from a hash of (seed, prefix, y),
// then renormalizes. Each renormalized belief stays within a factor exp(+-log_magnitude)
// of the wrapped one. Deterministic per prefix.
class PerturbedTracker final : public BeliefTracker {
public:
    PerturbedTracker(std::unique_ptr<BeliefTracker> base, std::uint64_t seed, double log_magnitude);
    void reset() override;
    void push(Clue clue) override;
    void pop() override;
    std::span<const double> belief() const override { return beliefs_.back(); }
    std::unique_ptr<BeliefTracker> clone_fresh() const override;

private:
    void refresh();
    std::unique_ptr<BeliefTracker> base_;
    std::uint64_t seed_;
    double log_magnitude_;
    std::vector<std::uint64_t> hashes_;
    std::vector<std::vector<double>> beliefs_;
};

enum class ReaderKind { Gullible, Brilliant, KnowItAll };
std::string to_string(ReaderKind kind);

// Who writes the stories and what each idealized reader knows.
//  - single world: the world is both the story model and the clue model;
//  - genre: stories come from one mixture component (known to the know-it-all),
//    while the brilliant and gullible detectives reason with the whole genre.
class Scenario {
public:
    static Scenario single_world(const SyntheticWorld& world, GullibleVariant variant = GullibleVariant::AllClues);
    static Scenario genre(const GenreMixture& mixture, std::size_t component,
                          GullibleVariant variant = GullibleVariant::AllClues);

    const SyntheticWorld& story_model() const noexcept { return *story_model_; }
    std::size_t num_suspects() const noexcept { return story_model_->num_suspects(); }
    std::size_t num_steps() const noexcept { return story_model_->num_steps(); }
    std::size_t alphabet_size() const noexcept { return story_model_->alphabet_size(); }

    std::unique_ptr<BeliefTracker> make_reader(ReaderKind kind) const;
    std::unique_ptr<WorldPosteriorTracker> make_story_model_tracker() const;

    // Number of nodes in the prefix tree, sum_{i<=N} |alphabet|^i (saturating).
    std::uint64_t prefix_space() const noexcept;

private:
    Scenario() = default;
    std::shared_ptr<const SyntheticWorld> story_model_;
    std::shared_ptr<const GenreMixture> genre_;
    std::shared_ptr<const synthetic::MarginalClueTable> marginals_;
    GullibleVariant variant_ = GullibleVariant::AllClues;
};

enum class ExpectationMode { Exact, Sampled, Auto };

// Prefix spaces up to this size are enumerated exactly in Auto mode.
inline constexpr std::uint64_t kExactPrefixLimit = 1'000'000;

struct ExpectationOptions {
    ExpectationMode mode = ExpectationMode::Auto;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
    double log_floor = 1e-9;
};

// E_{X_1..i ~ SM}[ H(M_inf(i); M(i)) ] for i = 0..N, one series per reader.
struct ExpectedUninformedness {
    std::vector<std::vector<double>> per_reader;  // [reader][i]
    ExpectationMode mode_used = ExpectationMode::Exact;
    std::size_t samples_used = 0;                  // 0 in exact mode
};

ExpectedUninformedness expected_uninformedness(const Scenario& scenario,
                                               std::span<BeliefTracker* const> readers,
                                               const ExpectationOptions& options);

// C-Eff(i) = E[H(i-1)] - E[H(i)] for i = 1..N, from one uninformedness series
// (index 0 of the result is step 1).
std::vector<double> clue_effectiveness_series(std::span<const double> expected_h);

// C-Eff of one idealized reader at 1-based `step`. Sampled mode with zero
// samples throws std::invalid_argument.
double clue_effectiveness(const Scenario& scenario, ReaderKind kind, std::size_t step,
                          const ExpectationOptions& options = {});

// Visits every prefix (including the empty one) with positive probability under
// the story model, depth-first. `readers` are pushed along the walk.
using PrefixVisitor =
    std::function<void(std::span<const Clue> prefix, double probability, std::span<const double> know_it_all,
                       std::span<BeliefTracker* const> readers)>;
void walk_prefix_tree(const Scenario& scenario, std::span<BeliefTracker* const> readers, const PrefixVisitor& visit);

}  // namespace fairplay::measures
