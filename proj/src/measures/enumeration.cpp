#include "fairplay/measures/enumeration.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fairplay/core/random.hpp"
#include "fairplay/measures/uninformedness.hpp"

namespace fairplay::measures {

namespace {

void normalize_into(std::span<const double> weights, std::vector<double>& out) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    out.resize(weights.size());
    if (!(total > 0.0)) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(weights.size()));
        return;
    }
    for (std::size_t y = 0; y < weights.size(); ++y) out[y] = weights[y] / total;
}

}  // namespace

WorldPosteriorTracker::WorldPosteriorTracker(const SyntheticWorld& world) : world_(&world) {
    reset();
}

void WorldPosteriorTracker::reset() {
    frames_.clear();
    Frame root;
    root.joint.assign(world_->prior().weights().begin(), world_->prior().weights().end());
    root.belief = root.joint;
    root.mass = 1.0;
    root.context = SyntheticWorld::kEmptyContext;
    frames_.push_back(std::move(root));
}

void WorldPosteriorTracker::push(Clue clue) {
    const std::size_t step = frames_.size();
    if (step > world_->num_steps()) throw std::out_of_range("clue prefix longer than the world's N");
    const Frame& prev = frames_.back();
    Frame next;
    next.joint.resize(prev.joint.size());
    for (SuspectIndex y = 0; y < prev.joint.size(); ++y)
        next.joint[y] = prev.joint[y] == 0.0 ? 0.0 : prev.joint[y] * world_->kernel(step, y, prev.context, clue);
    next.mass = std::accumulate(next.joint.begin(), next.joint.end(), 0.0);
    normalize_into(next.joint, next.belief);
    next.context = world_->advance_context(prev.context, clue);
    frames_.push_back(std::move(next));
}

void WorldPosteriorTracker::pop() {
    if (frames_.size() <= 1) throw std::logic_error("pop on an empty prefix");
    frames_.pop_back();
}

std::unique_ptr<BeliefTracker> WorldPosteriorTracker::clone_fresh() const {
    return std::make_unique<WorldPosteriorTracker>(*world_);
}

MixturePosteriorTracker::MixturePosteriorTracker(const GenreMixture& mixture) : mixture_(&mixture) {
    for (std::size_t m = 0; m < mixture.size(); ++m) components_.emplace_back(mixture.world(m));
    reset();
}

void MixturePosteriorTracker::reset() {
    for (auto& c : components_) c.reset();
    beliefs_.clear();
    refresh();
}

void MixturePosteriorTracker::refresh() {
    std::vector<double> total(mixture_->num_suspects(), 0.0);
    for (std::size_t m = 0; m < components_.size(); ++m) {
        const auto joint = components_[m].joint();
        for (SuspectIndex y = 0; y < total.size(); ++y) total[y] += mixture_->weights()[m] * joint[y];
    }
    std::vector<double> belief;
    normalize_into(total, belief);
    beliefs_.push_back(std::move(belief));
}

void MixturePosteriorTracker::push(Clue clue) {
    for (auto& c : components_) c.push(clue);
    refresh();
}

void MixturePosteriorTracker::pop() {
    if (beliefs_.size() <= 1) throw std::logic_error("pop on an empty prefix");
    for (auto& c : components_) c.pop();
    beliefs_.pop_back();
}

std::unique_ptr<BeliefTracker> MixturePosteriorTracker::clone_fresh() const {
    return std::make_unique<MixturePosteriorTracker>(*mixture_);
}

GullibleTracker::GullibleTracker(std::shared_ptr<const synthetic::MarginalClueTable> marginals,
                                 GullibleVariant variant)
    : marginals_(std::move(marginals)), variant_(variant) {
    reset();
}

void GullibleTracker::reset() {
    const std::size_t n = marginals_->num_suspects();
    scores_.assign(1, std::vector<double>(n, 1.0));
    beliefs_.assign(1, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

void GullibleTracker::push(Clue clue) {
    const std::size_t step = scores_.size();
    if (step > marginals_->num_steps()) throw std::out_of_range("clue prefix longer than the world's N");
    const std::size_t n = marginals_->num_suspects();
    std::vector<double> score(n);
    for (SuspectIndex y = 0; y < n; ++y) {
        const double base = variant_ == GullibleVariant::LastClue ? 1.0 : scores_.back()[y];
        score[y] = base * (*marginals_)(step, y, clue);
    }
    std::vector<double> belief;
    normalize_into(score, belief);
    scores_.push_back(std::move(score));
    beliefs_.push_back(std::move(belief));
}

void GullibleTracker::pop() {
    if (scores_.size() <= 1) throw std::logic_error("pop on an empty prefix");
    scores_.pop_back();
    beliefs_.pop_back();
}

std::unique_ptr<BeliefTracker> GullibleTracker::clone_fresh() const {
    return std::make_unique<GullibleTracker>(marginals_, variant_);
}

PerturbedTracker::PerturbedTracker(std::unique_ptr<BeliefTracker> base, std::uint64_t seed, double log_magnitude)
    : base_(std::move(base)), seed_(seed), log_magnitude_(log_magnitude) {
    if (!(log_magnitude >= 0.0)) throw std::invalid_argument("perturbation magnitude must be non-negative");
    reset();
}

void PerturbedTracker::reset() {
    base_->reset();
    hashes_.assign(1, mix_seed(seed_));
    beliefs_.clear();
    refresh();
}

void PerturbedTracker::refresh() {
    const auto base = base_->belief();
    std::vector<double> scaled(base.size());
    for (std::size_t y = 0; y < base.size(); ++y) {
        const std::uint64_t h = mix_seed(hashes_.back() ^ (0xa0761d6478bd642fULL * (y + 1)));
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        scaled[y] = base[y] * std::exp((u - 0.5) * log_magnitude_);
    }
    std::vector<double> belief;
    normalize_into(scaled, belief);
    beliefs_.push_back(std::move(belief));
}

void PerturbedTracker::push(Clue clue) {
    base_->push(clue);
    hashes_.push_back(mix_seed(hashes_.back() + static_cast<std::uint64_t>(clue) + 1));
    refresh();
}

void PerturbedTracker::pop() {
    if (hashes_.size() <= 1) throw std::logic_error("pop on an empty prefix");
    base_->pop();
    hashes_.pop_back();
    beliefs_.pop_back();
}

std::unique_ptr<BeliefTracker> PerturbedTracker::clone_fresh() const {
    return std::make_unique<PerturbedTracker>(base_->clone_fresh(), seed_, log_magnitude_);
}

std::string to_string(ReaderKind kind) {
    switch (kind) {
        case ReaderKind::Gullible: return "gullible";
        case ReaderKind::Brilliant: return "brilliant";
        case ReaderKind::KnowItAll: return "know-it-all";
    }
    return "unknown";
}

Scenario Scenario::single_world(const SyntheticWorld& world, GullibleVariant variant) {
    world.validate();
    Scenario s;
    s.story_model_ = std::make_shared<const SyntheticWorld>(world);
    s.marginals_ = std::make_shared<const synthetic::MarginalClueTable>(*s.story_model_);
    s.variant_ = variant;
    return s;
}

Scenario Scenario::genre(const GenreMixture& mixture, std::size_t component, GullibleVariant variant) {
    if (component >= mixture.size()) throw std::out_of_range("mixture component out of range");
    Scenario s;
    s.genre_ = std::make_shared<const GenreMixture>(mixture);
    s.story_model_ = std::shared_ptr<const SyntheticWorld>(s.genre_, &s.genre_->world(component));
    s.story_model_->validate();
    s.marginals_ = std::make_shared<const synthetic::MarginalClueTable>(*s.genre_);
    s.variant_ = variant;
    return s;
}

std::unique_ptr<BeliefTracker> Scenario::make_reader(ReaderKind kind) const {
    switch (kind) {
        case ReaderKind::Gullible: return std::make_unique<GullibleTracker>(marginals_, variant_);
        case ReaderKind::Brilliant:
            if (genre_) return std::make_unique<MixturePosteriorTracker>(*genre_);
            return std::make_unique<WorldPosteriorTracker>(*story_model_);
        case ReaderKind::KnowItAll: return std::make_unique<WorldPosteriorTracker>(*story_model_);
    }
    throw std::invalid_argument("unknown reader kind");
}

std::unique_ptr<WorldPosteriorTracker> Scenario::make_story_model_tracker() const {
    return std::make_unique<WorldPosteriorTracker>(*story_model_);
}

std::uint64_t Scenario::prefix_space() const noexcept {
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t a = alphabet_size();
    std::uint64_t level = 1, total = 1;
    for (std::size_t i = 0; i < num_steps(); ++i) {
        if (level > cap / a) return cap;
        level *= a;
        if (total > cap - level) return cap;
        total += level;
    }
    return total;
}

namespace {

class TreeWalker {
public:
    TreeWalker(const Scenario& scenario, std::span<BeliefTracker* const> readers, const PrefixVisitor& visit)
        : scenario_(scenario), readers_(readers), visit_(visit), model_(scenario.make_story_model_tracker()) {}

    void run() {
        model_->reset();
        for (auto* r : readers_) r->reset();
        prefix_.clear();
        descend();
    }

private:
    void descend() {
        visit_(prefix_, model_->mass(), model_->belief(), readers_);
        if (prefix_.size() == scenario_.num_steps()) return;
        for (std::size_t c = 0; c < scenario_.alphabet_size(); ++c) {
            const auto clue = static_cast<Clue>(c);
            model_->push(clue);
            if (model_->mass() > 0.0) {
                for (auto* r : readers_) r->push(clue);
                prefix_.push_back(clue);
                descend();
                prefix_.pop_back();
                for (auto* r : readers_) r->pop();
            }
            model_->pop();
        }
    }

    const Scenario& scenario_;
    std::span<BeliefTracker* const> readers_;
    const PrefixVisitor& visit_;
    std::unique_ptr<WorldPosteriorTracker> model_;
    ClueSequence prefix_;
};

}  // namespace

void walk_prefix_tree(const Scenario& scenario, std::span<BeliefTracker* const> readers, const PrefixVisitor& visit) {
    TreeWalker(scenario, readers, visit).run();
}

ExpectedUninformedness expected_uninformedness(const Scenario& scenario, std::span<BeliefTracker* const> readers,
                                               const ExpectationOptions& options) {
    const std::size_t n = scenario.num_steps();
    ExpectedUninformedness out;
    out.per_reader.assign(readers.size(), std::vector<double>(n + 1, 0.0));

    ExpectationMode mode = options.mode;
    if (mode == ExpectationMode::Auto)
        mode = scenario.prefix_space() <= kExactPrefixLimit ? ExpectationMode::Exact : ExpectationMode::Sampled;
    out.mode_used = mode;

    if (mode == ExpectationMode::Exact) {
        walk_prefix_tree(scenario, readers,
                         [&](std::span<const Clue> prefix, double p, std::span<const double> truth,
                             std::span<BeliefTracker* const> rs) {
                             for (std::size_t r = 0; r < rs.size(); ++r)
                                 out.per_reader[r][prefix.size()] +=
                                     p * uninformedness(truth, rs[r]->belief(), options.log_floor);
                         });
        return out;
    }

    if (options.samples == 0) throw std::invalid_argument("sampled expectation needs at least one sample");
    const auto model = scenario.make_story_model_tracker();
    for (std::size_t s = 0; s < options.samples; ++s) {
        const auto story = synthetic::sample_story(scenario.story_model(), mix_seed(options.seed + s));
        model->reset();
        for (auto* r : readers) r->reset();
        for (std::size_t i = 0; i <= n; ++i) {
            if (i > 0) {
                model->push(story.clues[i - 1]);
                for (auto* r : readers) r->push(story.clues[i - 1]);
            }
            for (std::size_t r = 0; r < readers.size(); ++r)
                out.per_reader[r][i] += uninformedness(model->belief(), readers[r]->belief(), options.log_floor);
        }
    }
    for (auto& series : out.per_reader)
        for (double& v : series) v /= static_cast<double>(options.samples);
    out.samples_used = options.samples;
    return out;
}

std::vector<double> clue_effectiveness_series(std::span<const double> expected_h) {
    std::vector<double> out;
    for (std::size_t i = 1; i < expected_h.size(); ++i) out.push_back(expected_h[i - 1] - expected_h[i]);
    return out;
}

double clue_effectiveness(const Scenario& scenario, ReaderKind kind, std::size_t step,
                          const ExpectationOptions& options) {
    if (step < 1 || step > scenario.num_steps()) throw std::out_of_range("clue effectiveness step out of range");
    auto reader = scenario.make_reader(kind);
    BeliefTracker* readers[] = {reader.get()};
    const auto h = expected_uninformedness(scenario, readers, options);
    return h.per_reader[0][step - 1] - h.per_reader[0][step];
}

}  // namespace fairplay::measures
