#include "fairplay/synthetic/world.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <set>

#include "fairplay/core/random.hpp"

namespace fairplay::synthetic {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

std::uint64_t SyntheticWorld::Revision::next() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
}

SyntheticWorld::SyntheticWorld(Shape shape)
    : suspects_(std::move(shape.suspects)),
      alphabet_(std::move(shape.alphabet)),
      num_steps_(shape.num_steps),
      context_order_(shape.context_order),
      num_contexts_(0),
      prior_(ProbVector::uniform(suspects_.empty() ? 1 : suspects_.size())) {
    if (suspects_.size() < 2) throw WorldError("a world needs at least 2 suspects");
    if (alphabet_.empty() || alphabet_.size() > kMaxAlphabet)
        throw WorldError("clue alphabet size must be in 1.." + std::to_string(kMaxAlphabet));
    if (num_steps_ < 1) throw WorldError("a world needs at least one step");
    if (context_order_ > kMaxContextOrder)
        throw WorldError("context order is capped at " + std::to_string(kMaxContextOrder));
    if (std::set<std::string>(alphabet_.begin(), alphabet_.end()).size() != alphabet_.size())
        throw WorldError("clue symbols must be distinct");
    SuspectRoster(suspects_, 0);  // name checks
    num_contexts_ = ipow(alphabet_.size() + 1, context_order_);
    next_context_.resize(num_contexts_ * alphabet_.size());
    for (std::size_t ctx = 0; ctx < num_contexts_; ++ctx)
        for (std::size_t c = 0; c < alphabet_.size(); ++c)
            next_context_[ctx * alphabet_.size() + c] = (ctx * (alphabet_.size() + 1) + c + 1) % num_contexts_;
    kernel_.assign(num_steps_ * suspects_.size() * num_contexts_ * alphabet_.size(), 0.0);
    row_set_.assign(num_steps_ * suspects_.size() * num_contexts_, false);
    conclusive_.assign(alphabet_.size(), std::nullopt);
    distractors_.assign(suspects_.size(), std::nullopt);
}

void SyntheticWorld::set_prior(ProbVector prior) {
    if (prior.size() != suspects_.size()) throw WorldError("prior size does not match the roster");
    prior_ = std::move(prior);
    revision_.bump();
}

std::size_t SyntheticWorld::context_of(std::span<const Clue> preceding) const {
    std::size_t ctx = kEmptyContext;
    const std::size_t from = preceding.size() > context_order_ ? preceding.size() - context_order_ : 0;
    for (std::size_t i = from; i < preceding.size(); ++i) ctx = advance_context(ctx, preceding[i]);
    return ctx;
}

void SyntheticWorld::throw_bad_index(std::size_t step, SuspectIndex culprit, std::size_t context) const {
    if (step < 1 || step > num_steps_) throw std::out_of_range("kernel step out of range");
    if (culprit >= suspects_.size()) throw std::out_of_range("kernel culprit out of range");
    if (context >= num_contexts_) throw std::out_of_range("kernel context out of range");
    throw std::logic_error("kernel index check failed");
}

std::span<const double> SyntheticWorld::row(std::size_t step, SuspectIndex culprit, std::size_t context) const {
    return std::span<const double>(kernel_).subspan(offset(step, culprit, context), alphabet_.size());
}

void SyntheticWorld::set_row(std::size_t step, SuspectIndex culprit, std::size_t context,
                             std::span<const double> probs) {
    if (probs.size() != alphabet_.size()) throw WorldError("kernel row size does not match the alphabet");
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw WorldError("kernel rows must be non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > kKernelRowTolerance)
        throw WorldError("kernel row at step " + std::to_string(step) + " sums to " + std::to_string(total));
    const auto off = offset(step, culprit, context);
    std::copy(probs.begin(), probs.end(), kernel_.begin() + static_cast<std::ptrdiff_t>(off));
    row_set_[off / alphabet_.size()] = true;
    revision_.bump();
}

void SyntheticWorld::set_row_all_contexts(std::size_t step, SuspectIndex culprit, std::span<const double> probs) {
    for (std::size_t ctx = 0; ctx < num_contexts_; ++ctx) set_row(step, culprit, ctx, probs);
}

std::optional<SuspectIndex> SyntheticWorld::conclusive_culprit(Clue final_clue) const {
    return conclusive_.at(static_cast<std::size_t>(final_clue));
}

void SyntheticWorld::set_conclusive(Clue final_clue, SuspectIndex culprit) {
    if (culprit >= suspects_.size()) throw WorldError("conclusive culprit out of range");
    conclusive_.at(static_cast<std::size_t>(final_clue)) = culprit;
    revision_.bump();
}

SuspectIndex SyntheticWorld::conclusive_rule(std::span<const Clue> full_sequence) const {
    if (full_sequence.size() != num_steps_) throw std::invalid_argument("conclusive rule needs a full-length sequence");
    check_prefix(full_sequence);
    const auto culprit = conclusive_culprit(full_sequence.back());
    if (!culprit) throw WorldError("final clue '" + alphabet_[static_cast<std::size_t>(full_sequence.back())] +
                                   "' does not identify a culprit");
    return *culprit;
}

std::optional<SuspectIndex> SyntheticWorld::distractor_of(SuspectIndex culprit) const {
    return distractors_.at(culprit);
}

void SyntheticWorld::set_distractor(SuspectIndex culprit, SuspectIndex distractor) {
    if (culprit >= suspects_.size() || distractor >= suspects_.size()) throw WorldError("distractor out of range");
    if (culprit == distractor) throw WorldError("a culprit cannot be its own distractor");
    distractors_[culprit] = distractor;
}

void SyntheticWorld::validate() const {
    for (std::size_t i = 0; i < row_set_.size(); ++i)
        if (!row_set_[i]) {
            const std::size_t ctx = i % num_contexts_;
            const std::size_t culprit = (i / num_contexts_) % suspects_.size();
            const std::size_t step = i / (num_contexts_ * suspects_.size()) + 1;
            throw WorldError("kernel row missing for step " + std::to_string(step) + ", culprit " +
                             suspects_[culprit] + ", context " + std::to_string(ctx));
        }
    for (SuspectIndex y = 0; y < suspects_.size(); ++y)
        for (std::size_t ctx = 0; ctx < num_contexts_; ++ctx) {
            const auto r = row(num_steps_, y, ctx);
            for (std::size_t c = 0; c < r.size(); ++c)
                if (r[c] > 0.0 && conclusive_[c] != y)
                    throw WorldError("final clue '" + alphabet_[c] + "' is emitted under culprit " + suspects_[y] +
                                     " but does not conclusively identify them");
        }
}

std::vector<double> SyntheticWorld::joint_weights(std::span<const Clue> prefix) const {
    check_prefix(prefix);
    std::vector<double> w(prior_.weights().begin(), prior_.weights().end());
    std::size_t ctx = kEmptyContext;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        for (SuspectIndex y = 0; y < w.size(); ++y)
            if (w[y] != 0.0) w[y] *= kernel(i + 1, y, ctx, prefix[i]);
        ctx = advance_context(ctx, prefix[i]);
    }
    return w;
}

void SyntheticWorld::check_prefix(std::span<const Clue> prefix) const {
    if (prefix.size() > num_steps_) throw std::out_of_range("clue prefix longer than the world's N");
    for (Clue c : prefix)
        if (c < 0 || static_cast<std::size_t>(c) >= alphabet_.size())
            throw std::out_of_range("clue symbol out of range");
}

std::uint64_t SyntheticWorld::sequence_count() const noexcept {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < num_steps_; ++i) {
        if (n > std::numeric_limits<std::uint64_t>::max() / alphabet_.size())
            return std::numeric_limits<std::uint64_t>::max();
        n *= alphabet_.size();
    }
    return n;
}

SuspectRoster SyntheticWorld::roster_for(SuspectIndex culprit) const {
    return SuspectRoster(suspects_, culprit, distractor_of(culprit));
}

GenreMixture::GenreMixture(std::vector<SyntheticWorld> worlds, ProbVector weights)
    : worlds_(std::move(worlds)), weights_(std::move(weights)) {
    if (worlds_.empty()) throw WorldError("a mixture needs at least one component");
    if (weights_.size() != worlds_.size()) throw WorldError("mixture weights do not match the component count");
    const auto& first = worlds_.front();
    for (const auto& w : worlds_) {
        if (w.num_suspects() != first.num_suspects() || w.num_steps() != first.num_steps() ||
            w.alphabet() != first.alphabet())
            throw WorldError("mixture components must share roster size, N and clue alphabet");
        w.validate();
    }
}

std::vector<double> GenreMixture::joint_weights(std::span<const Clue> prefix) const {
    std::vector<double> total(num_suspects(), 0.0);
    for (std::size_t m = 0; m < worlds_.size(); ++m) {
        const auto w = worlds_[m].joint_weights(prefix);
        for (std::size_t y = 0; y < w.size(); ++y) total[y] += weights_[m] * w[y];
    }
    return total;
}

SampledStory sample_story(const SyntheticWorld& world, std::uint64_t seed) {
    world.validate();
    Rng rng(seed);
    SampledStory out;
    out.culprit = draw_index(world.prior().weights(), rng);
    std::size_t ctx = SyntheticWorld::kEmptyContext;
    for (std::size_t step = 1; step <= world.num_steps(); ++step) {
        const auto r = world.row(step, out.culprit, ctx);
        const auto clue = static_cast<Clue>(draw_index(r, rng));
        out.clues.push_back(clue);
        ctx = world.advance_context(ctx, clue);
    }
    if (world.conclusive_rule(out.clues) != out.culprit)
        throw WorldError("sampled sequence does not imply the drawn culprit");
    return out;
}

SampledStory sample_story(const GenreMixture& mixture, std::uint64_t seed, std::size_t* component) {
    Rng rng(seed);
    const auto m = draw_index(mixture.weights().weights(), rng);
    if (component) *component = m;
    return sample_story(mixture.world(m), mix_seed(seed ^ (m + 1)));
}

}  // namespace fairplay::synthetic
