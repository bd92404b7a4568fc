#include "fairplay/synthetic/detectives.hpp"

#include <algorithm>
#include <numeric>

namespace fairplay::synthetic {

namespace {

double sum_of(std::span<const double> w) {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

ProbVector normalize_or_throw(std::vector<double> w, const char* who) {
    if (!(sum_of(w) > 0.0))
        throw ZeroProbabilityPrefix(std::string(who) + ": the observed clue prefix has probability zero");
    return ProbVector::from_unnormalized(std::move(w));
}

// Backward table over (step, context, culprit): the probability that the
// continuation from that state ends with a final clue implying each culprit,
// plus one trailing column for endings that imply nobody. It depends only on
// the world, so it is rebuilt when the world's revision changes.
class ContinuationTable {
public:
    std::vector<double> run(const SyntheticWorld& world, std::span<const Clue> observed) {
        world.check_prefix(observed);
        if (world.revision() != revision_) build(world);
        const std::size_t k = world.num_suspects();
        const auto prior = world.prior().weights();
        w_.assign(prior.begin(), prior.end());
        double* w = w_.data();
        std::size_t ctx = SyntheticWorld::kEmptyContext;
        const std::size_t stride = world.culprit_stride();
        for (std::size_t i = 0; i < observed.size(); ++i) {
            const double* rows = world.rows_at(i + 1, ctx) + observed[i];
            for (SuspectIndex y = 0; y < k; ++y)
                if (w[y] != 0.0) w[y] *= rows[y * stride];
            ctx = world.advance_context(ctx, observed[i]);
        }
        const double mass = sum_of(w_);
        if (!(mass > 0.0)) throw ZeroProbabilityPrefix("brilliant detective: the observed clue prefix has probability zero");
        std::vector<double> outcome(k, 0.0);
        if (observed.size() == world.num_steps()) {
            // A full sequence: p(prefix) * 1[C |- Y = y].
            const auto culprit = world.conclusive_culprit(observed.back());
            if (!culprit) throw no_culprit();
            outcome[*culprit] = mass;
            return outcome;
        }
        double unresolved = 0.0;
        for (SuspectIndex y = 0; y < k; ++y) {
            if (w[y] == 0.0) continue;
            const double* to = at(observed.size() + 1, ctx, y);
            for (SuspectIndex z = 0; z < k; ++z) outcome[z] += w[y] * to[z];
            unresolved += w[y] * to[k];
        }
        if (unresolved > 0.0) throw no_culprit();
        return outcome;
    }

private:
    static WorldError no_culprit() {
        return WorldError("a full clue sequence with nonzero probability implies no culprit");
    }

    const double* at(std::size_t step, std::size_t ctx, SuspectIndex y) const {
        return &table_[(((step - 1) * contexts_ + ctx) * suspects_ + y) * (suspects_ + 1)];
    }
    double* at(std::size_t step, std::size_t ctx, SuspectIndex y) {
        return &table_[(((step - 1) * contexts_ + ctx) * suspects_ + y) * (suspects_ + 1)];
    }

    void build(const SyntheticWorld& world) {
        suspects_ = world.num_suspects();
        contexts_ = world.num_contexts();
        const std::size_t n = world.num_steps(), a = world.alphabet_size(), width = suspects_ + 1;
        table_.assign(n * contexts_ * suspects_ * width, 0.0);
        for (std::size_t step = n; step >= 1; --step)
            for (std::size_t ctx = 0; ctx < contexts_; ++ctx)
                for (SuspectIndex y = 0; y < suspects_; ++y) {
                    const auto row = world.row(step, y, ctx);
                    double* to = at(step, ctx, y);
                    for (std::size_t c = 0; c < a; ++c) {
                        if (row[c] == 0.0) continue;
                        if (step == n) {
                            const auto culprit = world.conclusive_culprit(static_cast<Clue>(c));
                            to[culprit ? *culprit : suspects_] += row[c];
                        } else {
                            const double* from = at(step + 1, world.advance_context(ctx, static_cast<Clue>(c)), y);
                            for (std::size_t z = 0; z < width; ++z) to[z] += row[c] * from[z];
                        }
                    }
                }
        revision_ = world.revision();
    }

    std::uint64_t revision_ = 0;
    std::size_t suspects_ = 0;
    std::size_t contexts_ = 0;
    std::vector<double> table_;  // [step - 1][context][culprit][implied culprit or none]
    std::vector<double> w_;      // p(y, prefix), reused across calls
};

}  // namespace

ProbVector brilliant_detective(const SyntheticWorld& world, std::span<const Clue> observed) {
    thread_local ContinuationTable table;
    return normalize_or_throw(table.run(world, observed), "brilliant detective");
}

ProbVector posterior(const SyntheticWorld& world, std::span<const Clue> observed) {
    return normalize_or_throw(world.joint_weights(observed), "posterior");
}

ProbVector posterior(const GenreMixture& mixture, std::span<const Clue> observed) {
    return normalize_or_throw(mixture.joint_weights(observed), "posterior");
}

MarginalClueTable::MarginalClueTable(const SyntheticWorld& world)
    : num_suspects_(world.num_suspects()),
      num_steps_(world.num_steps()),
      alphabet_size_(world.alphabet_size()),
      table_(num_suspects_ * num_steps_ * alphabet_size_, 0.0) {
    add_world(world, std::vector<double>(num_suspects_, 1.0));
}

MarginalClueTable::MarginalClueTable(const GenreMixture& mixture)
    : num_suspects_(mixture.num_suspects()),
      num_steps_(mixture.num_steps()),
      alphabet_size_(mixture.alphabet_size()),
      table_(num_suspects_ * num_steps_ * alphabet_size_, 0.0) {
    // p(m | y) is proportional to w_m * prior_m(y).
    std::vector<double> per_culprit(num_suspects_, 0.0);
    for (std::size_t m = 0; m < mixture.size(); ++m)
        for (SuspectIndex y = 0; y < num_suspects_; ++y)
            per_culprit[y] += mixture.weights()[m] * mixture.world(m).prior()[y];
    for (std::size_t m = 0; m < mixture.size(); ++m) {
        std::vector<double> share(num_suspects_, 0.0);
        for (SuspectIndex y = 0; y < num_suspects_; ++y)
            if (per_culprit[y] > 0.0) share[y] = mixture.weights()[m] * mixture.world(m).prior()[y] / per_culprit[y];
        add_world(mixture.world(m), share);
    }
}

void MarginalClueTable::add_world(const SyntheticWorld& world, std::span<const double> culprit_weights) {
    // Forward pass over context states, one culprit at a time.
    for (SuspectIndex y = 0; y < num_suspects_; ++y) {
        if (culprit_weights[y] == 0.0) continue;
        std::vector<double> ctx_dist(world.num_contexts(), 0.0), next(world.num_contexts(), 0.0);
        ctx_dist[SyntheticWorld::kEmptyContext] = 1.0;
        for (std::size_t step = 1; step <= num_steps_; ++step) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t ctx = 0; ctx < ctx_dist.size(); ++ctx) {
                if (ctx_dist[ctx] == 0.0) continue;
                const auto r = world.row(step, y, ctx);
                for (std::size_t c = 0; c < alphabet_size_; ++c) {
                    const double p = ctx_dist[ctx] * r[c];
                    if (p == 0.0) continue;
                    table_[((step - 1) * num_suspects_ + y) * alphabet_size_ + c] += culprit_weights[y] * p;
                    next[world.advance_context(ctx, static_cast<Clue>(c))] += p;
                }
            }
            std::swap(ctx_dist, next);
        }
    }
}

ProbVector gullible_detective(const MarginalClueTable& marginals, std::span<const Clue> observed,
                              GullibleVariant variant) {
    const std::size_t n = marginals.num_suspects();
    if (observed.size() > marginals.num_steps()) throw std::out_of_range("clue prefix longer than the world's N");
    if (observed.empty()) return ProbVector::uniform(n);
    std::vector<double> score(n, 1.0);
    const std::size_t first = variant == GullibleVariant::LastClue ? observed.size() - 1 : 0;
    for (std::size_t j = first; j < observed.size(); ++j)
        for (SuspectIndex y = 0; y < n; ++y) score[y] *= marginals(j + 1, y, observed[j]);
    if (!(sum_of(score) > 0.0)) return ProbVector::uniform(n);
    return ProbVector::from_unnormalized(std::move(score));
}

ProbVector gullible_detective(const SyntheticWorld& world, std::span<const Clue> observed, GullibleVariant variant) {
    world.check_prefix(observed);
    return gullible_detective(MarginalClueTable(world), observed, variant);
}

ProbVector know_it_all_reader(const SyntheticWorld& world, std::span<const Clue> observed) {
    return posterior(world, observed);
}

ProbVector know_it_all_reader(const GenreMixture& mixture, std::span<const Clue> observed,
                              std::optional<std::size_t> component) {
    if (component) return posterior(mixture.world(*component), observed);
    return posterior(mixture, observed);
}

ProbVector genre_detective(const GenreMixture& mixture, std::span<const Clue> observed) {
    return posterior(mixture, observed);
}

namespace {

template <typename BeliefAt>
ReadingCurve build_curve(std::string label, std::size_t n, BeliefAt&& belief_at) {
    std::vector<CurveStep> steps;
    steps.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) steps.push_back({i, belief_at(i)});
    return ReadingCurve(std::move(label), std::move(steps));
}

}  // namespace

ReaderCurves reading_curves(const SyntheticWorld& world, std::span<const Clue> story, GullibleVariant variant) {
    if (story.size() != world.num_steps()) throw std::invalid_argument("story length must equal the world's N");
    const MarginalClueTable marginals(world);
    return ReaderCurves{
        build_curve("gullible", story.size(),
                    [&](std::size_t i) { return gullible_detective(marginals, story.first(i), variant); }),
        build_curve("brilliant", story.size(), [&](std::size_t i) { return brilliant_detective(world, story.first(i)); }),
        build_curve("know-it-all", story.size(),
                    [&](std::size_t i) { return know_it_all_reader(world, story.first(i)); }),
    };
}

ReaderCurves reading_curves(const GenreMixture& mixture, std::size_t component, std::span<const Clue> story,
                            GullibleVariant variant) {
    if (story.size() != mixture.num_steps()) throw std::invalid_argument("story length must equal the world's N");
    const MarginalClueTable marginals(mixture);
    return ReaderCurves{
        build_curve("gullible", story.size(),
                    [&](std::size_t i) { return gullible_detective(marginals, story.first(i), variant); }),
        build_curve("brilliant", story.size(), [&](std::size_t i) { return genre_detective(mixture, story.first(i)); }),
        build_curve("know-it-all", story.size(),
                    [&](std::size_t i) { return know_it_all_reader(mixture, story.first(i), component); }),
    };
}

}  // namespace fairplay::synthetic
