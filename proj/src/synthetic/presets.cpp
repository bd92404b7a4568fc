#include "fairplay/synthetic/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "fairplay/core/random.hpp"

namespace fairplay::synthetic {

namespace {

SyntheticWorld::Shape preset_shape(std::size_t num_steps) {
    return SyntheticWorld::Shape{
        {"Alice", "Bruno", "Clara", "Dmitri"},
        {"implicates-Alice", "implicates-Bruno", "implicates-Clara", "implicates-Dmitri", "neutral"},
        num_steps,
        1,
    };
}

constexpr Clue kNeutral = 4;

std::vector<double> point_row(std::size_t size, std::size_t index) {
    std::vector<double> r(size, 0.0);
    r[index] = 1.0;
    return r;
}

void add_confession(SyntheticWorld& w) {
    for (SuspectIndex y = 0; y < w.num_suspects(); ++y) {
        w.set_conclusive(static_cast<Clue>(y), y);
        w.set_row_all_contexts(w.num_steps(), y, point_row(w.alphabet_size(), y));
    }
}

void add_rotating_distractors(SyntheticWorld& w) {
    for (SuspectIndex y = 0; y < w.num_suspects(); ++y) w.set_distractor(y, (y + 1) % w.num_suspects());
}

std::vector<double> random_row(Rng& rng, std::size_t size) {
    std::vector<double> r(size);
    double total = 0.0;
    for (auto& x : r) {
        const double e = -std::log(1.0 - uniform01(rng));
        x = e * e;
        total += x;
    }
    for (auto& x : r) x /= total;
    // Exact unit sum so the row passes the 1e-12 check regardless of rounding.
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < size; ++i) rest -= r[i];
    r.back() = std::max(0.0, rest);
    return r;
}

}  // namespace

SyntheticWorld deterministic_world(std::size_t num_steps) {
    if (num_steps < 2) throw WorldError("the deterministic preset needs at least 2 steps");
    SyntheticWorld w(preset_shape(num_steps));
    for (SuspectIndex y = 0; y < w.num_suspects(); ++y) {
        w.set_row_all_contexts(1, y, point_row(w.alphabet_size(), y));
        for (std::size_t step = 2; step < num_steps; ++step)
            w.set_row_all_contexts(step, y, point_row(w.alphabet_size(), kNeutral));
    }
    add_confession(w);
    add_rotating_distractors(w);
    w.validate();
    return w;
}

SyntheticWorld misleading_world(std::size_t num_steps) {
    if (num_steps < 3) throw WorldError("the misleading preset needs at least 3 steps");
    constexpr double kOpensOnDistractor = 0.2;
    constexpr double kOpensOnCulprit = 0.5;
    constexpr double kRepeatsOwnClue = 0.5;

    SyntheticWorld w(preset_shape(num_steps));
    const std::size_t a = w.alphabet_size();
    for (SuspectIndex y = 0; y < w.num_suspects(); ++y) {
        const auto d = static_cast<Clue>((y + 1) % w.num_suspects());
        std::vector<double> opening(a, 0.0);
        opening[static_cast<std::size_t>(d)] = kOpensOnDistractor;
        opening[y] = kOpensOnCulprit;
        opening[kNeutral] = 1.0 - kOpensOnDistractor - kOpensOnCulprit;
        w.set_row_all_contexts(1, y, opening);

        std::vector<double> ordinary(a, 0.0);
        ordinary[y] = kRepeatsOwnClue;
        ordinary[kNeutral] = 1.0 - kRepeatsOwnClue;
        for (std::size_t step = 2; step < num_steps; ++step) {
            w.set_row_all_contexts(step, y, ordinary);
            // Once the distractor is implicated, the story keeps implicating them.
            w.set_row(step, y, w.context_of(std::vector<Clue>{d}), point_row(a, static_cast<std::size_t>(d)));
        }
    }
    add_confession(w);
    add_rotating_distractors(w);
    w.validate();
    return w;
}

SyntheticWorld random_world(std::uint64_t seed, const RandomWorldOptions& options) {
    if (options.alphabet_size < options.num_suspects)
        throw WorldError("random worlds need one confession clue per suspect");
    SyntheticWorld::Shape shape;
    for (std::size_t y = 0; y < options.num_suspects; ++y) shape.suspects.push_back("S" + std::to_string(y + 1));
    for (std::size_t c = 0; c < options.alphabet_size; ++c) shape.alphabet.push_back("c" + std::to_string(c));
    shape.num_steps = options.num_steps;
    shape.context_order = options.context_order;
    SyntheticWorld w(std::move(shape));

    Rng rng(mix_seed(seed));
    if (!options.uniform_prior) w.set_prior(ProbVector::from_unnormalized(random_row(rng, options.num_suspects)));
    for (std::size_t step = 1; step < options.num_steps; ++step)
        for (SuspectIndex y = 0; y < w.num_suspects(); ++y)
            for (std::size_t ctx = 0; ctx < w.num_contexts(); ++ctx)
                w.set_row(step, y, ctx, random_row(rng, w.alphabet_size()));
    add_confession(w);
    for (SuspectIndex y = 0; y < w.num_suspects(); ++y) w.set_distractor(y, (y + 1) % w.num_suspects());
    w.validate();
    return w;
}

SyntheticWorld independent_clue_world(std::uint64_t seed, std::size_t num_steps) {
    SyntheticWorld w(preset_shape(num_steps));
    Rng rng(mix_seed(seed));
    for (std::size_t step = 1; step < num_steps; ++step) {
        const auto r = random_row(rng, w.alphabet_size());
        for (SuspectIndex y = 0; y < w.num_suspects(); ++y) w.set_row_all_contexts(step, y, r);
    }
    add_confession(w);
    add_rotating_distractors(w);
    w.validate();
    return w;
}

SyntheticWorld perturbed_world(const SyntheticWorld& base, std::uint64_t seed, double max_log_ratio) {
    // Scaling by e^{+-h} then renormalizing moves each entry by at most e^{+-2h}.
    const double h = max_log_ratio / 2.0;
    SyntheticWorld w(SyntheticWorld::Shape{base.suspects(), base.alphabet(), base.num_steps(), base.context_order()});
    w.set_prior(base.prior());
    Rng rng(mix_seed(seed));
    for (std::size_t step = 1; step <= base.num_steps(); ++step)
        for (SuspectIndex y = 0; y < base.num_suspects(); ++y)
            for (std::size_t ctx = 0; ctx < base.num_contexts(); ++ctx) {
                const auto src = base.row(step, y, ctx);
                std::vector<double> r(src.begin(), src.end());
                double total = 0.0;
                for (auto& x : r) {
                    x *= std::exp(h * (2.0 * uniform01(rng) - 1.0));
                    total += x;
                }
                for (auto& x : r) x /= total;
                double rest = 1.0;
                std::size_t last = r.size() - 1;
                while (last > 0 && r[last] == 0.0) --last;
                for (std::size_t i = 0; i < r.size(); ++i)
                    if (i != last) rest -= r[i];
                r[last] = rest;
                w.set_row(step, y, ctx, r);
            }
    for (std::size_t c = 0; c < base.alphabet_size(); ++c)
        if (auto culprit = base.conclusive_culprit(static_cast<Clue>(c))) w.set_conclusive(static_cast<Clue>(c), *culprit);
    for (SuspectIndex y = 0; y < base.num_suspects(); ++y)
        if (auto d = base.distractor_of(y)) w.set_distractor(y, *d);
    w.validate();
    return w;
}

SyntheticWorld preset_world(const std::string& name, std::uint64_t seed) {
    if (name == "deterministic") return deterministic_world();
    if (name == "misleading") return misleading_world();
    if (name == "random-seeded") return random_world(seed);
    throw std::invalid_argument("unknown world preset '" + name + "' (expected deterministic, misleading or random-seeded)");
}

}  // namespace fairplay::synthetic
