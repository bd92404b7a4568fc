#include "fairplay/metrics/erc.hpp"

#include <algorithm>
#include <stdexcept>

#include "fairplay/core/story.hpp"

namespace fairplay::metrics {

namespace {

constexpr std::uint64_t kMaxSequences = 10'000'000;

// Calls visit(sequence, probability) for every full sequence of positive probability.
template <typename Visit>
void for_each_sequence(const synthetic::SyntheticWorld& w, Visit&& visit) {
    const std::size_t n = w.num_steps();
    std::vector<std::vector<double>> joint(n + 1);
    joint[0].assign(w.prior().weights().begin(), w.prior().weights().end());
    ClueSequence seq(n);
    std::vector<std::size_t> ctx(n + 1, synthetic::SyntheticWorld::kEmptyContext);

    auto recurse = [&](auto&& self, std::size_t depth) -> void {
        if (depth == n) {
            double p = 0.0;
            for (double v : joint[n]) p += v;
            visit(std::span<const Clue>(seq), p);
            return;
        }
        auto& next = joint[depth + 1];
        next.resize(w.num_suspects());
        for (std::size_t c = 0; c < w.alphabet_size(); ++c) {
            double mass = 0.0;
            for (SuspectIndex y = 0; y < w.num_suspects(); ++y) {
                const double prev = joint[depth][y];
                next[y] = prev == 0.0 ? 0.0 : prev * w.kernel(depth + 1, y, ctx[depth], static_cast<Clue>(c));
                mass += next[y];
            }
            if (mass == 0.0) continue;
            seq[depth] = static_cast<Clue>(c);
            ctx[depth + 1] = w.advance_context(ctx[depth], static_cast<Clue>(c));
            self(self, depth + 1);
        }
    };
    recurse(recurse, 0);
}

}  // namespace

ErcExact erc_exact(const synthetic::SyntheticWorld& world, std::size_t revelation) {
    const std::size_t n = world.num_steps();
    if (revelation < 1 || revelation > n) throw std::out_of_range("revelation point must lie in 1..N");
    if (world.sequence_count() > kMaxSequences)
        throw std::invalid_argument("world too large for exact revelation-content enumeration");
    world.validate();

    ErcExact out;
    const std::size_t positions = revelation - 1;
    if (positions == 0) return out;

    const std::size_t a = world.alphabet_size();
    std::size_t tails = 1;
    for (std::size_t i = revelation; i <= n; ++i) tails *= a;
    // table[j][c * tails + tail] = p(c_j = c, C_{r..N} = tail)
    std::vector<std::vector<double>> table(positions, std::vector<double>(a * tails, 0.0));

    for_each_sequence(world, [&](std::span<const Clue> seq, double p) {
        std::size_t tail = 0;
        for (std::size_t i = revelation - 1; i < n; ++i) tail = tail * a + static_cast<std::size_t>(seq[i]);
        for (std::size_t j = 0; j < positions; ++j) table[j][static_cast<std::size_t>(seq[j]) * tails + tail] += p;
    });

    for (std::size_t j = 0; j < positions; ++j) {
        const auto& t = table[j];
        double conditional = 0.0, marginal = 0.0;
        for (std::size_t tail = 0; tail < tails; ++tail) {
            double p_tail = 0.0;
            for (std::size_t c = 0; c < a; ++c) p_tail += t[c * tails + tail];
            if (p_tail == 0.0) continue;
            for (std::size_t c = 0; c < a; ++c) conditional += t[c * tails + tail] * t[c * tails + tail] / p_tail;
        }
        for (std::size_t c = 0; c < a; ++c) {
            double m = 0.0;
            for (std::size_t tail = 0; tail < tails; ++tail) m += t[c * tails + tail];
            marginal += m * m;
        }
        out.per_position.push_back(conditional - marginal);
        out.sum += conditional - marginal;
    }
    out.mean = out.sum / static_cast<double>(positions);
    return out;
}

std::string to_string(ErcSetting s) {
    return s == ErcSetting::AfterRevelation ? "AR" : "BR";
}

namespace {

void check_record(const ErcChoiceRecord& r) {
    if (r.option_culprits.empty()) throw std::invalid_argument("ERC record has no options");
    if (r.picked >= r.option_culprits.size() || r.true_option >= r.option_culprits.size())
        throw std::invalid_argument("ERC record refers to an option that does not exist");
}

bool same_culprit(const std::optional<std::string>& option, const std::string& truth) {
    if (!option) throw std::invalid_argument("ERC option is missing its culprit annotation");
    return normalized_name(*option) == normalized_name(truth);
}

}  // namespace

bool erc_choice_correct(const ErcChoiceRecord& record) {
    check_record(record);
    if (record.picked == record.true_option) return true;
    return same_culprit(record.option_culprits[record.picked], record.true_culprit);
}

double erc_choice_baseline(const ErcChoiceRecord& record) {
    check_record(record);
    std::size_t good = 0;
    for (std::size_t k = 0; k < record.option_culprits.size(); ++k)
        if (k == record.true_option || same_culprit(record.option_culprits[k], record.true_culprit)) ++good;
    return static_cast<double>(good) / static_cast<double>(record.option_culprits.size());
}

ErcChoiceSummary erc_multiple_choice(std::span<const ErcChoiceRecord> records, ErcSetting setting,
                                     std::size_t num_steps) {
    ErcChoiceSummary s;
    s.setting = setting;
    double correct = 0.0, chance = 0.0;
    for (const auto& r : records) {
        if (r.setting != setting) continue;
        const double hit = erc_choice_correct(r) ? 1.0 : 0.0;
        const double base = erc_choice_baseline(r);
        correct += hit;
        chance += base;
        s.excess_sum += hit - base;
        ++s.records;
    }
    if (s.records == 0) return s;
    const auto k = static_cast<double>(s.records);
    s.raw_accuracy = correct / k;
    s.baseline = chance / k;
    s.excess = s.raw_accuracy - s.baseline;
    s.excess_scaled = static_cast<double>(num_steps) * s.excess;
    return s;
}

}  // namespace fairplay::metrics
