// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// non-zero when any criterion fails. Every expected value is recomputed here
// from first principles rather than read back from the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairplay/core/log.hpp"
#include "fairplay/llm/prompts.hpp"
#include "fairplay/measures/enumeration.hpp"
#include "fairplay/measures/tradeoff.hpp"
#include "fairplay/measures/verification.hpp"
#include "fairplay/metrics/erc.hpp"
#include "fairplay/metrics/story_metrics.hpp"
#include "fairplay/runner/commands.hpp"
#include "fairplay/synthetic/detectives.hpp"
#include "fairplay/synthetic/presets.hpp"

using namespace fairplay;
using namespace fairplay::measures;
using synthetic::SyntheticWorld;
namespace fs = std::filesystem;

namespace {

constexpr double kLogFloor = 1e-9;
const double kLn4 = std::log(4.0);

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// p(y, c_1..c_i) for every prefix of every length, obtained by summing the
// weight prior(y) * prod_j kernel of every full clue sequence that extends it.
// Prefix c_1..c_i has index sum_j c_j * a^(i - j).
class JointTable {
public:
    explicit JointTable(const SyntheticWorld& w) : k_(w.num_suspects()), a_(w.alphabet_size()), n_(w.num_steps()) {
        level_.resize(n_ + 1);
        std::size_t count = 1;
        for (std::size_t i = 0; i <= n_; ++i, count *= a_) level_[i].assign(count * k_, 0.0);
        std::vector<double> weight(k_);
        for (std::size_t y = 0; y < k_; ++y) weight[y] = w.prior()[y];
        ClueSequence seq;
        enumerate(w, seq, weight, 0);
        for (std::size_t i = n_; i-- > 0;)
            for (std::size_t p = 0; p < prefixes(i); ++p)
                for (std::size_t c = 0; c < a_; ++c)
                    for (std::size_t y = 0; y < k_; ++y)
                        level_[i][p * k_ + y] += level_[i + 1][(p * a_ + c) * k_ + y];
    }

    std::size_t prefixes(std::size_t i) const { return level_[i].size() / k_; }
    std::size_t suspects() const { return k_; }
    std::size_t steps() const { return n_; }
    std::size_t alphabet() const { return a_; }
    const double* row(std::size_t i, std::size_t p) const { return level_[i].data() + p * k_; }
    std::vector<double> joint(std::size_t i, std::size_t p) const {
        return {level_[i].begin() + static_cast<std::ptrdiff_t>(p * k_),
                level_[i].begin() + static_cast<std::ptrdiff_t>((p + 1) * k_)};
    }
    double mass(std::size_t i, std::size_t p) const {
        double m = 0.0;
        for (double v : joint(i, p)) m += v;
        return m;
    }
    std::vector<double> posterior(std::size_t i, std::size_t p) const {
        auto j = joint(i, p);
        const double m = mass(i, p);
        for (double& v : j) v /= m;
        return j;
    }
    ClueSequence decode(std::size_t i, std::size_t p) const {
        ClueSequence seq(i);
        for (std::size_t j = i; j-- > 0; p /= a_) seq[j] = static_cast<Clue>(p % a_);
        return seq;
    }

private:
    void enumerate(const SyntheticWorld& w, ClueSequence& seq, const std::vector<double>& weight, std::size_t index) {
        if (seq.size() == n_) {
            for (std::size_t y = 0; y < k_; ++y) level_[n_][index * k_ + y] = weight[y];
            return;
        }
        const std::size_t step = seq.size() + 1;
        const auto ctx = w.context_of(seq);
        std::vector<double> next(k_);
        for (std::size_t c = 0; c < a_; ++c) {
            for (std::size_t y = 0; y < k_; ++y) next[y] = weight[y] * w.kernel(step, y, ctx, static_cast<Clue>(c));
            seq.push_back(static_cast<Clue>(c));
            enumerate(w, seq, next, index * a_ + c);
            seq.pop_back();
        }
    }

    std::size_t k_, a_, n_;
    std::vector<std::vector<double>> level_;
};

double cross_entropy(const std::vector<double>& ref, std::span<const double> reader) {
    double h = 0.0;
    for (std::size_t y = 0; y < ref.size(); ++y)
        if (ref[y] > 0.0) h -= ref[y] * std::log(std::max(reader[y], kLogFloor));
    return h;
}

// Differences of consecutive expected uninformedness values: C-Eff(i), i = 1..N.
std::vector<double> differences(const std::vector<double>& e) {
    std::vector<double> d;
    for (std::size_t i = 1; i < e.size(); ++i) d.push_back(e[i - 1] - e[i]);
    return d;
}

// Every clue sequence with positive mass, depth first, with `reader` kept in sync.
void walk(const JointTable& t, std::size_t i, std::size_t p, BeliefTracker& reader,
          const std::function<void(std::size_t, std::size_t)>& visit) {
    if (t.mass(i, p) <= 0.0) return;
    visit(i, p);
    if (i == t.steps()) return;
    for (std::size_t c = 0; c < t.alphabet(); ++c) {
        reader.push(static_cast<Clue>(c));
        walk(t, i + 1, p * t.alphabet() + c, reader, visit);
        reader.pop();
    }
}

std::size_t strict_argmax(std::span<const double> v, bool* unique) {
    std::size_t best = 0;
    for (std::size_t y = 1; y < v.size(); ++y)
        if (v[y] > v[best]) best = y;
    *unique = true;
    for (std::size_t y = 0; y < v.size(); ++y)
        if (y != best && v[y] == v[best]) *unique = false;
    return best;
}

// --- synthetic criteria -------------------------------------------------

struct WorldSweep {
    Outcome oracle, know_it_all, total_information;
};

WorldSweep sweep_random_worlds() {
    WorldSweep r;
    double max_posterior_diff = 0.0, min_ceff = 1e300, max_ceff_diff = 0.0, max_total_diff = 0.0;
    std::size_t compared = 0, impossible = 0, rejections_checked = 0, not_conclusive = 0;
    bool throws_ok = true;
    double oracle_seconds = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto world = synthetic::random_world(seed);
        const auto t0 = std::chrono::steady_clock::now();
        const JointTable table(world);
        // Depth-first over every prefix, extended in place. Impossible
        // prefixes must be rejected; a deterministic sample of them is checked.
        ClueSequence prefix;
        auto visit = [&](auto&& self, std::size_t p) -> void {
            const std::size_t i = prefix.size();
            const double* joint = table.row(i, p);
            double mass = 0.0;
            for (std::size_t y = 0; y < table.suspects(); ++y) mass += joint[y];
            if (mass <= 0.0) {
                if (impossible++ % 997 == 0) {
                    ++rejections_checked;
                    try {
                        synthetic::brilliant_detective(world, prefix);
                        throws_ok = false;
                    } catch (const synthetic::ZeroProbabilityPrefix&) {
                    }
                }
            } else {
                const auto got = synthetic::brilliant_detective(world, prefix);
                for (std::size_t y = 0; y < table.suspects(); ++y)
                    max_posterior_diff = std::max(max_posterior_diff, std::abs(got[y] - joint[y] / mass));
                ++compared;
            }
            if (i == table.steps()) return;
            for (std::size_t c = 0; c < table.alphabet(); ++c) {
                prefix.push_back(static_cast<Clue>(c));
                self(self, p * table.alphabet() + c);
                prefix.pop_back();
            }
        };
        visit(visit, 0);
        oracle_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::vector<double> expected_h(table.steps() + 1, 0.0);
        for (std::size_t i = 0; i <= table.steps(); ++i)
            for (std::size_t p = 0; p < table.prefixes(i); ++p) {
                const double m = table.mass(i, p);
                if (m <= 0.0) continue;
                const auto post = table.posterior(i, p);
                expected_h[i] += m * cross_entropy(post, post);
                if (i == table.steps() && *std::max_element(post.begin(), post.end()) != 1.0) ++not_conclusive;
            }
        const auto oracle_ceff = differences(expected_h);

        const auto scenario = Scenario::single_world(world);
        auto reader = scenario.make_reader(ReaderKind::KnowItAll);
        BeliefTracker* readers[] = {reader.get()};
        const auto eu = expected_uninformedness(scenario, readers, {ExpectationMode::Exact, 0, 1, kLogFloor});
        const auto ceff = clue_effectiveness_series(eu.per_reader[0]);
        double total = 0.0;
        for (std::size_t i = 0; i < ceff.size(); ++i) {
            min_ceff = std::min(min_ceff, ceff[i]);
            max_ceff_diff = std::max(max_ceff_diff, std::abs(ceff[i] - oracle_ceff[i]));
            total += ceff[i];
        }
        max_total_diff = std::max(max_total_diff, std::abs(total - kLn4));
    }
    r.oracle.pass = max_posterior_diff <= 1e-12 && throws_ok && oracle_seconds < 10.0;
    r.oracle.detail = std::to_string(compared) + " prefixes, max |diff| " + num(max_posterior_diff) + ", " +
                      std::to_string(impossible) + " impossible (" + std::to_string(rejections_checked) + " sampled, " +
                      (throws_ok ? "all rejected" : "NOT all rejected") + ")" +
                      ", " + num(oracle_seconds) + " s";
    r.know_it_all.pass = min_ceff >= -1e-9 && max_ceff_diff <= 1e-9;
    r.know_it_all.detail = "min C-Eff " + num(min_ceff) + ", max |library - oracle| " + num(max_ceff_diff);
    r.total_information.pass = not_conclusive == 0 && max_total_diff <= 1e-9;
    r.total_information.detail = "max |sum C-Eff - ln 4| " + num(max_total_diff) + " over 100 worlds, " +
                                 std::to_string(not_conclusive) + " non-point-mass endings";
    return r;
}

// Each culprit y may open with the clue of its decoy y+1 and then repeat it.
// Clue-by-clue marginals credit the decoy at every repeat, so the gullible
// reader ends up confidently wrong often enough to be strongly surprised.
SyntheticWorld decoy_world(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double q = 0.15 + 0.15 * unit(rng), own = 0.85 + 0.15 * unit(rng);
    const std::size_t n = 8;
    SyntheticWorld w({{"A", "B", "C", "D"}, {"a", "b", "c", "d", "n"}, n, 1});
    for (SuspectIndex y = 0; y < 4; ++y) {
        const SuspectIndex d = (y + 1) % 4;
        const std::size_t decoy_ctx = w.advance_context(SyntheticWorld::kEmptyContext, static_cast<Clue>(d));
        for (std::size_t step = 1; step <= n; ++step)
            for (std::size_t ctx = 0; ctx < w.num_contexts(); ++ctx) {
                std::vector<double> row(5, 0.0);
                if (step == n) {
                    row[y] = 1.0;
                } else if (step > 1 && ctx == decoy_ctx) {
                    row[d] = 1.0;
                } else {
                    const double opening = step == 1 ? q : 0.0;
                    row[d] = opening;
                    row[y] = (1.0 - opening) * own;
                    row[4] = (1.0 - opening) * (1.0 - own);
                }
                w.set_row(step, y, ctx, row);
            }
        w.set_conclusive(static_cast<Clue>(y), y);
        w.set_distractor(y, d);
    }
    w.validate();
    return w;
}

Outcome tradeoff_sweep() {
    Outcome o;
    std::size_t violations = 0, incoherent = 0, b1 = 0, b2 = 0;
    const synthetic::RandomWorldOptions small{4, 6, 4, 1, true};
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto base = synthetic::random_world(seed + 1000, small);
        // Odd seeds: a single world. Even seeds: a near-identical two-component genre.
        // Every tenth seed: a decoy world, where the gullible reader is strongly surprised.
        const auto scenario =
            seed % 10 == 0 ? Scenario::single_world(decoy_world(seed))
            : seed % 2     ? Scenario::single_world(base)
                           : Scenario::genre(synthetic::GenreMixture({base, synthetic::perturbed_world(base, seed, 0.005)},
                                                                     ProbVector({0.5, 0.5})),
                                             0);
        for (auto assessed : {ReaderKind::Gullible, ReaderKind::Brilliant}) {
            MeasureConfig plain;
            plain.log_floor = kLogFloor;
            const auto ledger = build_tradeoff_ledger(scenario, plain, assessed, {ExpectationMode::Exact, 0, 1, kLogFloor});
            const auto thresholds = derive_thresholds(ledger, kLogFloor);
            if (!external_coherence_check(ledger, thresholds).all_passed()) ++incoherent;
            const auto report = verify_tradeoff(ledger, thresholds);
            violations += report.violations.size();
            b1 += report.bound1_checked;
            b2 += report.bound2_checked;
        }
    }

    // Strongly surprised at every step while delta_intel stays 0.1:
    // bound 1 needs 0.5 - 0.1 <= i * 0.001, which fails at i = 10.
    MeasureConfig c;
    c.delta_surprise = 0.5;
    c.epsilon_external = 0.001;
    std::vector<TradeoffRow> rows(10);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].step = i + 1;
        rows[i].delta_intel = 0.1;
        rows[i].expected_uninformedness = kLn4 + 0.6;
    }
    const auto hand = verify_tradeoff(TradeoffLedger(rows, 4, ReaderKind::Gullible, c), c);
    bool flagged = false;
    for (const auto& v : hand.violations)
        if (v.step == 10 && v.bound == 1 && std::abs(v.lhs - 0.4) < 1e-12 && std::abs(v.rhs - 0.01) < 1e-12)
            flagged = true;

    o.pass = violations == 0 && incoherent == 0 && b1 > 0 && b2 > 0 && flagged;
    o.detail = "400 ledgers over 200 configurations: " + std::to_string(violations) + " violations (bound 1 checked " +
               std::to_string(b1) + "x, bound 2 " + std::to_string(b2) + "x), " + std::to_string(incoherent) +
               " not externally coherent; hand ledger " + (flagged ? "flagged at step 10" : "NOT flagged");
    return o;
}

Outcome perturbed_reader_lemma() {
    Outcome o;
    constexpr double eps = 0.01;
    double worst_log_gap = 0.0, worst_ratio = 0.0, worst_library_diff = 0.0;
    std::size_t library_failures = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto world = synthetic::random_world(seed + 2000);
        const JointTable table(world);
        const auto scenario = Scenario::single_world(world);
        PerturbedTracker reader(scenario.make_reader(ReaderKind::Brilliant), seed, eps);
        std::vector<double> e_ref(table.steps() + 1, 0.0), e_reader(table.steps() + 1, 0.0);
        walk(table, 0, 0, reader, [&](std::size_t i, std::size_t p) {
            const auto post = table.posterior(i, p);
            const auto b = reader.belief();
            for (std::size_t y = 0; y < post.size(); ++y) {
                if (post[y] > 0.0 && b[y] > 0.0)
                    worst_log_gap = std::max(worst_log_gap, std::abs(std::log(b[y]) - std::log(post[y])));
                else if ((post[y] > 0.0) != (b[y] > 0.0))
                    worst_log_gap = INFINITY;
            }
            const double m = table.mass(i, p);
            e_ref[i] += m * cross_entropy(post, post);
            e_reader[i] += m * cross_entropy(post, b);
        });
        const auto a = differences(e_ref), b = differences(e_reader);
        double max_gap = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) max_gap = std::max(max_gap, std::abs(a[i] - b[i]));
        worst_ratio = std::max(worst_ratio, max_gap / (2.0 * eps));

        reader.reset();
        const auto report = verify_lemma_intelligence(scenario, reader, eps, kLogFloor);
        if (!report.precondition_holds || !report.bound_holds) ++library_failures;
        worst_library_diff = std::max(worst_library_diff, std::abs(report.max_ceff_gap - max_gap));
    }
    o.pass = worst_log_gap <= eps + 1e-12 && worst_ratio <= 1.0 && library_failures == 0 && worst_library_diff <= 1e-9;
    o.detail = "50 seeds: max log gap " + num(worst_log_gap) + " (eps " + num(eps) + "), max |dC-Eff| / 2eps " +
               num(worst_ratio) + ", library reports failing " + std::to_string(library_failures) +
               ", library vs oracle gap " + num(worst_library_diff);
    return o;
}

Outcome genre_proposition() {
    Outcome o;
    constexpr double row_gap = 0.005;
    double worst_row = 0.0, worst_ratio = 0.0, worst_eps_diff = 0.0, worst_gap_diff = 0.0;
    std::size_t library_failures = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto a = synthetic::random_world(seed + 3000);
        const auto b = synthetic::perturbed_world(a, seed, row_gap);
        for (std::size_t step = 1; step <= a.num_steps(); ++step)
            for (std::size_t y = 0; y < a.num_suspects(); ++y)
                for (std::size_t ctx = 0; ctx < a.num_contexts(); ++ctx) {
                    const auto ra = a.row(step, y, ctx), rb = b.row(step, y, ctx);
                    for (std::size_t c = 0; c < ra.size(); ++c) {
                        if (ra[c] > 0.0 && rb[c] > 0.0)
                            worst_row = std::max(worst_row, std::abs(std::log(rb[c] / ra[c])));
                        else if ((ra[c] > 0.0) != (rb[c] > 0.0))
                            worst_row = INFINITY;
                    }
                }

        const JointTable ta(a), tb(b);
        double eps_g = 0.0;
        std::vector<double> e_own(ta.steps() + 1, 0.0), e_genre(ta.steps() + 1, 0.0);
        for (std::size_t i = 0; i <= ta.steps(); ++i)
            for (std::size_t p = 0; p < ta.prefixes(i); ++p) {
                const double m = ta.mass(i, p);
                if (m <= 0.0) continue;
                const auto own = ta.posterior(i, p);
                auto genre = ta.joint(i, p);
                const auto other = tb.joint(i, p);
                double total = 0.0;
                for (std::size_t y = 0; y < genre.size(); ++y) total += (genre[y] += other[y]);
                for (double& v : genre) v /= total;
                for (std::size_t y = 0; y < own.size(); ++y) {
                    if (own[y] > 0.0 && genre[y] > 0.0)
                        eps_g = std::max(eps_g, std::abs(std::log(genre[y]) - std::log(own[y])));
                    else if ((own[y] > 0.0) != (genre[y] > 0.0))
                        eps_g = INFINITY;
                }
                e_own[i] += m * cross_entropy(own, own);
                e_genre[i] += m * cross_entropy(own, genre);
            }
        const auto c_own = differences(e_own), c_genre = differences(e_genre);
        double max_gap = 0.0;
        for (std::size_t i = 0; i < c_own.size(); ++i) max_gap = std::max(max_gap, std::abs(c_own[i] - c_genre[i]));
        worst_ratio = std::max(worst_ratio, max_gap / (2.0 * eps_g));

        const synthetic::GenreMixture mixture({a, b}, ProbVector({0.5, 0.5}));
        const auto report = verify_genre_proposition(mixture, 0, std::nullopt, kLogFloor);
        if (!report.precondition_holds || !report.bound_holds) ++library_failures;
        worst_eps_diff = std::max(worst_eps_diff, std::abs(report.measured_epsilon - eps_g));
        worst_gap_diff = std::max(worst_gap_diff, std::abs(report.max_ceff_gap - max_gap));
    }
    o.pass = worst_row <= row_gap + 1e-12 && worst_ratio <= 1.0 && library_failures == 0 && worst_eps_diff <= 1e-9 &&
             worst_gap_diff <= 1e-9;
    o.detail = "20 mixtures: max row log ratio " + num(worst_row) + ", max external-coherence gap / 2eps_g " +
               num(worst_ratio) + ", library reports failing " + std::to_string(library_failures) +
               ", library vs oracle eps " + num(worst_eps_diff) + " gap " + num(worst_gap_diff);
    return o;
}

Outcome misleading_preset() {
    Outcome o;
    const auto world = synthetic::misleading_world();
    const JointTable table(world);
    const std::size_t n = table.steps(), k = table.suspects();

    // Per-position clue marginals p(c_j = c | y) from the full-sequence table.
    std::vector<double> marg(n * k * table.alphabet(), 0.0), prior(k, 0.0);
    for (std::size_t p = 0; p < table.prefixes(n); ++p) {
        const auto j = table.joint(n, p);
        const auto seq = table.decode(n, p);
        for (std::size_t y = 0; y < k; ++y) {
            for (std::size_t pos = 0; pos < n; ++pos)
                marg[(pos * k + y) * table.alphabet() + static_cast<std::size_t>(seq[pos])] += j[y];
            prior[y] += j[y];
        }
    }
    for (std::size_t pos = 0; pos < n; ++pos)
        for (std::size_t y = 0; y < k; ++y)
            for (std::size_t c = 0; c < table.alphabet(); ++c) marg[(pos * k + y) * table.alphabet() + c] /= prior[y];

    std::size_t witnesses = 0;
    double gullible_diff = 0.0;
    std::string first;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t p = 0; p < table.prefixes(i); ++p) {
            if (table.mass(i, p) <= 0.0) continue;
            const auto prefix = table.decode(i, p);
            const auto post = table.posterior(i, p);
            std::vector<double> g(k);
            double total = 0.0;
            for (std::size_t y = 0; y < k; ++y) {
                g[y] = prior[y];
                for (std::size_t pos = 0; pos < i; ++pos)
                    g[y] *= marg[(pos * k + y) * table.alphabet() + static_cast<std::size_t>(prefix[pos])];
                total += g[y];
            }
            if (total <= 0.0) continue;
            for (double& v : g) v /= total;
            const auto lib = synthetic::gullible_detective(world, prefix);
            for (std::size_t y = 0; y < k; ++y) gullible_diff = std::max(gullible_diff, std::abs(lib[y] - g[y]));

            bool ug = false, ub = false;
            const auto g_top = strict_argmax(g, &ug);
            const auto b_top = strict_argmax(post, &ub);
            const auto lib_b = synthetic::posterior(world, prefix);
            if (!ug || !ub || lib.argmax() != g_top || lib_b.argmax() != b_top) continue;
            const auto d = world.distractor_of(b_top);
            if (post[b_top] > 0.0 && d && *d == g_top) {
                if (witnesses++ == 0) {
                    first = "step " + std::to_string(i) + " after";
                    for (auto c : prefix) first += " " + world.alphabet()[static_cast<std::size_t>(c)];
                    first += ": gullible " + world.suspects()[g_top] + " " + num(g[g_top]) + ", brilliant " +
                             world.suspects()[b_top] + " " + num(post[b_top]);
                }
            }
        }
    o.pass = witnesses > 0 && gullible_diff <= 1e-12;
    o.detail = std::to_string(witnesses) + " prefixes where the gullible reader backs the distractor and the "
               "brilliant one the culprit" + (first.empty() ? "" : " (first: " + first + ")") +
               "; gullible vs marginal-product oracle " + num(gullible_diff);
    return o;
}

// --- CSV helpers ---------------------------------------------------------

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                out.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back();
        } else {
            out.back() += ch;
        }
    }
    return out;
}

using Row = std::map<std::string, std::string>;

std::vector<Row> read_csv(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::vector<Row> rows;
    if (!std::getline(in, line)) return rows;
    const auto header = split_csv(line);
    while (std::getline(in, line)) {
        const auto f = split_csv(line);
        Row r;
        for (std::size_t c = 0; c < header.size() && c < f.size(); ++c) r[header[c]] = f[c];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome metric_identities(const fs::path& analysis) {
    Outcome o;
    std::size_t fp_rows = 0, fp_bad = 0;
    for (const auto& r : read_csv(analysis / "metrics.csv")) {
        ++fp_rows;
        if (std::stod(r.at("s_fp")) != std::stod(r.at("s_c")) - std::stod(r.at("s_s"))) ++fp_bad;
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto world = synthetic::random_world(seed + 4000);
        const auto story = synthetic::sample_story(world, seed);
        const auto curves = synthetic::reading_curves(world, story.clues);
        const double s = metrics::surprise_score(curves.gullible, story.culprit, world.num_steps());
        const double c = metrics::coherence_score(curves.know_it_all, story.culprit, world.num_steps());
        ++fp_rows;
        if (metrics::fair_play_score(s, c, world.num_steps()).value != c - s) ++fp_bad;
    }

    // A suspicion phase on the distractor, then the culprit rises to the confession.
    const std::vector<double> culprit = {0.20, 0.15, 0.10, 0.10, 0.05, 0.05, 0.10, 0.30, 0.90, 1.00};
    std::vector<CurveStep> steps{{0, ProbVector::uniform(4)}};
    for (std::size_t i = 0; i < culprit.size(); ++i) {
        const double rest = 1.0 - culprit[i];
        steps.push_back({i + 1, ProbVector::from_approximate({culprit[i], 0.8 * rest, 0.1 * rest, 0.1 * rest}, 1e-9)});
    }
    const double hand = (0.20 + 0.15 + 0.10 + 0.10 + 0.05 + 0.05 + 0.10 + 0.30 + 0.90 + 1.00) / 10.0;
    const double fig = metrics::surprise_score(ReadingCurve("gullible", steps), 0, culprit.size());
    const double fig_diff = std::abs(fig - hand);

    double worst_erc = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto world = synthetic::independent_clue_world(seed);
        for (std::size_t r = 1; r <= world.num_steps(); ++r) {
            const auto e = metrics::erc_exact(world, r);
            worst_erc = std::max(worst_erc, std::abs(e.mean));
            for (double v : e.per_position) worst_erc = std::max(worst_erc, std::abs(v));
        }
    }
    o.pass = fp_rows > 20 && fp_bad == 0 && fig_diff <= 1e-12 && worst_erc <= 1e-9;
    o.detail = "S_FP = S_C - S_S on " + std::to_string(fp_rows - fp_bad) + "/" + std::to_string(fp_rows) +
               " rows; scripted S_S " + num(fig) + " vs hand " + num(hand) + " (|diff| " + num(fig_diff) +
               "); max |erc_exact| on independence worlds " + num(worst_erc);
    return o;
}

// --- pipeline ------------------------------------------------------------

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    return files;
}

runner::CommandResult run_pipeline(const fs::path& out) {
    runner::RunConfig g;
    g.mode = "generate";
    g.seed = 11;
    g.stories = 3;
    g.paragraphs = 8;
    g.output_dir = out.string();
    auto r = runner::run_command(g);
    if (!r.ok()) return r;
    runner::RunConfig a = g;
    a.mode = "analyze";
    a.samples_per_step = 6;
    a.backend.max_parallel = 2;
    return runner::run_command(a);
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
    return s;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
    return n;
}

// The deterministic mock judge scores suspect x on a text as
// 1 + mentions(x) + 2 * mentions("Suspicion falls on x"), or 0.85 for the
// confessed suspect and 0.05 for the others once "x confessed" appears;
// scores are normalized and rounded to three decimals in the reply, which the
// reader then renormalizes.
std::vector<double> mock_judge(const std::string& text, const std::vector<std::string>& names) {
    std::vector<double> w(names.size());
    std::optional<std::size_t> confessed;
    for (std::size_t x = 0; x < names.size(); ++x) {
        w[x] = 1.0 + static_cast<double>(count_of(text, names[x])) +
               2.0 * static_cast<double>(count_of(text, "Suspicion falls on " + names[x]));
        if (!confessed && text.find(names[x] + " confessed") != std::string::npos) confessed = x;
    }
    if (confessed)
        for (std::size_t x = 0; x < names.size(); ++x)
            w[x] = x == *confessed ? 0.85 : 0.15 / static_cast<double>(names.size() - 1);
    double total = 0.0;
    for (double v : w) total += v;
    double rounded_total = 0.0;
    for (double& v : w) rounded_total += (v = std::round(v / total * 1000.0) / 1000.0);
    for (double& v : w) v /= rounded_total;
    return w;
}

bool close(const std::string& field, double expected, double tol = 1e-12) {
    return std::abs(std::stod(field) - expected) <= tol;
}

// Recomputes one metrics row from the story text, the tallies table and the
// multiple-choice log. Returns an empty string when everything matches.
std::string check_row(const Row& row, const fs::path& run) {
    const std::string id = row.at("story");
    const auto doc = nlohmann::json::parse(slurp(run / "generate" / "stories" / (id + ".json")));
    const auto paragraphs = doc.at("story").at("paragraphs").get<std::vector<std::string>>();
    const std::size_t n = paragraphs.size();

    const std::string head = "Marlow House: ";
    const auto a = paragraphs[0].find(head) + head.size();
    std::string list = paragraphs[0].substr(a, paragraphs[0].rfind('.') - a);
    list = replace_all(list, " and ", ", ");
    std::vector<std::string> names;
    for (std::size_t s = 0, e; s <= list.size(); s = e + 2) {
        e = list.find(", ", s);
        if (e == std::string::npos) e = list.size();
        names.push_back(list.substr(s, e - s));
    }
    std::size_t truth = names.size();
    for (std::size_t x = 0; x < names.size(); ++x)
        if (paragraphs.back().find(names[x] + " confessed") != std::string::npos) truth = x;
    if (truth == names.size()) return id + ": no confession in the last paragraph";

    std::vector<double> gullible;
    std::string text;
    for (std::size_t i = 1; i <= n; ++i) {
        text += (i > 1 ? "\n\n" : "") + paragraphs[i - 1];
        gullible.push_back(mock_judge(text, names)[truth]);
    }
    double s_s = 0.0;
    for (double v : gullible) s_s += v;
    s_s /= static_cast<double>(n);
    std::size_t revelation = n;
    for (std::size_t i = n; i >= 1 && gullible[i - 1] > 0.5; --i) revelation = i;

    const auto tallies = read_csv(run / "analysis" / "tallies" / (id + ".csv"));
    if (tallies.size() != n + 1) return id + ": tallies table has " + std::to_string(tallies.size()) + " rows";
    const std::size_t k_samples = 6;
    double s_c = 0.0, carried = 0.25;
    for (std::size_t i = 0; i <= n; ++i) {
        const auto& t = tallies[i];
        const double valid = std::stod(t.at("valid"));
        if (2.0 * valid >= static_cast<double>(k_samples))
            carried = (std::stod(t.at(names[truth])) + 0.25) / (valid + 1.0);
        if (!close(t.at("smoothed_true_culprit"), (std::stod(t.at(names[truth])) + 0.25) / (valid + 1.0)))
            return id + ": smoothed frequency at step " + std::to_string(i);
        if (i > 0) s_c += carried;
    }
    s_c /= static_cast<double>(n);

    std::map<std::string, std::pair<double, double>> erc;  // setting -> (correct, chance)
    std::map<std::string, std::size_t> records;
    for (const auto& e : read_csv(run / "analysis" / "erc" / (id + ".csv"))) {
        std::vector<double> probs;
        std::istringstream ps(e.at("probabilities"));
        for (double v; ps >> v;) probs.push_back(v);
        const auto picked = static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
        if (std::to_string(picked) != e.at("picked")) return id + ": pick is not the judge's top option";
        const bool correct = e.at("picked") == e.at("true_option") || e.at("picked_culprit") == e.at("true_culprit");
        if (e.at("true_culprit") != names[truth]) return id + ": multiple-choice culprit differs";
        const double chance = std::stod(e.at("chance"));
        if (!(chance >= 1.0 / static_cast<double>(probs.size()) - 1e-12 && chance <= 1.0))
            return id + ": chance level out of range";
        erc[e.at("setting")].first += correct ? 1.0 : 0.0;
        erc[e.at("setting")].second += chance;
        ++records[e.at("setting")];
    }

    std::string bad;
    auto expect = [&](const std::string& col, double v) {
        if (!close(row.at(col), v)) bad += " " + col + " " + row.at(col) + " vs " + num(v);
    };
    if (row.at("g_val") != "1") bad += " g_val";
    expect("culprit_confidence", 0.85);
    if (row.at("revelation") != std::to_string(revelation)) bad += " revelation";
    expect("s_s", s_s);
    expect("s_c", s_c);
    expect("s_fp", s_c - s_s);
    expect("s_fp_scaled", static_cast<double>(n) * (s_c - s_s));
    for (const auto& [setting, col] : {std::pair{metrics::ErcSetting::AfterRevelation, std::string("erc_ar")},
                                       std::pair{metrics::ErcSetting::BeforeRevelation, std::string("erc_br")}}) {
        const auto name = metrics::to_string(setting);
        const double count = static_cast<double>(records[name]);
        if (row.at(col + "_records") != std::to_string(records[name])) bad += " " + col + "_records";
        if (count == 0) continue;
        const double excess = erc[name].first / count - erc[name].second / count;
        expect(col, excess);
        expect(col + "_scaled", static_cast<double>(n) * excess);
        expect(col + "_raw", erc[name].first / count);
    }
    return bad.empty() ? "" : id + ":" + bad;
}

Outcome pipeline(const fs::path& scratch, fs::path* analysis_dir) {
    Outcome o;
    const fs::path a = scratch / "run-a", b = scratch / "run-b";
    const auto ra = run_pipeline(a);
    const auto rb = run_pipeline(b);
    *analysis_dir = a / "analysis";
    if (!ra.ok() || !rb.ok()) {
        o.pass = false;
        o.detail = "pipeline run failed";
        return o;
    }
    const auto ta = tree(a), tb = tree(b);
    std::size_t differing = ta.size() == tb.size() ? 0 : 1;
    for (const auto& [path, content] : ta) {
        const auto it = tb.find(path);
        if (it == tb.end() || it->second != content) ++differing;
    }

    const auto golden = [](const std::string& name) { return slurp(fs::path(FAIRPLAY_GOLDEN_DIR) / name); };
    const std::string options_slot = "<list of the optional paragraphs, in the form a. first paragraph, b. second paragraph>";
    std::vector<std::string> prompt_mismatch;
    auto prompt = [&](const std::string& name, bool ok) {
        if (!ok) prompt_mismatch.push_back(name);
    };
    prompt("system", std::string(llm::kSystemPrompt) == golden("system_prompt.txt"));
    prompt("generation", llm::generation_instruction(8) == replace_all(golden("generation_prompt.txt"),
                                                                       "<story length>", "8"));
    prompt("acknowledgement", std::string(llm::kGenerationAck) == golden("generation_ack.txt"));
    const auto request = replace_all(golden("paragraph_request.txt"), "<story length>", "8");
    prompt("paragraph request", llm::paragraph_request(3, 8) == replace_all(request, "<i + 1>", "3"));
    prompt("last paragraph", llm::paragraph_request(8, 8) ==
                                 replace_all(request, "<i + 1>", "8") + " " + golden("last_paragraph_note.txt"));
    prompt("gullible", llm::gullible_prompt("Once.", std::string("Ann, Bo")) ==
                           replace_all(replace_all(golden("gullible_prompt.txt"), "<story text>", "Once."),
                                       "<list of suspects>", "Ann, Bo"));
    prompt("fill", llm::fill_prompt("Once.", "a. x") ==
                       replace_all(replace_all(golden("fill_prompt.txt"), "<story text>", "Once."), options_slot,
                                   "a. x"));
    // The stored transcripts carry the same texts.
    const auto doc = nlohmann::json::parse(slurp(a / "generate" / "stories" / "story-001.json"));
    const auto& messages = doc.at("transcript").at("messages");
    prompt("transcript", messages.at(0).at("content") == golden("system_prompt.txt") &&
                             messages.at(1).at("content") == llm::generation_instruction(8));

    std::vector<std::string> row_errors;
    const auto rows = read_csv(a / "analysis" / "metrics.csv");
    for (const auto& r : rows)
        if (auto e = check_row(r, a); !e.empty()) row_errors.push_back(e);

    o.pass = differing == 0 && prompt_mismatch.empty() && rows.size() == 3 && row_errors.empty();
    o.detail = std::to_string(ta.size()) + " files, " + std::to_string(differing) + " differ between runs; ";
    o.detail += prompt_mismatch.empty() ? "prompts match the golden texts; " : "prompt mismatch:";
    for (const auto& m : prompt_mismatch) o.detail += " " + m + ";";
    o.detail += std::to_string(rows.size() - row_errors.size()) + "/" + std::to_string(rows.size()) +
                " analyze rows match the hand oracle";
    for (const auto& e : row_errors) o.detail += " [" + e + "]";
    return o;
}

}  // namespace

int main() {
    set_warning_sink([](std::string_view) {});
    const fs::path scratch = fs::temp_directory_path() / "fairplay-acceptance";
    fs::remove_all(scratch);

    std::vector<std::pair<std::string, Outcome>> results;
    const auto sweep = sweep_random_worlds();
    results.emplace_back("oracle equivalence", sweep.oracle);
    results.emplace_back("know-it-all clue effectiveness is non-negative", sweep.know_it_all);
    results.emplace_back("total information identity", sweep.total_information);
    results.emplace_back("tradeoff bounds", tradeoff_sweep());
    results.emplace_back("perturbed brilliant reader lemma", perturbed_reader_lemma());
    results.emplace_back("near-identical genre proposition", genre_proposition());
    results.emplace_back("misleading preset suspicion phase", misleading_preset());
    fs::path analysis;
    auto repro = pipeline(scratch, &analysis);
    results.emplace_back("metric identities", metric_identities(analysis));
    results.emplace_back("pipeline reproducibility", std::move(repro));

    bool all = true;
    for (const auto& [name, o] : results) {
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
        all = all && o.pass;
    }
    fs::remove_all(scratch);
    return all ? 0 : 1;
}
