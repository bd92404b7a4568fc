#include <doctest.h>

#include <cmath>

#include "fairplay/synthetic/detectives.hpp"
#include "fairplay/synthetic/presets.hpp"
#include "fairplay/synthetic/world_io.hpp"
#include "oracle.hpp"

using namespace fairplay;
using namespace fairplay::synthetic;

namespace {

void check_close(const ProbVector& got, const std::vector<double>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t y = 0; y < want.size(); ++y) CHECK(std::abs(got[y] - want[y]) <= tol);
}

RandomWorldOptions small_options(std::size_t n = 6) {
    RandomWorldOptions o;
    o.num_steps = n;
    return o;
}

}  // namespace

TEST_CASE("deterministic world samples its unique sequence") {
    const auto w = deterministic_world();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = sample_story(w, seed);
        CHECK(s.clues.front() == static_cast<Clue>(s.culprit));
        CHECK(s.clues.back() == static_cast<Clue>(s.culprit));
        for (std::size_t i = 1; i + 1 < s.clues.size(); ++i) CHECK(s.clues[i] == 4);
    }
}

TEST_CASE("sampling is deterministic under a seed and consistent with the conclusive rule") {
    const auto w = random_world(3);
    const auto a = sample_story(w, 99), b = sample_story(w, 99);
    CHECK(a.clues == b.clues);
    CHECK(a.culprit == b.culprit);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = sample_story(w, seed);
        CHECK(w.conclusive_rule(s.clues) == s.culprit);
    }
}

TEST_CASE("culprit frequencies follow the prior within 3 sigma") {
    auto w = random_world(5);
    w.set_prior(ProbVector({0.1, 0.2, 0.3, 0.4}));
    constexpr int kSamples = 10000;
    std::vector<int> counts(4, 0);
    for (int s = 0; s < kSamples; ++s) ++counts[sample_story(w, static_cast<std::uint64_t>(s)).culprit];
    for (std::size_t y = 0; y < 4; ++y) {
        const double p = w.prior()[y];
        const double sigma = std::sqrt(p * (1 - p) / kSamples);
        CHECK(std::abs(counts[y] / double(kSamples) - p) <= 3 * sigma);
    }
}

TEST_CASE("brilliant detective basics") {
    const auto w = random_world(11, small_options());
    check_close(brilliant_detective(w, {}), {0.25, 0.25, 0.25, 0.25}, 1e-12);
    const auto s = sample_story(w, 4);
    const auto full = brilliant_detective(w, s.clues);
    CHECK(full[s.culprit] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("brilliant detective follows edits to the world") {
    auto w = random_world(11, small_options());
    const auto s = sample_story(w, 4);
    const std::span<const Clue> prefix(s.clues.data(), 3);
    const auto before = brilliant_detective(w, prefix);
    const auto stamp = w.revision();

    w.set_prior(ProbVector({0.7, 0.1, 0.1, 0.1}));
    CHECK(w.revision() != stamp);
    const oracle::JointTable table(w);
    const auto got = brilliant_detective(w, prefix);
    const auto want = table.posterior(prefix);
    for (std::size_t y = 0; y < 4; ++y) CHECK(std::abs(got[y] - want[y]) <= 1e-12);
    CHECK(got[0] != doctest::Approx(before[0]));

    const SyntheticWorld copy = w;
    CHECK(copy.revision() != w.revision());
    const auto again = brilliant_detective(copy, prefix);
    for (std::size_t y = 0; y < 4; ++y) CHECK(again[y] == doctest::Approx(got[y]).epsilon(1e-12));
}

TEST_CASE("brilliant detective matches the joint-table oracle") {
    for (std::uint64_t seed : {1, 2, 3}) {
        for (std::size_t k : {1, 2}) {
            auto opts = small_options();
            opts.context_order = k;
            const auto w = random_world(seed, opts);
            const oracle::JointTable table(w);
            for (std::uint64_t t = 0; t < 5; ++t) {
                const auto s = sample_story(w, 100 + t);
                for (std::size_t i = 0; i <= s.clues.size(); ++i) {
                    const std::span<const Clue> prefix(s.clues.data(), i);
                    check_close(brilliant_detective(w, prefix), table.brilliant(w, prefix), 1e-12);
                    check_close(posterior(w, prefix), table.posterior(prefix), 1e-12);
                }
            }
        }
    }
}

TEST_CASE("impossible prefixes are errors") {
    const auto w = deterministic_world();
    const ClueSequence bad = {0, 1};
    CHECK_THROWS_AS(brilliant_detective(w, bad), ZeroProbabilityPrefix);
    CHECK_THROWS_AS(know_it_all_reader(w, bad), ZeroProbabilityPrefix);
    CHECK_THROWS_AS(brilliant_detective(w, ClueSequence(9, 4)), std::out_of_range);
}

TEST_CASE("posterior is a martingale over the next clue") {
    const auto w = random_world(21, small_options());
    const auto s = sample_story(w, 8);
    for (std::size_t i = 0; i < s.clues.size(); ++i) {
        ClueSequence prefix(s.clues.begin(), s.clues.begin() + static_cast<long>(i));
        const auto now = brilliant_detective(w, prefix);
        const auto joint = w.joint_weights(prefix);
        double mass = 0.0;
        for (double v : joint) mass += v;
        std::vector<double> expected(4, 0.0);
        for (Clue c = 0; c < 5; ++c) {
            prefix.push_back(c);
            const auto next_joint = w.joint_weights(prefix);
            double p = 0.0;
            for (double v : next_joint) p += v;
            if (p > 0.0) {
                const auto next = brilliant_detective(w, prefix);
                for (std::size_t y = 0; y < 4; ++y) expected[y] += p / mass * next[y];
            }
            prefix.pop_back();
        }
        check_close(now, expected, 1e-9);
    }
}

TEST_CASE("gullible detective") {
    const auto w = random_world(17, small_options());
    CHECK(gullible_detective(w, {}) == ProbVector::uniform(4));
    const oracle::JointTable table(w);
    const auto s = sample_story(w, 2);
    for (std::size_t i = 0; i <= s.clues.size(); ++i) {
        const std::span<const Clue> prefix(s.clues.data(), i);
        check_close(gullible_detective(w, prefix), table.gullible(prefix), 1e-12);
    }
    const ClueSequence three(s.clues.begin(), s.clues.begin() + 3);
    std::vector<double> last(4);
    for (std::size_t y = 0; y < 4; ++y) last[y] = table.marginal(3, y, s.clues[2]);
    double total = 0.0;
    for (double v : last) total += v;
    for (double& v : last) v /= total;
    check_close(gullible_detective(w, three, GullibleVariant::LastClue), last, 1e-12);
}

TEST_CASE("a deterministic indicator clue forces the gullible belief") {
    const auto w = deterministic_world();
    const ClueSequence prefix = {1};
    CHECK(gullible_detective(w, prefix) == ProbVector::point_mass(4, 1));
}

TEST_CASE("misleading preset: gullible suspects the distractor, brilliant the culprit") {
    const auto w = misleading_world();
    const oracle::JointTable table(w);
    const SuspectIndex culprit = 0;
    const SuspectIndex distractor = *w.distractor_of(culprit);
    const Clue d = static_cast<Clue>(distractor);
    const ClueSequence prefix = {d, d, d};
    CHECK(table.prefix_joint(prefix)[culprit] > 0.0);
    const auto g = gullible_detective(w, prefix);
    const auto b = brilliant_detective(w, prefix);
    CHECK(g.argmax() == distractor);
    CHECK(b.argmax() == culprit);
    // Oracle agreement on both argmaxes.
    const auto og = table.gullible(prefix);
    const auto ob = table.brilliant(w, prefix);
    CHECK(std::max_element(og.begin(), og.end()) - og.begin() == static_cast<long>(distractor));
    CHECK(std::max_element(ob.begin(), ob.end()) - ob.begin() == static_cast<long>(culprit));
    // The gullible curve dips below uniform for the true culprit.
    CHECK(g[culprit] < 0.25);
}

TEST_CASE("know-it-all equals the brilliant detective in a single world") {
    const auto w = random_world(9, small_options());
    const auto s = sample_story(w, 1);
    for (std::size_t i = 0; i <= s.clues.size(); ++i) {
        const std::span<const Clue> prefix(s.clues.data(), i);
        CHECK(know_it_all_reader(w, prefix).approx_equal(brilliant_detective(w, prefix), 1e-12));
    }
}

TEST_CASE("genre detective") {
    const auto a = random_world(31, small_options(5));
    auto b = random_world(32, small_options(5));
    b.set_prior(ProbVector({0.4, 0.3, 0.2, 0.1}));

    SUBCASE("single component collapses") {
        GenreMixture one({a}, ProbVector({1.0}));
        const auto s = sample_story(a, 3);
        for (std::size_t i = 0; i <= s.clues.size(); ++i) {
            const std::span<const Clue> prefix(s.clues.data(), i);
            CHECK(genre_detective(one, prefix).approx_equal(brilliant_detective(a, prefix), 1e-12));
        }
    }
    SUBCASE("symmetric mixture at the empty prefix averages priors") {
        GenreMixture m({a, b}, ProbVector({0.5, 0.5}));
        check_close(genre_detective(m, {}), {0.325, 0.275, 0.225, 0.175}, 1e-12);
        check_close(know_it_all_reader(m, {}), {0.325, 0.275, 0.225, 0.175}, 1e-12);
    }
    SUBCASE("asymmetric mixture matches the extended oracle") {
        GenreMixture m({a, b}, ProbVector({0.3, 0.7}));
        const oracle::JointTable ta(a), tb(b);
        const auto s = sample_story(b, 5);
        const std::span<const Clue> prefix(s.clues.data(), 2);
        const auto ja = ta.prefix_joint(prefix), jb = tb.prefix_joint(prefix);
        std::vector<double> want(4);
        double total = 0.0;
        for (std::size_t y = 0; y < 4; ++y) total += want[y] = 0.3 * ja[y] + 0.7 * jb[y];
        for (double& v : want) v /= total;
        check_close(genre_detective(m, prefix), want, 1e-12);
        // Told the component, the reader follows that component alone.
        check_close(know_it_all_reader(m, prefix, 1), tb.posterior(prefix), 1e-12);
        CHECK_FALSE(know_it_all_reader(m, prefix, 1).approx_equal(genre_detective(m, prefix), 1e-6));
    }
}

TEST_CASE("reading curves") {
    const auto w = deterministic_world();
    const auto s = sample_story(w, 7);
    const auto curves = reading_curves(w, s.clues);
    CHECK(curves.brilliant.steps().size() == 9);
    CHECK(curves.gullible.steps()[0].belief == ProbVector::uniform(4));
    CHECK(curves.brilliant.steps()[0].belief.approx_equal(w.prior(), 1e-12));
    CHECK(curves.brilliant.steps()[1].belief == ProbVector::point_mass(4, s.culprit));
    for (const auto* c : {&curves.gullible, &curves.brilliant, &curves.know_it_all})
        CHECK(c->steps().back().belief.approx_equal(ProbVector::point_mass(4, s.culprit), 1e-12));
}

TEST_CASE("misleading curve dips below uniform for the culprit") {
    const auto w = misleading_world();
    bool dipped = false;
    for (std::uint64_t seed = 0; seed < 200 && !dipped; ++seed) {
        const auto s = sample_story(w, seed);
        const auto g = curve_for(reading_curves(w, s.clues).gullible, s.culprit);
        for (std::size_t i = 1; i + 1 < g.size(); ++i) dipped = dipped || g[i] < 0.25;
    }
    CHECK(dipped);
}

TEST_CASE("world validation") {
    SyntheticWorld::Shape shape{{"A", "B"}, {"a", "b"}, 2, 1};
    SyntheticWorld w(shape);
    CHECK_THROWS_AS(w.validate(), WorldError);  // rows missing
    const std::vector<double> half = {0.5, 0.5};
    CHECK_THROWS_AS(w.set_row(1, 0, 0, std::vector<double>{0.5, 0.6}), WorldError);
    for (SuspectIndex y = 0; y < 2; ++y) {
        w.set_row_all_contexts(1, y, half);
        w.set_row_all_contexts(2, y, half);
    }
    w.set_conclusive(0, 0);
    w.set_conclusive(1, 1);
    CHECK_THROWS_AS(w.validate(), WorldError);  // final rows not culprit-disjoint
    w.set_row_all_contexts(2, 0, std::vector<double>{1.0, 0.0});
    w.set_row_all_contexts(2, 1, std::vector<double>{0.0, 1.0});
    CHECK_NOTHROW(w.validate());
    CHECK_THROWS_AS(SyntheticWorld({{"A", "B"}, {"a", "b", "c", "d", "e", "f", "g"}, 2, 1}), WorldError);
    CHECK_THROWS_AS(SyntheticWorld({{"A", "B"}, {"a", "b"}, 2, 3}), WorldError);
    CHECK_THROWS_AS(SyntheticWorld({{"A"}, {"a", "b"}, 2, 1}), WorldError);
}

TEST_CASE("world json round trip and rule overrides") {
    const auto w = misleading_world();
    const auto back = world_from_json(world_to_json(w));
    const oracle::JointTable ta(w), tb(back);
    CHECK(ta.joint == tb.joint);

    nlohmann::json doc = {
        {"suspects", {"A", "B"}},
        {"alphabet", {"a", "b", "n"}},
        {"num_steps", 3},
        {"conclusive", {{"a", "A"}, {"b", "B"}}},
        {"kernel",
         {{{"steps", "all"}, {"probabilities", {{"n", 1.0}}}},
          {{"steps", 3}, {"culprit", "A"}, {"probabilities", {1.0, 0.0, 0.0}}},
          {{"steps", {{"from", 3}, {"to", 3}}}, {"culprit", "B"}, {"probabilities", {{"b", 1.0}}}},
          {{"steps", {2}}, {"culprit", "A"}, {"context", {"n"}}, {"probabilities", {0.5, 0.0, 0.5}}}}},
    };
    const auto parsed = world_from_json(doc);
    CHECK(parsed.kernel(2, 0, parsed.context_of(std::vector<Clue>{2}), 0) == 0.5);
    CHECK(parsed.kernel(2, 1, parsed.context_of(std::vector<Clue>{2}), 0) == 0.0);
    doc["kernel"][0]["steps"] = 9;
    CHECK_THROWS_AS(world_from_json(doc), WorldError);
}

TEST_CASE("perturbed worlds stay within the ratio bound") {
    const auto base = random_world(41, small_options(4));
    const auto p = perturbed_world(base, 7, 0.005);
    for (std::size_t s = 1; s <= 4; ++s)
        for (SuspectIndex y = 0; y < 4; ++y)
            for (std::size_t ctx = 0; ctx < base.num_contexts(); ++ctx) {
                const auto r0 = base.row(s, y, ctx), r1 = p.row(s, y, ctx);
                for (std::size_t c = 0; c < 5; ++c) {
                    if (r0[c] == 0.0) {
                        CHECK(r1[c] == 0.0);
                    } else {
                        CHECK(std::abs(std::log(r1[c] / r0[c])) <= 0.005 + 1e-12);
                    }
                }
            }
}
