#include "fairplay/llm/judge.hpp"

#include <algorithm>

#include "fairplay/core/log.hpp"
#include "fairplay/core/random.hpp"
#include "fairplay/llm/parallel.hpp"
#include "fairplay/llm/parse.hpp"
#include "fairplay/llm/prompts.hpp"
#include "fairplay/metrics/story_metrics.hpp"

namespace fairplay::llm {

namespace {

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(seed + a) ^ (b * 0x9e3779b97f4a7c15ULL));
}

// Sends `prompt`; an unparseable reply gets one repair turn. Parser errors of
// the second reply become JudgeError.
template <typename Parse>
auto ask_with_repair(ChatBackend& backend, const std::string& prompt, const char* nudge, std::uint64_t nonce,
                     const JudgeOptions& options, Parse&& parse, bool* repaired = nullptr) {
    ChatRequest req{{{"user", prompt}}, options.temperature, nonce};
    const std::string first = backend.complete(req);
    try {
        return parse(first);
    } catch (const ReplyParseError& e) {
        log_warning(std::string("judge reply rejected (") + e.what() + "); asking once more");
    }
    req.messages.push_back({"assistant", first});
    req.messages.push_back({"user", nudge});
    const std::string second = backend.complete(req);
    try {
        auto out = parse(second);
        if (repaired) *repaired = true;
        return out;
    } catch (const ReplyParseError& e) {
        throw JudgeError(std::string("judge reply unusable after repair: ") + e.what());
    }
}

EstimatedCurve assemble_curve(const std::string& label, std::vector<std::optional<ProbVector>> beliefs,
                              std::size_t num_suspects, std::vector<std::string> warnings) {
    const std::size_t n = beliefs.size() - 1;
    std::vector<CurveStep> steps;
    std::vector<std::size_t> missing;
    ProbVector last = beliefs[0].value_or(ProbVector::uniform(num_suspects));
    steps.push_back({0, last});
    for (std::size_t i = 1; i <= n; ++i) {
        if (beliefs[i]) {
            last = *beliefs[i];
        } else {
            missing.push_back(i);
        }
        steps.push_back({i, last});
    }
    const bool valid = static_cast<double>(missing.size()) <= kMaxMissingShare * static_cast<double>(n);
    if (!missing.empty())
        warnings.push_back(label + " curve: " + std::to_string(missing.size()) + " of " + std::to_string(n) +
                           " steps missing" + (valid ? "" : ", curve invalid"));
    return {ReadingCurve(label, std::move(steps)), std::move(missing), valid, std::move(warnings)};
}

}  // namespace

CulpritJudgement judge_culprits(ChatBackend& backend, const std::string& story_text,
                                const std::optional<std::vector<std::string>>& roster, std::uint64_t nonce,
                                const JudgeOptions& options) {
    std::optional<std::string> listed;
    if (roster) listed = format_suspect_list(*roster);
    bool repaired = false;
    auto reply = ask_with_repair(
        backend, gullible_prompt(story_text, listed), kJudgeRepairNudge, nonce, options,
        [&](const std::string& text) { return parse_judge_reply(text, roster); }, &repaired);
    return {std::move(reply.suspects), std::move(reply.culprit), std::move(reply.distractor), repaired};
}

SuspectRoster roster_from_judgement(const CulpritJudgement& judgement) {
    return SuspectRoster(judgement.suspects, judgement.culprit.argmax(), judgement.distractor.argmax());
}

EstimatedCurve gullible_curve(ChatBackend& backend, const Story& story, const SuspectRoster& roster,
                              std::uint64_t nonce, const JudgeOptions& options) {
    const std::size_t n = story.size();
    std::vector<std::optional<ProbVector>> beliefs(n + 1);
    std::vector<std::string> failures(n + 1);
    beliefs[0] = ProbVector::uniform(roster.size());
    parallel_for(n, options.max_parallel, [&](std::size_t k) {
        const std::size_t i = k + 1;
        try {
            beliefs[i] = judge_culprits(backend, story.prefix(i).text(), roster.suspects(), sub_seed(nonce, i),
                                        options)
                             .culprit;
        } catch (const std::exception& e) {
            failures[i] = "step " + std::to_string(i) + ": " + e.what();
        }
    });
    std::vector<std::string> warnings;
    for (const auto& f : failures)
        if (!f.empty()) {
            log_warning(f);
            warnings.push_back(f);
        }
    return assemble_curve("gullible", std::move(beliefs), roster.size(), std::move(warnings));
}

ContinuationSet sample_continuations(ChatBackend& backend, const GeneratedStory& source, const SuspectRoster& roster,
                                     std::size_t samples_per_step, std::uint64_t seed, const JudgeOptions& options) {
    if (samples_per_step == 0) throw std::invalid_argument("at least one continuation per step is needed");
    const std::size_t n = source.story.size();
    ContinuationSet out;
    out.samples_per_step = samples_per_step;
    out.steps.assign(n + 1, std::vector<ContinuationSample>(samples_per_step));

    GenerationJob job;
    job.target_paragraphs = n;
    job.suspects = roster.suspects();
    job.temperature = options.temperature;

    parallel_for((n + 1) * samples_per_step, options.max_parallel, [&](std::size_t task) {
        const std::size_t i = task / samples_per_step, k = task % samples_per_step;
        auto& sample = out.steps[i][k];
        const std::uint64_t nonce = sub_seed(seed, i, k + 1);
        try {
            sample.story = resume_story(backend, source, i, job, nonce);
        } catch (const std::exception& e) {
            sample.reason = std::string("generation failed: ") + e.what();
            return;
        }
        try {
            const auto j = judge_culprits(backend, sample.story->story.prefix(n).text(), roster.suspects(),
                                          nonce, options);
            if (j.culprit.max() > metrics::kClearPrediction) {
                sample.culprit = j.culprit.argmax();
                sample.status = SampleStatus::Valid;
            } else {
                sample.status = SampleStatus::Excluded;
                sample.reason = metrics::kNoClearCulprit;
            }
        } catch (const std::exception& e) {
            sample.reason = std::string("judge failed: ") + e.what();
        }
    });
    return out;
}

ProbVector smoothed_frequencies(const StepTally& tally) {
    const auto k = static_cast<double>(tally.counts.size());
    std::vector<double> w;
    for (auto c : tally.counts) w.push_back((static_cast<double>(c) + 1.0 / k) / (static_cast<double>(tally.valid) + 1.0));
    return ProbVector(std::move(w));
}

KnowItAllEstimate knowitall_curve(const ContinuationSet& samples, std::size_t num_suspects) {
    std::vector<StepTally> tallies;
    std::vector<std::optional<ProbVector>> beliefs;
    for (std::size_t i = 0; i < samples.steps.size(); ++i) {
        StepTally t;
        t.counts.assign(num_suspects, 0);
        for (const auto& s : samples.steps[i]) {
            if (s.status == SampleStatus::Valid) {
                ++t.valid;
                ++t.counts.at(*s.culprit);
            } else if (s.status == SampleStatus::Excluded) {
                ++t.excluded;
            } else {
                ++t.invalid;
            }
        }
        if (2 * t.valid >= samples.samples_per_step)
            beliefs.push_back(smoothed_frequencies(t));
        else
            beliefs.emplace_back();
        tallies.push_back(std::move(t));
    }
    return {assemble_curve("know-it-all", std::move(beliefs), num_suspects, {}), std::move(tallies)};
}

KnowItAllEstimate knowitall_curve_sampled(ChatBackend& backend, const GeneratedStory& source,
                                          const SuspectRoster& roster, std::size_t samples_per_step,
                                          std::uint64_t seed, const JudgeOptions& options) {
    return knowitall_curve(sample_continuations(backend, source, roster, samples_per_step, seed, options),
                           roster.size());
}

std::vector<ErcQuestion> build_erc_questions(const Story& story, const SuspectRoster& roster,
                                             const ContinuationSet& samples, std::size_t revelation,
                                             std::uint64_t seed) {
    if (revelation < 1 || revelation > story.size()) throw std::out_of_range("revelation point must lie in 1..N");
    if (samples.steps.size() != story.size() + 1) throw std::invalid_argument("continuations do not match the story");
    std::vector<ErcQuestion> out;
    for (std::size_t p = 1; p < revelation; ++p) {
        std::vector<std::string> texts{story.paragraph(p)};
        std::vector<std::optional<std::string>> culprits{roster.name(roster.true_culprit())};
        for (const auto& s : samples.steps[p - 1]) {
            if (texts.size() > kErcAlternatives) break;
            if (s.status != SampleStatus::Valid) continue;
            const auto& text = s.story->story.paragraph(p);
            if (std::find(texts.begin(), texts.end(), text) != texts.end()) continue;
            texts.push_back(text);
            culprits.push_back(roster.name(*s.culprit));
        }
        if (texts.size() < 2) continue;

        std::vector<std::size_t> order(texts.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        Rng rng(sub_seed(seed, p));
        for (std::size_t k = order.size() - 1; k > 0; --k) {
            const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k + 1));
            std::swap(order[k], order[std::min(j, k)]);
        }
        ErcQuestion q;
        q.position = p;
        for (std::size_t k = 0; k < order.size(); ++k) {
            q.options.push_back(texts[order[k]]);
            q.option_culprits.push_back(culprits[order[k]]);
            if (order[k] == 0) q.true_option = k;
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::string masked_story_text(const Story& story, std::size_t position, std::size_t revelation,
                              metrics::ErcSetting setting) {
    const std::size_t n = story.size();
    if (position < 1 || position >= revelation || revelation > n)
        throw std::out_of_range("masked position must lie before the revelation point");
    std::string text;
    for (std::size_t i = 1; i <= n; ++i) {
        std::string shown;
        if (i < position)
            shown = story.paragraph(i);
        else if (i == position)
            shown = kMissingMarker;
        else if (i < revelation)
            shown = setting == metrics::ErcSetting::BeforeRevelation ? story.paragraph(i) : kHiddenMarker;
        else
            shown = setting == metrics::ErcSetting::AfterRevelation ? story.paragraph(i) : kHiddenMarker;
        if (i > 1) text += "\n\n";
        text += shown;
    }
    return text;
}

ErcOutcome erc_protocol(ChatBackend& backend, const Story& story, const SuspectRoster& roster,
                        const std::vector<ErcQuestion>& questions, std::size_t revelation,
                        metrics::ErcSetting setting, std::uint64_t nonce, const JudgeOptions& options) {
    std::vector<std::optional<ProbVector>> judged(questions.size());
    std::vector<std::string> failures(questions.size());
    parallel_for(questions.size(), options.max_parallel, [&](std::size_t k) {
        const auto& q = questions[k];
        const auto prompt = fill_prompt(masked_story_text(story, q.position, revelation, setting),
                                        format_option_list(q.options));
        try {
            judged[k] = ask_with_repair(backend, prompt, kFillRepairNudge, sub_seed(nonce, q.position), options,
                                        [&](const std::string& text) { return parse_fill_reply(text, q.options.size()); });
        } catch (const std::exception& e) {
            failures[k] = to_string(setting) + " position " + std::to_string(q.position) + ": " + e.what();
        }
    });
    ErcOutcome out;
    for (std::size_t k = 0; k < questions.size(); ++k) {
        if (!judged[k]) {
            log_warning("dropped multiple-choice record, " + failures[k]);
            out.dropped.push_back(failures[k]);
            continue;
        }
        const auto& q = questions[k];
        out.records.push_back({q.position, setting, judged[k]->argmax(), q.true_option, q.option_culprits,
                               roster.name(roster.true_culprit())});
        out.judged.push_back(*judged[k]);
    }
    return out;
}

std::size_t detect_revelation(const ReadingCurve& gullible, SuspectIndex true_culprit, std::size_t num_steps,
                              std::optional<std::size_t> manual) {
    if (manual) {
        if (*manual < 1 || *manual > num_steps) throw std::out_of_range("revelation point must lie in 1..N");
        return *manual;
    }
    std::size_t r = num_steps;
    for (std::size_t i = num_steps; i >= 1; --i) {
        const auto* b = gullible.at_prefix(i);
        if (!b || !((*b)[true_culprit] > metrics::kClearPrediction)) break;
        r = i;
    }
    return r;
}

}  // namespace fairplay::llm
