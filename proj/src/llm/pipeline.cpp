#include "fairplay/llm/pipeline.hpp"

#include "fairplay/core/random.hpp"

namespace fairplay::llm {

StoryAnalysis analyze_generated_story(ChatBackend& backend, const std::string& story_id, const GeneratedStory& story,
                                      const AnalysisOptions& options) {
    StoryAnalysis out;
    auto& rep = out.report;
    const std::size_t n = story.story.size();
    rep.story_id = story_id;
    rep.num_steps = n;
    const std::uint64_t seed = mix_seed(options.seed);

    std::optional<CulpritJudgement> judgement;
    try {
        judgement = judge_culprits(backend, story.story.prefix(n).text(), std::nullopt, mix_seed(seed + 1),
                                   options.judge);
    } catch (const std::exception& e) {
        out.warnings.push_back(std::string("culprit judge failed: ") + e.what());
        metrics::GenerationValidity v;
        v.reasons.push_back("judge reply unusable");
        rep.validity = v;
        return out;
    }
    try {
        out.roster = roster_from_judgement(*judgement);
        rep.validity = metrics::generation_validity(judgement->culprit, judgement->distractor, *out.roster);
    } catch (const std::exception& e) {
        out.warnings.push_back(std::string("judge cast unusable: ") + e.what());
        metrics::GenerationValidity v;
        v.reasons.push_back("judge cast unusable");
        rep.validity = v;
        return out;
    }
    if (!rep.validity->valid) return out;
    const auto& roster = *out.roster;
    const auto truth = roster.true_culprit();

    out.gullible = gullible_curve(backend, story.story, roster, mix_seed(seed + 2), options.judge);
    for (const auto& w : out.gullible->warnings) out.warnings.push_back(w);
    if (out.gullible->valid) {
        rep.surprise = metrics::surprise_score(out.gullible->curve, truth, n);
        rep.surprise_source = "judge";
    }
    rep.revelation_point = detect_revelation(out.gullible->curve, truth, n, options.manual_revelation);

    const auto samples =
        sample_continuations(backend, story, roster, options.samples_per_step, mix_seed(seed + 3), options.judge);
    out.know_it_all = knowitall_curve(samples, roster.size());
    for (const auto& w : out.know_it_all->curve.warnings) out.warnings.push_back(w);
    for (const auto& t : out.know_it_all->tallies) {
        rep.samples_valid += t.valid;
        rep.samples_total += t.valid + t.excluded + t.invalid;
    }
    if (out.know_it_all->curve.valid) {
        rep.coherence = metrics::coherence_score(out.know_it_all->curve.curve, truth, n);
        rep.coherence_source = "sampled K=" + std::to_string(options.samples_per_step);
    }

    const auto questions = build_erc_questions(story.story, roster, samples, *rep.revelation_point, mix_seed(seed + 4));
    out.erc_ar = erc_protocol(backend, story.story, roster, questions, *rep.revelation_point,
                              metrics::ErcSetting::AfterRevelation, mix_seed(seed + 5), options.judge);
    out.erc_br = erc_protocol(backend, story.story, roster, questions, *rep.revelation_point,
                              metrics::ErcSetting::BeforeRevelation, mix_seed(seed + 6), options.judge);
    for (const auto* o : {&*out.erc_ar, &*out.erc_br})
        for (const auto& d : o->dropped) out.warnings.push_back("dropped " + d);
    if (!out.erc_ar->records.empty())
        rep.erc_ar = metrics::erc_multiple_choice(out.erc_ar->records, metrics::ErcSetting::AfterRevelation, n);
    if (!out.erc_br->records.empty())
        rep.erc_br = metrics::erc_multiple_choice(out.erc_br->records, metrics::ErcSetting::BeforeRevelation, n);
    if (rep.erc_ar || rep.erc_br) rep.erc_source = "judge multiple choice";
    return out;
}

}  // namespace fairplay::llm
