#pragma once

// Full per-story evaluation of a generated story: validity, reading curves,
// revelation point and multiple-choice revelation content.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairplay/llm/judge.hpp"
#include "fairplay/metrics/report.hpp"

namespace fairplay::llm {

struct AnalysisOptions {
    std::size_t samples_per_step = 20;
    std::uint64_t seed = 1;
    JudgeOptions judge;
    std::optional<std::size_t> manual_revelation;
};

struct StoryAnalysis {
    metrics::MetricReport report;
    std::optional<SuspectRoster> roster;
    std::optional<EstimatedCurve> gullible;
    std::optional<KnowItAllEstimate> know_it_all;
    std::optional<ErcOutcome> erc_ar, erc_br;
    std::vector<std::string> warnings;
};

// Stories the judge cannot read, or that fail the validity check, get a report
// with only the validity columns filled.
StoryAnalysis analyze_generated_story(ChatBackend& backend, const std::string& story_id, const GeneratedStory& story,
                                      const AnalysisOptions& options);

}  // namespace fairplay::llm
