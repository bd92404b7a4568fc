#pragma once

// Per-story metric rows and the per-corpus summary row, one column per
// reported score, plus provenance columns.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairplay/metrics/erc.hpp"
#include "fairplay/metrics/story_metrics.hpp"

namespace fairplay::metrics {

struct MetricReport {
    std::string story_id;
    std::size_t num_steps = 0;
    std::optional<std::size_t> revelation_point;
    std::optional<GenerationValidity> validity;
    std::optional<double> surprise;   // S_S
    std::optional<double> coherence;  // S_C
    std::optional<ErcChoiceSummary> erc_ar;
    std::optional<ErcChoiceSummary> erc_br;
    std::optional<double> erc_exact;  // synthetic worlds only

    // Where each number came from, e.g. "judge", "exact", "sampled K=20".
    std::string surprise_source;
    std::string coherence_source;
    std::string erc_source;
    std::size_t samples_valid = 0;
    std::size_t samples_total = 0;

    // Present exactly when both S_S and S_C are.
    std::optional<FairPlay> fair_play() const;
    // Invalid generations are excluded from metric means.
    bool counts_toward_means() const { return !validity || validity->valid; }
};

// Missing values are written as this token.
inline constexpr const char* kUnavailable = "NA";

std::string metric_csv_header();
std::string metric_csv_row(const MetricReport& report);

struct CorpusSummary {
    std::string label;
    std::size_t stories = 0;
    std::size_t valid_stories = 0;
    std::optional<double> g_val;                  // valid / judged
    std::optional<double> surprise, coherence;    // means over valid stories
    std::optional<double> fair_play;              // mean of per-story S_FP
    std::optional<double> fair_play_ratio;        // share with S_FP >= 1/N
    std::optional<double> erc_ar_scaled, erc_br_scaled;  // mean of N * excess
    std::optional<double> erc_ar_ratio, erc_br_ratio;    // share with excess >= 1/N
};

CorpusSummary summarize(const std::string& label, const std::vector<MetricReport>& reports);

std::string summary_csv_header();
std::string summary_csv_row(const CorpusSummary& summary);

}  // namespace fairplay::metrics
