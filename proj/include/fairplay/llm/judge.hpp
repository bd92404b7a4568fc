#pragma once

// Judge-based estimates: culprit identification, the gullible reading curve,
// the know-it-all curve from sampled continuations, and the masked-paragraph
// multiple-choice protocol.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairplay/core/prob_vector.hpp"
#include "fairplay/core/reading_curve.hpp"
#include "fairplay/core/story.hpp"
#include "fairplay/llm/chat.hpp"
#include "fairplay/llm/generation.hpp"
#include "fairplay/metrics/erc.hpp"

namespace fairplay::llm {

struct JudgeOptions {
    double temperature = 1.0;
    std::size_t max_parallel = 1;
};

// A judge reply that still failed to parse after the repair retry.
class JudgeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CulpritJudgement {
    std::vector<std::string> suspects;
    ProbVector culprit;
    ProbVector distractor;
    bool repaired = false;  // the first reply failed and the retry succeeded
};

// Judges a complete story. Without a roster the judge introduces the cast;
// with one, the reply must name exactly those suspects.
CulpritJudgement judge_culprits(ChatBackend& backend, const std::string& story_text,
                                const std::optional<std::vector<std::string>>& roster, std::uint64_t nonce,
                                const JudgeOptions& options = {});

// Roster with the judged argmax culprit and distractor.
SuspectRoster roster_from_judgement(const CulpritJudgement& judgement);

// Share of steps that may be missing before a curve is declared invalid.
inline constexpr double kMaxMissingShare = 0.1;

struct EstimatedCurve {
    ReadingCurve curve;                     // missing steps carry the previous belief forward
    std::vector<std::size_t> missing_steps;
    bool valid = true;                      // at most kMaxMissingShare of steps 1..N missing
    std::vector<std::string> warnings;
};

// Gullible reader: the judge sees x_1..x_i with the fixed roster for i = 1..N.
// Step 0 is uniform.
EstimatedCurve gullible_curve(ChatBackend& backend, const Story& story, const SuspectRoster& roster,
                              std::uint64_t nonce, const JudgeOptions& options = {});

enum class SampleStatus { Valid, Excluded, Invalid };

struct ContinuationSample {
    std::optional<GeneratedStory> story;  // absent when generation failed
    std::optional<SuspectIndex> culprit;  // set when Valid
    SampleStatus status = SampleStatus::Invalid;
    std::string reason;  // for Excluded and Invalid
};

// K continuations from every prefix length i = 0..N, each judged against the
// source roster. `steps[i]` holds the samples resumed after paragraph i.
struct ContinuationSet {
    std::size_t samples_per_step = 0;
    std::vector<std::vector<ContinuationSample>> steps;
};

ContinuationSet sample_continuations(ChatBackend& backend, const GeneratedStory& source, const SuspectRoster& roster,
                                     std::size_t samples_per_step, std::uint64_t seed,
                                     const JudgeOptions& options = {});

struct StepTally {
    std::size_t valid = 0, excluded = 0, invalid = 0;
    std::vector<std::size_t> counts;  // valid continuations per culprit
};

// Smoothed relative frequency (count_y + 1/|Y|) / (valid + 1).
ProbVector smoothed_frequencies(const StepTally& tally);

struct KnowItAllEstimate {
    EstimatedCurve curve;
    std::vector<StepTally> tallies;  // index = prefix length
};

// A step with fewer than K/2 valid continuations counts as missing.
KnowItAllEstimate knowitall_curve(const ContinuationSet& samples, std::size_t num_suspects);

KnowItAllEstimate knowitall_curve_sampled(ChatBackend& backend, const GeneratedStory& source,
                                          const SuspectRoster& roster, std::size_t samples_per_step,
                                          std::uint64_t seed, const JudgeOptions& options = {});

// Six candidates per masked position: the original paragraph and up to five
// from continuations of the preceding prefix, in a seeded order.
struct ErcQuestion {
    std::size_t position = 0;
    std::vector<std::string> options;
    std::vector<std::optional<std::string>> option_culprits;
    std::size_t true_option = 0;
};

inline constexpr std::size_t kErcAlternatives = 5;

// Questions for positions 1..r-1. Alternatives come from valid continuations
// whose paragraph differs from the original; positions without any are skipped.
std::vector<ErcQuestion> build_erc_questions(const Story& story, const SuspectRoster& roster,
                                             const ContinuationSet& samples, std::size_t revelation,
                                             std::uint64_t seed);

// Story text for one question: [MISSING] at the position, [HIDDEN] on the
// paragraphs withheld by the setting.
std::string masked_story_text(const Story& story, std::size_t position, std::size_t revelation,
                              metrics::ErcSetting setting);

struct ErcOutcome {
    std::vector<metrics::ErcChoiceRecord> records;
    std::vector<ProbVector> judged;     // parallel to records
    std::vector<std::string> dropped;   // one reason per dropped question
};

ErcOutcome erc_protocol(ChatBackend& backend, const Story& story, const SuspectRoster& roster,
                        const std::vector<ErcQuestion>& questions, std::size_t revelation,
                        metrics::ErcSetting setting, std::uint64_t nonce, const JudgeOptions& options = {});

// First prefix length i in 1..N with the true culprit above 0.5 at i and every
// later step; N when there is none. A manual annotation wins.
std::size_t detect_revelation(const ReadingCurve& gullible, SuspectIndex true_culprit, std::size_t num_steps,
                              std::optional<std::size_t> manual = std::nullopt);

}  // namespace fairplay::llm
