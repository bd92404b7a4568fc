#pragma once

// The experiment commands behind the command-line tool. Each writes into its
// own directory under the output directory and finishes with manifest.json.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairplay/llm/chat.hpp"
#include "fairplay/measures/enumeration.hpp"
#include "fairplay/measures/uninformedness.hpp"

namespace fairplay::runner {

struct RunConfig {
    std::string mode;  // synthetic | generate | analyze | real | report
    std::optional<std::uint64_t> seed;  // required by synthetic; others default to 1
    std::string preset = "misleading";
    std::string world_file;  // overrides the preset when set
    llm::BackendConfig backend;
    std::size_t samples_per_step = 20;
    // Explicit bound thresholds; when absent they are derived from the ledger.
    std::optional<measures::MeasureConfig> thresholds;
    double log_floor = 1e-9;
    measures::ExpectationOptions expectation;
    double genre_log_ratio = 0.005;  // second mixture component for the genre check; 0 skips it
    std::string output_dir = "out";
    std::size_t stories = 10;
    std::size_t paragraphs = 25;
    std::string corpus_dir;  // analyze input; defaults to <out>/generate/stories
    std::string label = "corpus";
    std::vector<std::string> real_corpora;  // "label=dir" or "dir"
    std::vector<std::string> analyses;      // report inputs: "label=dir" or "dir"

    // Throws std::invalid_argument when a field the mode needs is missing or out of range.
    void validate() const;
};

struct CommandResult {
    std::string directory;               // where the artifacts went
    std::vector<std::string> artifacts;  // relative to `directory`
    std::vector<std::string> failures;   // requested artifacts that could not be produced
    std::vector<std::string> notes;      // one-line results for the console
    bool ok() const { return failures.empty(); }
};

CommandResult cmd_synthetic(const RunConfig& config);
CommandResult cmd_generate(const RunConfig& config);
CommandResult cmd_analyze(const RunConfig& config);
CommandResult cmd_real(const RunConfig& config);
CommandResult cmd_report(const RunConfig& config);

// Dispatches on config.mode after validating.
CommandResult run_command(const RunConfig& config);

}  // namespace fairplay::runner
