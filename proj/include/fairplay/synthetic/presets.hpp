#pragma once

// Named worlds shipped with the CLI and the constructions used by the tests.
//
// All presets use four suspects, one "implicates <suspect>" clue per suspect plus
// a neutral clue, a uniform culprit prior, and a final confession clue that
// names the culprit. Suspect y's main distractor is suspect (y + 1) mod 4.

#include <cstdint>
#include <string>

#include "fairplay/synthetic/world.hpp"

namespace fairplay::synthetic {

inline constexpr std::size_t kPresetSuspects = 4;
inline constexpr std::size_t kPresetSteps = 8;
inline constexpr std::size_t kPresetAlphabet = 5;

// Every kernel row is a point mass: the first clue names the culprit, the
// middle clues are neutral, the last clue is the confession.
SyntheticWorld deterministic_world(std::size_t num_steps = kPresetSteps);

// The opening clue sometimes implicates the distractor and, when it does, the
// same clue repeats until the confession. Under the distractor's own model that
// clue is individually more frequent but does not repeat as reliably, so
// per-clue scoring favors the distractor while exact inference does not.
SyntheticWorld misleading_world(std::size_t num_steps = kPresetSteps);

struct RandomWorldOptions {
    std::size_t num_suspects = kPresetSuspects;
    std::size_t num_steps = kPresetSteps;
    std::size_t alphabet_size = kPresetAlphabet;
    std::size_t context_order = 1;
    bool uniform_prior = true;
};

// Random kernel rows for steps 1..N-1; confession at step N.
SyntheticWorld random_world(std::uint64_t seed, const RandomWorldOptions& options = {});

// Clues before the confession are i.i.d. and independent of the culprit.
SyntheticWorld independent_clue_world(std::uint64_t seed, std::size_t num_steps = kPresetSteps);

// Copy of `base` whose rows are scaled entrywise by factors in
// [e^-max_log_ratio, e^max_log_ratio] after renormalization.
SyntheticWorld perturbed_world(const SyntheticWorld& base, std::uint64_t seed, double max_log_ratio);

// Resolves "deterministic", "misleading" or "random-seeded" (which uses `seed`).
SyntheticWorld preset_world(const std::string& name, std::uint64_t seed);

}  // namespace fairplay::synthetic
