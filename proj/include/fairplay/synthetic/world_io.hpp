#pragma once

// World specification documents (JSON).
//
//   {
//     "suspects": ["Alice", ...],
//     "alphabet": ["implicates-Alice", ..., "neutral"],
//     "num_steps": 8,
//     "context_order": 1,
//     "prior": [0.25, ...],                        // optional, uniform by default
//     "distractors": {"Alice": "Bruno", ...},      // optional
//     "conclusive": {"implicates-Alice": "Alice", ...},
//     "kernel": [
//       {"steps": "all" | [1, 2] | {"from": 2, "to": 7},
//        "culprit": "all" | "<suspect>",
//        "context": "any" | ["<older clue>", "<newer clue>"],
//        "probabilities": [..] | {"<clue>": p, ...}}
//     ]
//   }
//
// Kernel rules apply in order, later rules overriding earlier ones. A context
// list shorter than the context order denotes a story that began fewer than k
// clues ago ([] is the empty prefix).

#include <string>

#include <json.hpp>

#include "fairplay/synthetic/world.hpp"

namespace fairplay::synthetic {

SyntheticWorld world_from_json(const nlohmann::json& doc);
// Fully explicit form: one kernel rule per (step, culprit, context) row.
nlohmann::json world_to_json(const SyntheticWorld& world);

SyntheticWorld load_world(const std::string& path);

}  // namespace fairplay::synthetic
