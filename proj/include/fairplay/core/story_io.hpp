#pragma once

// Story documents (JSON) and reading-curve tables (CSV).
//
// Story object:
//   { "paragraphs": [..], "suspects": [..], "true_culprit": "<name>" | null,
//     "distractor": "<name>" | null, "revelation_point": <1-based int> | null }
// A story without a roster has an empty "suspects" array and null culprit.
// "true_culprit"/"distractor" also accept a 0-based integer index on input.
//
// Curve CSV: header `step,suspect,probability,reader`, one row per (step, suspect).

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "fairplay/core/reading_curve.hpp"
#include "fairplay/core/story.hpp"

namespace fairplay {

nlohmann::json story_to_json(const Story& story);
Story story_from_json(const nlohmann::json& doc);

Story load_story(const std::string& path);
void save_story(const Story& story, const std::string& path);

void write_curves_csv(std::ostream& out, std::span<const ReadingCurve> curves,
                      const std::vector<std::string>& suspect_names);

// Shortest round-trippable decimal form, used by every CSV/JSON writer so that
// reruns are byte-identical.
std::string format_double(double value);

// Quotes a CSV field when it contains a separator, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace fairplay
