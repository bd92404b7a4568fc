#include "fairplay/core/story_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace fairplay {

namespace {

std::optional<SuspectIndex> resolve_suspect(const nlohmann::json& value, const std::vector<std::string>& names,
                                            const char* field) {
    if (value.is_null()) return std::nullopt;
    if (value.is_number_integer()) {
        const auto idx = value.get<long long>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= names.size())
            throw std::out_of_range(std::string(field) + " index out of range");
        return static_cast<SuspectIndex>(idx);
    }
    if (value.is_string()) {
        SuspectRoster probe(names, 0);
        if (auto idx = probe.find(value.get<std::string>())) return idx;
        throw std::invalid_argument(std::string(field) + " '" + value.get<std::string>() + "' is not a listed suspect");
    }
    throw std::invalid_argument(std::string(field) + " must be a name, an index or null");
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("failed to format double");
    return std::string(buf, ptr);
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

nlohmann::json story_to_json(const Story& story) {
    nlohmann::json doc;
    doc["paragraphs"] = story.paragraphs();
    if (const auto& roster = story.roster()) {
        doc["suspects"] = roster->suspects();
        doc["true_culprit"] = roster->name(roster->true_culprit());
        doc["distractor"] = roster->distractor() ? nlohmann::json(roster->name(*roster->distractor())) : nlohmann::json();
    } else {
        doc["suspects"] = nlohmann::json::array();
        doc["true_culprit"] = nullptr;
        doc["distractor"] = nullptr;
    }
    doc["revelation_point"] = story.revelation_point() ? nlohmann::json(*story.revelation_point()) : nlohmann::json();
    return doc;
}

Story story_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("story document must be an object");
    auto paragraphs = doc.at("paragraphs").get<std::vector<std::string>>();
    std::optional<SuspectRoster> roster;
    const auto suspects = doc.value("suspects", std::vector<std::string>{});
    if (!suspects.empty()) {
        const auto culprit = resolve_suspect(doc.value("true_culprit", nlohmann::json()), suspects, "true_culprit");
        if (!culprit) throw std::invalid_argument("a story with suspects needs a true_culprit");
        roster.emplace(suspects, *culprit, resolve_suspect(doc.value("distractor", nlohmann::json()), suspects, "distractor"));
    }
    std::optional<std::size_t> r;
    if (doc.contains("revelation_point") && !doc["revelation_point"].is_null())
        r = doc["revelation_point"].get<std::size_t>();
    return Story(std::move(paragraphs), std::move(roster), r);
}

Story load_story(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open story file: " + path);
    return story_from_json(nlohmann::json::parse(in));
}

void save_story(const Story& story, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write story file: " + path);
    out << story_to_json(story).dump(2) << '\n';
}

void write_curves_csv(std::ostream& out, std::span<const ReadingCurve> curves,
                      const std::vector<std::string>& suspect_names) {
    out << "step,suspect,probability,reader\n";
    for (const auto& curve : curves) {
        if (curve.num_suspects() != suspect_names.size())
            throw std::invalid_argument("curve roster size does not match suspect names");
        for (const auto& step : curve.steps())
            for (std::size_t s = 0; s < suspect_names.size(); ++s)
                out << step.prefix_length << ',' << csv_field(suspect_names[s]) << ',' << format_double(step.belief[s]) << ','
                    << csv_field(curve.reader_label()) << '\n';
    }
}

}  // namespace fairplay
