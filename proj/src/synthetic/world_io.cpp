#include "fairplay/synthetic/world_io.hpp"

#include <fstream>

namespace fairplay::synthetic {

namespace {

std::size_t index_of(const std::vector<std::string>& names, const std::string& name, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw WorldError(std::string("unknown ") + what + " '" + name + "'");
}

std::vector<std::size_t> parse_steps(const nlohmann::json& v, std::size_t n) {
    std::vector<std::size_t> out;
    if (v.is_string() && v.get<std::string>() == "all") {
        for (std::size_t s = 1; s <= n; ++s) out.push_back(s);
    } else if (v.is_array()) {
        out = v.get<std::vector<std::size_t>>();
    } else if (v.is_object()) {
        for (std::size_t s = v.at("from").get<std::size_t>(); s <= v.at("to").get<std::size_t>(); ++s) out.push_back(s);
    } else if (v.is_number_integer() && v.get<long long>() >= 0) {
        out.push_back(v.get<std::size_t>());
    } else {
        throw WorldError("kernel rule 'steps' must be \"all\", a list, a range or a step number");
    }
    for (auto s : out)
        if (s < 1 || s > n) throw WorldError("kernel rule step " + std::to_string(s) + " out of range");
    return out;
}

std::vector<std::size_t> parse_contexts(const nlohmann::json& v, const SyntheticWorld& w) {
    std::vector<std::size_t> out;
    if (v.is_string() && v.get<std::string>() == "any") {
        for (std::size_t c = 0; c < w.num_contexts(); ++c) out.push_back(c);
        return out;
    }
    if (!v.is_array()) throw WorldError("kernel rule 'context' must be \"any\" or a list of clues");
    if (v.size() > w.context_order()) throw WorldError("kernel rule context is longer than the context order");
    std::vector<Clue> clues;
    for (const auto& s : v) clues.push_back(static_cast<Clue>(index_of(w.alphabet(), s.get<std::string>(), "clue")));
    out.push_back(w.context_of(clues));
    return out;
}

std::vector<double> parse_row(const nlohmann::json& v, const SyntheticWorld& w) {
    if (v.is_array()) return v.get<std::vector<double>>();
    if (!v.is_object()) throw WorldError("kernel rule 'probabilities' must be a list or an object");
    std::vector<double> row(w.alphabet_size(), 0.0);
    for (const auto& [clue, p] : v.items()) row[index_of(w.alphabet(), clue, "clue")] = p.get<double>();
    return row;
}

// Clue list (oldest first) that produces context index `ctx`.
nlohmann::json context_to_json(const SyntheticWorld& w, std::size_t ctx) {
    std::vector<std::string> newest_first;
    const std::size_t base = w.alphabet_size() + 1;
    for (std::size_t i = 0; i < w.context_order(); ++i) {
        const std::size_t digit = ctx % base;
        ctx /= base;
        if (digit == 0) break;
        newest_first.push_back(w.alphabet()[digit - 1]);
    }
    return nlohmann::json(std::vector<std::string>(newest_first.rbegin(), newest_first.rend()));
}

}  // namespace

SyntheticWorld world_from_json(const nlohmann::json& doc) {
    SyntheticWorld::Shape shape;
    shape.suspects = doc.at("suspects").get<std::vector<std::string>>();
    shape.alphabet = doc.at("alphabet").get<std::vector<std::string>>();
    shape.num_steps = doc.at("num_steps").get<std::size_t>();
    shape.context_order = doc.value("context_order", std::size_t{1});
    SyntheticWorld w(shape);

    if (doc.contains("prior")) w.set_prior(ProbVector(doc["prior"].get<std::vector<double>>()));
    for (const auto& [clue, suspect] : doc.at("conclusive").items())
        w.set_conclusive(static_cast<Clue>(index_of(w.alphabet(), clue, "clue")),
                         index_of(w.suspects(), suspect.get<std::string>(), "suspect"));
    if (doc.contains("distractors"))
        for (const auto& [culprit, distractor] : doc["distractors"].items())
            w.set_distractor(index_of(w.suspects(), culprit, "suspect"),
                             index_of(w.suspects(), distractor.get<std::string>(), "suspect"));

    for (const auto& rule : doc.at("kernel")) {
        const auto steps = parse_steps(rule.value("steps", nlohmann::json("all")), w.num_steps());
        std::vector<SuspectIndex> culprits;
        const auto who = rule.value("culprit", nlohmann::json("all"));
        if (who.is_string() && who.get<std::string>() == "all") {
            for (SuspectIndex y = 0; y < w.num_suspects(); ++y) culprits.push_back(y);
        } else {
            culprits.push_back(index_of(w.suspects(), who.get<std::string>(), "suspect"));
        }
        const auto contexts = parse_contexts(rule.value("context", nlohmann::json("any")), w);
        const auto row = parse_row(rule.at("probabilities"), w);
        for (auto s : steps)
            for (auto y : culprits)
                for (auto ctx : contexts) w.set_row(s, y, ctx, row);
    }
    w.validate();
    return w;
}

nlohmann::json world_to_json(const SyntheticWorld& w) {
    nlohmann::json doc;
    doc["suspects"] = w.suspects();
    doc["alphabet"] = w.alphabet();
    doc["num_steps"] = w.num_steps();
    doc["context_order"] = w.context_order();
    doc["prior"] = std::vector<double>(w.prior().weights().begin(), w.prior().weights().end());
    doc["conclusive"] = nlohmann::json::object();
    for (std::size_t c = 0; c < w.alphabet_size(); ++c)
        if (auto y = w.conclusive_culprit(static_cast<Clue>(c))) doc["conclusive"][w.alphabet()[c]] = w.suspects()[*y];
    doc["distractors"] = nlohmann::json::object();
    for (SuspectIndex y = 0; y < w.num_suspects(); ++y)
        if (auto d = w.distractor_of(y)) doc["distractors"][w.suspects()[y]] = w.suspects()[*d];
    doc["kernel"] = nlohmann::json::array();
    for (std::size_t s = 1; s <= w.num_steps(); ++s)
        for (SuspectIndex y = 0; y < w.num_suspects(); ++y)
            for (std::size_t ctx = 0; ctx < w.num_contexts(); ++ctx) {
                const auto r = w.row(s, y, ctx);
                doc["kernel"].push_back({{"steps", {s}},
                                         {"culprit", w.suspects()[y]},
                                         {"context", context_to_json(w, ctx)},
                                         {"probabilities", std::vector<double>(r.begin(), r.end())}});
            }
    return doc;
}

SyntheticWorld load_world(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open world file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw WorldError("world file " + path + " is not valid JSON: " + e.what());
    }
    try {
        return world_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw WorldError("world file " + path + ": " + e.what());
    }
}

}  // namespace fairplay::synthetic
