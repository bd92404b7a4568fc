#include "fairplay/runner/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "fairplay/core/log.hpp"
#include "fairplay/core/random.hpp"
#include "fairplay/core/story_io.hpp"
#include "fairplay/llm/generation.hpp"
#include "fairplay/llm/judge.hpp"
#include "fairplay/llm/parallel.hpp"
#include "fairplay/llm/pipeline.hpp"
#include "fairplay/measures/tradeoff.hpp"
#include "fairplay/measures/verification.hpp"
#include "fairplay/metrics/erc.hpp"
#include "fairplay/metrics/report.hpp"
#include "fairplay/runner/plot.hpp"
#include "fairplay/synthetic/detectives.hpp"
#include "fairplay/synthetic/presets.hpp"
#include "fairplay/synthetic/world_io.hpp"

namespace fs = std::filesystem;

namespace fairplay::runner {

namespace {

using metrics::kUnavailable;

constexpr std::size_t kGridPoints = 100;

// Collects artifacts and warnings of one command and writes its manifest.
class Output {
public:
    Output(const RunConfig& config, const std::string& sub) : dir_((fs::path(config.output_dir) / sub).string()) {
        fs::create_directories(dir_);
        result_.directory = dir_;
        previous_ = set_warning_sink([this](std::string_view m) {
            {
                std::lock_guard lock(mu_);
                warnings_.emplace_back(m);
            }
            if (previous_) previous_(m);
            else std::fprintf(stderr, "warning: %.*s\n", static_cast<int>(m.size()), m.data());
        });
    }
    ~Output() { set_warning_sink(previous_); }
    Output(const Output&) = delete;
    Output& operator=(const Output&) = delete;

    void write(const std::string& rel, const std::string& content) {
        const fs::path path = fs::path(dir_) / rel;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) {
            fail("cannot write " + rel);
            return;
        }
        result_.artifacts.push_back(rel);
    }
    void keep(const std::string& rel) { result_.artifacts.push_back(rel); }
    void fail(std::string why) { result_.failures.push_back(std::move(why)); }
    void note(std::string line) { result_.notes.push_back(std::move(line)); }

    CommandResult finish(const std::string& command, nlohmann::json settings, nlohmann::json extra = nullptr) {
        std::vector<std::string> warnings;
        {
            std::lock_guard lock(mu_);
            warnings = warnings_;
        }
        // Warnings from worker threads arrive in any order.
        std::sort(warnings.begin(), warnings.end());
        auto artifacts = result_.artifacts;
        artifacts.push_back("manifest.json");
        std::sort(artifacts.begin(), artifacts.end());
        nlohmann::json manifest = {{"command", command},
                                   {"settings", std::move(settings)},
                                   {"artifacts", artifacts},
                                   {"failures", result_.failures},
                                   {"warnings", warnings},
                                   {"complete", result_.failures.empty()}};
        if (!extra.is_null()) manifest["details"] = std::move(extra);
        write("manifest.json", manifest.dump(2) + "\n");
        std::sort(result_.artifacts.begin(), result_.artifacts.end());
        return result_;
    }

private:
    std::string dir_;
    CommandResult result_;
    std::mutex mu_;
    std::vector<std::string> warnings_;
    WarningSink previous_;
};

std::uint64_t seed_of(const RunConfig& c) {
    return c.seed.value_or(1);
}

std::uint64_t text_seed(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
    return mix_seed(h ^ mix_seed(seed));
}

nlohmann::json backend_settings(const llm::BackendConfig& b) {
    nlohmann::json j = {{"kind", b.kind}, {"temperature", b.temperature}};
    if (b.kind != "mock") {
        j["endpoint"] = b.endpoint;
        j["model"] = b.model;
    }
    return j;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + csv_field(fields[i]);
    return s + "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> json_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory " + dir + " does not exist");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

// "label=dir" or "dir" (label = directory name).
std::pair<std::string, std::string> labelled(const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq != std::string::npos) return {arg.substr(0, eq), arg.substr(eq + 1)};
    auto name = fs::path(arg).lexically_normal().filename().string();
    if (name.empty()) name = fs::path(arg).lexically_normal().parent_path().filename().string();
    return {name, arg};
}

std::string curves_csv(const std::vector<ReadingCurve>& curves, const std::vector<std::string>& names) {
    std::ostringstream o;
    write_curves_csv(o, curves, names);
    return o.str();
}

LineSeries culprit_series(const ReadingCurve& curve, SuspectIndex suspect, const std::string& label,
                          bool dashed = false) {
    LineSeries s;
    s.label = label;
    s.dashed = dashed;
    for (const auto& step : curve.steps()) {
        s.x.push_back(static_cast<double>(step.prefix_length));
        s.y.push_back(step.belief[suspect]);
    }
    return s;
}

nlohmann::json log_gap_json(const measures::LogGapBoundReport& r) {
    return {{"measured_epsilon", std::isfinite(r.measured_epsilon) ? nlohmann::json(r.measured_epsilon)
                                                                   : nlohmann::json("inf")},
            {"epsilon", std::isfinite(r.epsilon) ? nlohmann::json(r.epsilon) : nlohmann::json("inf")},
            {"precondition_holds", r.precondition_holds},
            {"max_ceff_gap", r.max_ceff_gap},
            {"bound_holds", r.bound_holds},
            {"summary", r.summary()}};
}

std::string whisker_row(const std::string& name, const std::vector<double>& values) {
    if (values.empty()) return csv_line({name, "0", "NA", "NA", "NA", "NA", "NA", "NA", "NA", "NA", ""});
    const auto s = metrics::whisker_stats(values);
    std::string outliers;
    for (double v : s.outliers) outliers += (outliers.empty() ? "" : " ") + format_double(v);
    return csv_line({name, std::to_string(values.size()), format_double(s.min), format_double(s.q1),
                     format_double(s.median), format_double(s.q3), format_double(s.max), format_double(s.mean),
                     format_double(s.lower_whisker), format_double(s.upper_whisker), outliers});
}

const char* const kWhiskerHeader = "metric,count,min,q1,median,q3,max,mean,lower_whisker,upper_whisker,outliers\n";

}  // namespace

void RunConfig::validate() const {
    static const std::vector<std::string> modes = {"synthetic", "generate", "analyze", "real", "report"};
    if (std::find(modes.begin(), modes.end(), mode) == modes.end())
        throw std::invalid_argument("unknown mode '" + mode + "'");
    if (output_dir.empty()) throw std::invalid_argument("an output directory is required");
    if (mode == "synthetic") {
        if (!seed) throw std::invalid_argument("synthetic mode needs --seed");
        if (world_file.empty() && preset.empty()) throw std::invalid_argument("synthetic mode needs a preset or a world file");
        if (thresholds) thresholds->validate();
        if (genre_log_ratio < 0.0) throw std::invalid_argument("genre log ratio must be >= 0");
        if (expectation.mode == measures::ExpectationMode::Sampled && expectation.samples == 0)
            throw std::invalid_argument("sampled expectations need at least one sample");
    }
    if (mode == "generate" || mode == "analyze" || mode == "real") backend.validate();
    if (mode == "generate") {
        if (stories == 0) throw std::invalid_argument("--stories must be at least 1");
        if (paragraphs < 3) throw std::invalid_argument("--paragraphs must be at least 3");
    }
    if (mode == "analyze" && samples_per_step == 0) throw std::invalid_argument("--samples-per-step must be at least 1");
    if (mode == "real" && real_corpora.empty()) throw std::invalid_argument("real mode needs at least one --corpus");
    if (mode == "report" && analyses.empty()) throw std::invalid_argument("report mode needs at least one --analysis");
}

CommandResult cmd_synthetic(const RunConfig& c) {
    using namespace measures;
    Output out(c, "synthetic");
    const std::uint64_t seed = *c.seed;
    const auto world = c.world_file.empty() ? synthetic::preset_world(c.preset, seed) : synthetic::load_world(c.world_file);
    const std::string world_name = c.world_file.empty() ? c.preset : fs::path(c.world_file).stem().string();
    const auto scenario = Scenario::single_world(world);

    ExpectationOptions eo = c.expectation;
    eo.seed = seed;
    eo.log_floor = c.log_floor;
    MeasureConfig mc = c.thresholds.value_or(MeasureConfig{});
    mc.log_floor = c.log_floor;
    LedgerBuildInfo info;
    auto ledger = build_tradeoff_ledger(scenario, mc, ReaderKind::Gullible, eo, &info);
    if (!c.thresholds) {
        mc = derive_thresholds(ledger, c.log_floor);
        ledger = TradeoffLedger(ledger.rows(), ledger.roster_size(), ledger.assessed(), mc);
    }
    const auto tradeoff = verify_tradeoff(ledger, mc);
    const auto external = external_coherence_check(ledger, mc);
    {
        std::ostringstream o;
        ledger.write_csv(o);
        out.write("ledger.csv", o.str());
    }
    out.note("tradeoff: " + tradeoff.summary());

    nlohmann::json report = {
        {"world", world_name},
        {"suspects", world.suspects()},
        {"steps", world.num_steps()},
        {"expectation",
         {{"mode", info.mode_used == ExpectationMode::Exact ? "exact" : "sampled"}, {"samples", info.samples_used}}},
        {"thresholds",
         {{"source", c.thresholds ? "given" : "derived"},
          {"epsilon_external", mc.epsilon_external},
          {"epsilon_intel", mc.epsilon_intel},
          {"epsilon_surprise", mc.epsilon_surprise},
          {"delta_surprise", mc.delta_surprise},
          {"log_floor", mc.log_floor}}},
        {"external_coherence", {{"max_gap", external.max_gap}, {"all_passed", external.all_passed()}}},
    };
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : tradeoff.violations)
        violations.push_back({{"step", v.step}, {"bound", v.bound}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    report["tradeoff"] = {{"bound1_checked", tradeoff.bound1_checked},
                          {"bound2_checked", tradeoff.bound2_checked},
                          {"violations", violations},
                          {"consistent", tradeoff.consistent()},
                          {"summary", tradeoff.summary()}};

    if (scenario.prefix_space() <= kExactPrefixLimit) {
        auto gullible = scenario.make_reader(ReaderKind::Gullible);
        report["lemma_gullible"] = log_gap_json(verify_lemma_intelligence(scenario, *gullible, std::nullopt, c.log_floor));
        PerturbedTracker perturbed(scenario.make_reader(ReaderKind::Brilliant), seed, 0.01);
        const auto lemma = verify_lemma_intelligence(scenario, perturbed, 0.01, c.log_floor);
        report["lemma_perturbed_brilliant"] = log_gap_json(lemma);
        out.note("perturbed brilliant reader: " + lemma.summary());
        if (c.genre_log_ratio > 0.0) {
            const synthetic::GenreMixture mixture(
                {world, synthetic::perturbed_world(world, mix_seed(seed), c.genre_log_ratio)}, ProbVector::uniform(2));
            const auto genre = verify_genre_proposition(mixture, 0, std::nullopt, c.log_floor);
            report["genre"] = log_gap_json(genre);
            out.note("genre: " + genre.summary());
        }
    } else {
        report["lemma_gullible"] = "skipped: prefix space too large for exact enumeration";
    }

    const auto story = synthetic::sample_story(world, seed);
    const auto curves = synthetic::reading_curves(world, story.clues);
    const std::size_t n = world.num_steps();
    const auto truth = story.culprit;
    out.write("curves.csv", curves_csv({curves.gullible, curves.brilliant, curves.know_it_all}, world.suspects()));
    std::vector<LineSeries> series = {
        culprit_series(curves.gullible, truth, "gullible: " + world.suspects()[truth]),
        culprit_series(curves.brilliant, truth, "brilliant: " + world.suspects()[truth]),
        culprit_series(curves.know_it_all, truth, "know-it-all: " + world.suspects()[truth]),
    };
    if (const auto d = world.distractor_of(truth))
        series.push_back(culprit_series(curves.gullible, *d, "gullible: " + world.suspects()[*d], true));
    out.write("curves.svg", line_plot_svg("Reading curves (" + world_name + ", seed " + std::to_string(seed) + ")",
                                          "step", "probability", series));

    metrics::MetricReport row;
    row.story_id = world_name + "-seed" + std::to_string(seed);
    row.num_steps = n;
    row.revelation_point = llm::detect_revelation(curves.gullible, truth, n);
    row.surprise = metrics::surprise_score(curves.gullible, truth, n);
    row.coherence = metrics::coherence_score(curves.know_it_all, truth, n);
    row.surprise_source = "exact";
    row.coherence_source = "exact";
    try {
        row.erc_exact = metrics::erc_exact(world, *row.revelation_point).mean;
        row.erc_source = "exact";
    } catch (const std::invalid_argument& e) {
        out.note(std::string("exact revelation content skipped: ") + e.what());
    }
    out.write("metrics.csv", metrics::metric_csv_header() + "\n" + metrics::metric_csv_row(row) + "\n");
    nlohmann::json clues = nlohmann::json::array();
    for (auto clue : story.clues) clues.push_back(world.alphabet().at(static_cast<std::size_t>(clue)));
    report["story"] = {{"culprit", world.suspects()[truth]}, {"clues", clues}, {"revelation", *row.revelation_point}};
    out.write("report.json", report.dump(2) + "\n");

    nlohmann::json settings = {{"mode", "synthetic"}, {"seed", seed}, {"world", world_name},
                               {"genre_log_ratio", c.genre_log_ratio}};
    return out.finish("synthetic", settings);
}

CommandResult cmd_generate(const RunConfig& c) {
    Output out(c, "generate");
    const auto backend = llm::make_backend(c.backend);
    const std::uint64_t seed = seed_of(c);
    llm::GenerationJob job;
    job.target_paragraphs = c.paragraphs;
    job.temperature = c.backend.temperature;

    struct Slot {
        std::string id;
        std::optional<llm::GeneratedStory> story;
        bool reused = false;
        std::string error;
    };
    std::vector<Slot> slots(c.stories);
    for (std::size_t s = 0; s < c.stories; ++s) {
        char id[32];
        std::snprintf(id, sizeof id, "story-%03zu", s + 1);
        slots[s].id = id;
        const fs::path existing = fs::path(c.output_dir) / "generate" / "stories" / (slots[s].id + ".json");
        if (!fs::exists(existing)) continue;
        try {
            auto g = llm::generated_story_from_json(nlohmann::json::parse(read_text(existing)));
            if (g.story.size() == c.paragraphs && g.transcript.nonce() == mix_seed(seed + s)) {
                slots[s].story = std::move(g);
                slots[s].reused = true;
            }
        } catch (const std::exception& e) {
            log_warning("regenerating " + slots[s].id + ": stored copy unreadable (" + e.what() + ")");
        }
    }
    llm::parallel_for(c.stories, c.backend.max_parallel, [&](std::size_t s) {
        if (slots[s].story) return;
        try {
            slots[s].story = llm::generate_story(*backend, job, mix_seed(seed + s));
        } catch (const std::exception& e) {
            slots[s].error = e.what();
        }
    });

    nlohmann::json entries = nlohmann::json::array();
    std::size_t flagged = 0, available = 0;
    for (const auto& slot : slots) {
        nlohmann::json e = {{"id", slot.id}};
        const std::string rel = "stories/" + slot.id + ".json";
        if (!slot.story) {
            e["status"] = "failed";
            e["error"] = slot.error;
            out.fail(slot.id + ": " + slot.error);
        } else {
            ++available;
            e["status"] = slot.reused ? "reused" : "generated";
            e["content_hash"] = slot.story->transcript.content_hash();
            e["warnings"] = slot.story->warnings;
            e["protocol_warning"] = !slot.story->warnings.empty();
            if (!slot.story->warnings.empty()) ++flagged;
            if (slot.reused)
                out.keep(rel);
            else
                out.write(rel, llm::generated_story_to_json(*slot.story).dump(2) + "\n");
        }
        entries.push_back(std::move(e));
    }
    out.note(std::to_string(available) + " of " + std::to_string(c.stories) +
             " stories available, " + std::to_string(flagged) + " with protocol warnings");
    nlohmann::json settings = {{"mode", "generate"}, {"seed", seed}, {"stories", c.stories},
                               {"paragraphs", c.paragraphs}, {"backend", backend_settings(c.backend)}};
    return out.finish("generate", settings, {{"stories", entries}});
}

CommandResult cmd_analyze(const RunConfig& c) {
    const std::string corpus = c.corpus_dir.empty() ? (fs::path(c.output_dir) / "generate" / "stories").string()
                                                    : c.corpus_dir;
    const auto files = json_files(corpus);
    if (files.empty()) throw std::runtime_error("corpus " + corpus + " holds no stories");
    Output out(c, "analysis");
    const auto backend = llm::make_backend(c.backend);
    const std::uint64_t seed = seed_of(c);

    std::vector<metrics::MetricReport> reports;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& file : files) {
        const std::string id = file.stem().string();
        llm::AnalysisOptions opts;
        opts.samples_per_step = c.samples_per_step;
        opts.seed = text_seed(id, seed);
        opts.judge.temperature = c.backend.temperature;
        opts.judge.max_parallel = c.backend.max_parallel;
        std::optional<llm::StoryAnalysis> a;
        try {
            const auto g = llm::generated_story_from_json(nlohmann::json::parse(read_text(file)));
            a = llm::analyze_generated_story(*backend, id, g, opts);
        } catch (const std::exception& e) {
            out.fail(id + ": " + e.what());
            entries.push_back({{"id", id}, {"status", "failed"}, {"error", e.what()}});
            continue;
        }
        reports.push_back(a->report);
        entries.push_back({{"id", id}, {"status", "analyzed"}, {"warnings", a->warnings}});
        if (!a->roster || !a->gullible) continue;
        const auto& roster = *a->roster;
        const auto truth = roster.true_culprit();
        std::vector<ReadingCurve> curves{a->gullible->curve};
        std::vector<LineSeries> series{culprit_series(a->gullible->curve, truth, "gullible")};
        if (a->know_it_all) {
            curves.push_back(a->know_it_all->curve.curve);
            series.push_back(culprit_series(a->know_it_all->curve.curve, truth, "know-it-all (sampled)"));
            std::string t = csv_line([&] {
                std::vector<std::string> h{"step", "valid", "excluded", "invalid"};
                for (const auto& s : roster.suspects()) h.push_back(s);
                h.push_back("smoothed_true_culprit");
                return h;
            }());
            for (std::size_t i = 0; i < a->know_it_all->tallies.size(); ++i) {
                const auto& tally = a->know_it_all->tallies[i];
                std::vector<std::string> f{std::to_string(i), std::to_string(tally.valid),
                                           std::to_string(tally.excluded), std::to_string(tally.invalid)};
                for (auto count : tally.counts) f.push_back(std::to_string(count));
                f.push_back(format_double(llm::smoothed_frequencies(tally)[truth]));
                t += csv_line(f);
            }
            out.write("tallies/" + id + ".csv", t);
        }
        if (const auto d = roster.distractor())
            series.push_back(culprit_series(a->gullible->curve, *d, "gullible on distractor", true));
        out.write("curves/" + id + ".csv", curves_csv(curves, roster.suspects()));
        out.write("curves/" + id + ".svg",
                  line_plot_svg("Reading curves: " + id, "paragraph", "probability of the true culprit", series));
        std::string e = csv_line({"setting", "position", "picked", "true_option", "picked_culprit", "true_culprit",
                                  "correct", "chance", "probabilities"});
        for (const auto* o : {&a->erc_ar, &a->erc_br}) {
            if (!*o) continue;
            for (std::size_t k = 0; k < (*o)->records.size(); ++k) {
                const auto& r = (*o)->records[k];
                std::string probs;
                for (double p : (*o)->judged[k].weights()) probs += (probs.empty() ? "" : " ") + format_double(p);
                e += csv_line({metrics::to_string(r.setting), std::to_string(r.position), std::to_string(r.picked),
                               std::to_string(r.true_option), r.option_culprits[r.picked].value_or(""),
                               r.true_culprit, metrics::erc_choice_correct(r) ? "1" : "0",
                               format_double(metrics::erc_choice_baseline(r)), probs});
            }
        }
        out.write("erc/" + id + ".csv", e);
    }

    std::string m = metrics::metric_csv_header() + "\n";
    for (const auto& r : reports) m += metrics::metric_csv_row(r) + "\n";
    out.write("metrics.csv", m);
    const auto summary = metrics::summarize(c.label, reports);
    out.write("summary.csv", metrics::summary_csv_header() + "\n" + metrics::summary_csv_row(summary) + "\n");

    std::vector<double> ss, sc, fp, ar, br;
    for (const auto& r : reports) {
        if (!r.counts_toward_means()) continue;
        if (r.surprise) ss.push_back(*r.surprise);
        if (r.coherence) sc.push_back(*r.coherence);
        if (const auto f = r.fair_play()) fp.push_back(f->scaled);
        if (r.erc_ar && r.erc_ar->records) ar.push_back(r.erc_ar->excess_scaled);
        if (r.erc_br && r.erc_br->records) br.push_back(r.erc_br->excess_scaled);
    }
    out.write("whiskers.csv", std::string(kWhiskerHeader) + whisker_row("s_s", ss) + whisker_row("s_c", sc) +
                                  whisker_row("s_fp_scaled", fp) + whisker_row("erc_ar_scaled", ar) +
                                  whisker_row("erc_br_scaled", br));
    std::vector<BoxSeries> boxes;
    for (const auto& [name, values] : std::vector<std::pair<std::string, std::vector<double>>>{
             {"S_FP x N", fp}, {"ERC AR x N", ar}, {"ERC BR x N", br}})
        if (!values.empty()) boxes.push_back({name, metrics::whisker_stats(values)});
    out.write("whiskers.svg", box_plot_svg("Per-story scores in paragraphs (" + c.label + ")", "paragraphs", boxes));

    out.note(metrics::summary_csv_header());
    out.note(metrics::summary_csv_row(summary));
    nlohmann::json settings = {{"mode", "analyze"}, {"seed", seed}, {"samples_per_step", c.samples_per_step},
                               {"label", c.label}, {"backend", backend_settings(c.backend)}};
    return out.finish("analyze", settings, {{"stories", entries}});
}

CommandResult cmd_real(const RunConfig& c) {
    Output out(c, "real");
    const auto backend = llm::make_backend(c.backend);
    const std::uint64_t seed = seed_of(c);
    llm::JudgeOptions judge;
    judge.temperature = c.backend.temperature;
    judge.max_parallel = c.backend.max_parallel;
    const auto grid = unit_grid(kGridPoints);

    std::string per_story = csv_line({"corpus", "story", "n", "s_s", "curve_valid"});
    std::string corpus_rows = csv_line({"corpus", "stories", "mean_s_s", "std_s_s"});
    std::string mean_rows = csv_line({"corpus", "position", "mean", "std", "stories"});
    std::vector<LineSeries> series;
    nlohmann::json entries = nlohmann::json::array();

    for (const auto& arg : c.real_corpora) {
        const auto [label, dir] = labelled(arg);
        std::vector<std::vector<double>> resampled;
        std::vector<double> scores;
        std::vector<fs::path> files;
        try {
            files = json_files(dir);
        } catch (const std::exception& e) {
            out.fail(label + ": " + e.what());
            continue;
        }
        if (files.empty()) out.fail(label + ": no stories in " + dir);
        for (const auto& file : files) {
            const std::string id = file.stem().string();
            try {
                auto doc = nlohmann::json::parse(read_text(file));
                if (!doc.contains("paragraphs") && doc.contains("text"))
                    doc["paragraphs"] = llm::split_paragraphs(doc.at("text").get<std::string>());
                const auto story = story_from_json(doc);
                if (!story.roster()) throw std::invalid_argument("story has no roster (suspects and true_culprit)");
                const auto& roster = *story.roster();
                const auto est = llm::gullible_curve(*backend, story, roster, text_seed(label + "/" + id, seed), judge);
                const std::size_t n = story.size();
                std::vector<double> x, y;
                for (const auto& step : est.curve.steps()) {
                    x.push_back(static_cast<double>(step.prefix_length) / static_cast<double>(n));
                    y.push_back(step.belief[roster.true_culprit()]);
                }
                std::string score = kUnavailable;
                if (est.valid) {
                    const double s = metrics::surprise_score(est.curve, roster.true_culprit(), n);
                    scores.push_back(s);
                    resampled.push_back(interpolate(x, y, grid));
                    score = format_double(s);
                }
                per_story += csv_line({label, id, std::to_string(n), score, est.valid ? "1" : "0"});
                entries.push_back({{"corpus", label}, {"story", id}, {"status", est.valid ? "ok" : "curve invalid"}});
            } catch (const std::exception& e) {
                out.fail(label + "/" + id + ": " + e.what());
                entries.push_back({{"corpus", label}, {"story", id}, {"status", "failed"}, {"error", e.what()}});
            }
        }
        if (resampled.empty()) continue;
        const auto k = static_cast<double>(resampled.size());
        LineSeries s;
        s.label = label;
        s.x = grid;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            double mean = 0.0, var = 0.0;
            for (const auto& r : resampled) mean += r[g];
            mean /= k;
            for (const auto& r : resampled) var += (r[g] - mean) * (r[g] - mean);
            const double sd = std::sqrt(var / k);
            s.y.push_back(mean);
            s.band_low.push_back(std::max(0.0, mean - sd));
            s.band_high.push_back(std::min(1.0, mean + sd));
            mean_rows += csv_line({label, format_double(grid[g]), format_double(mean), format_double(sd),
                                   std::to_string(resampled.size())});
        }
        series.push_back(std::move(s));
        double mean = 0.0, var = 0.0;
        for (double v : scores) mean += v;
        mean /= static_cast<double>(scores.size());
        for (double v : scores) var += (v - mean) * (v - mean);
        corpus_rows += csv_line({label, std::to_string(scores.size()), format_double(mean),
                                 format_double(std::sqrt(var / static_cast<double>(scores.size())))});
        out.note(label + ": mean S_S " + format_double(mean) + " over " + std::to_string(scores.size()) + " stories");
    }
    out.write("surprise.csv", per_story);
    out.write("corpus_summary.csv", corpus_rows);
    out.write("mean_curves.csv", mean_rows);
    out.write("curves.svg", line_plot_svg("Gullible-reader probability of the true culprit",
                                          "relative location in the story", "probability", series));
    nlohmann::json settings = {{"mode", "real"}, {"seed", seed}, {"grid_points", kGridPoints},
                               {"backend", backend_settings(c.backend)}};
    return out.finish("real", settings, {{"stories", entries}});
}

CommandResult cmd_report(const RunConfig& c) {
    Output out(c, "report");
    std::string table = metrics::summary_csv_header() + "\n";
    std::string md = "| label | stories | G-val | S_S | S_C | S_FP | S_FP >= 1/N | ERC AR x N | ERC BR x N |\n"
                     "|---|---|---|---|---|---|---|---|---|\n";
    std::vector<BoxSeries> fp_boxes, ar_boxes;
    for (const auto& arg : c.analyses) {
        const auto [label, dir] = labelled(arg);
        try {
            std::istringstream summary(read_text(fs::path(dir) / "summary.csv"));
            std::string header, line;
            std::getline(summary, header);
            if (header != metrics::summary_csv_header() || !std::getline(summary, line))
                throw std::runtime_error("summary.csv has an unexpected layout");
            auto f = split_csv_line(line);
            f[0] = label;
            table += csv_line(f);
            md += "| " + label + " | " + f[1] + " | " + f[3] + " | " + f[4] + " | " + f[5] + " | " + f[6] + " | " +
                  f[7] + " | " + f[8] + " | " + f[9] + " |\n";

            std::istringstream rows(read_text(fs::path(dir) / "metrics.csv"));
            std::getline(rows, header);
            const auto cols = split_csv_line(header);
            const auto col = [&](const std::string& name) {
                return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
            };
            const auto g = col("g_val"), fp = col("s_fp_scaled"), ar = col("erc_ar_scaled");
            std::vector<double> fps, ars;
            while (std::getline(rows, line)) {
                const auto r = split_csv_line(line);
                if (r.size() != cols.size() || r[g] == "0") continue;
                if (r[fp] != kUnavailable) fps.push_back(std::stod(r[fp]));
                if (r[ar] != kUnavailable) ars.push_back(std::stod(r[ar]));
            }
            if (!fps.empty()) fp_boxes.push_back({label, metrics::whisker_stats(fps)});
            if (!ars.empty()) ar_boxes.push_back({label, metrics::whisker_stats(ars)});
        } catch (const std::exception& e) {
            out.fail(label + ": " + e.what());
        }
    }
    out.write("table.csv", table);
    out.write("table.md", md);
    out.write("fair_play.svg", box_plot_svg("Fair-play score per story (paragraphs)", "N x S_FP", fp_boxes));
    out.write("erc.svg", box_plot_svg("Revelation content after the revelation (paragraphs)", "N x ERC AR", ar_boxes));
    out.note(md);
    return out.finish("report", {{"mode", "report"}, {"inputs", c.analyses.size()}});
}

CommandResult run_command(const RunConfig& config) {
    config.validate();
    if (config.mode == "synthetic") return cmd_synthetic(config);
    if (config.mode == "generate") return cmd_generate(config);
    if (config.mode == "analyze") return cmd_analyze(config);
    if (config.mode == "real") return cmd_real(config);
    return cmd_report(config);
}

}  // namespace fairplay::runner
