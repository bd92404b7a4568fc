#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "fairplay/core/log.hpp"
#include "fairplay/llm/mock_backend.hpp"
#include "fairplay/llm/transcript.hpp"
#include "fairplay/runner/commands.hpp"
#include "fairplay/runner/plot.hpp"

using namespace fairplay;
using namespace fairplay::runner;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

// Silences warnings for the duration of a test.
struct QuietWarnings {
    WarningSink previous = set_warning_sink([](std::string_view) {});
    ~QuietWarnings() { set_warning_sink(previous); }
};

void write_json(const fs::path& p, const nlohmann::json& doc) {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << doc.dump(2);
}

}  // namespace

TEST_CASE("interpolation onto the unit grid") {
    const auto grid = unit_grid(5);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    CHECK(grid[2] == doctest::Approx(0.5));

    const auto flat = interpolate({0.0, 0.3, 1.0}, {0.25, 0.25, 0.25}, unit_grid(100));
    for (double v : flat) CHECK(v == 0.25);

    const auto line = interpolate({0.0, 1.0}, {0.0, 2.0}, {0.0, 0.25, 0.5, 1.0});
    CHECK(line[1] == doctest::Approx(0.5));
    CHECK(line[2] == doctest::Approx(1.0));
    const auto clamped = interpolate({0.2, 0.8}, {1.0, 3.0}, {0.0, 1.0});
    CHECK(clamped[0] == 1.0);
    CHECK(clamped[1] == 3.0);
}

TEST_CASE("whisker statistics") {
    const std::vector<double> v = {1, 2, 3, 4, 100};
    const auto w = metrics::whisker_stats(v);
    CHECK(w.min == 1);
    CHECK(w.q1 == 2);
    CHECK(w.median == 3);
    CHECK(w.q3 == 4);
    CHECK(w.max == 100);
    CHECK(w.mean == doctest::Approx(22));
    CHECK(w.lower_whisker == 1);
    CHECK(w.upper_whisker == 4);
    REQUIRE(w.outliers.size() == 1);
    CHECK(w.outliers[0] == 100);

    const auto svg = box_plot_svg("t", "y", {{"a", w}});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<metadata>") != std::string::npos);
}

TEST_CASE("line plot embeds its data") {
    LineSeries s{"curve", {0, 1}, {0.25, 0.75}, {}, {}, false};
    const auto svg = line_plot_svg("title", "x", "y", {s});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("curve") != std::string::npos);
    CHECK(svg.find("0.75") != std::string::npos);
}

TEST_CASE("run configuration validation") {
    RunConfig c;
    c.mode = "synthetic";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // seed missing
    c.seed = 1;
    CHECK_NOTHROW(c.validate());
    c.mode = "dance";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.mode = "report";
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // nothing to report
}

TEST_CASE("synthetic command is reproducible") {
    TempDir a("fairplay_syn_a"), b("fairplay_syn_b");
    RunConfig c;
    c.mode = "synthetic";
    c.seed = 7;
    c.preset = "random-seeded";
    c.output_dir = a.path.string();
    const auto ra = run_command(c);
    CHECK(ra.ok());
    c.output_dir = b.path.string();
    const auto rb = run_command(c);
    REQUIRE(ra.artifacts == rb.artifacts);
    for (const auto& f : ra.artifacts)
        CHECK_MESSAGE(slurp(a.path / "synthetic" / f) == slurp(b.path / "synthetic" / f), f);
    const auto m = manifest(a.path / "synthetic");
    CHECK(m.at("complete") == true);
    CHECK(m.dump().find(a.path.string()) == std::string::npos);
}

TEST_CASE("deterministic preset gives full coherence") {
    TempDir d("fairplay_syn_det");
    RunConfig c;
    c.mode = "synthetic";
    c.seed = 3;
    c.preset = "deterministic";
    c.output_dir = d.path.string();
    REQUIRE(run_command(c).ok());
    std::istringstream rows(slurp(d.path / "synthetic" / "metrics.csv"));
    std::string header, row;
    std::getline(rows, header);
    std::getline(rows, row);
    std::vector<std::string> h, r;
    std::string cell;
    for (std::istringstream hs(header); std::getline(hs, cell, ',');) h.push_back(cell);
    for (std::istringstream rs(row); std::getline(rs, cell, ',');) r.push_back(cell);
    const auto col = std::find(h.begin(), h.end(), "s_c") - h.begin();
    REQUIRE(static_cast<std::size_t>(col) < r.size());
    CHECK(std::stod(r[col]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analyze rejects an empty corpus") {
    TempDir d("fairplay_empty");
    fs::create_directories(d.path / "stories");
    RunConfig c;
    c.mode = "analyze";
    c.output_dir = d.path.string();
    c.corpus_dir = (d.path / "stories").string();
    CHECK_THROWS(run_command(c));
}

TEST_CASE("generate reuses stored stories") {
    QuietWarnings quiet;
    TempDir d("fairplay_gen_reuse");
    RunConfig c;
    c.mode = "generate";
    c.seed = 5;
    c.stories = 2;
    c.paragraphs = 6;
    c.output_dir = d.path.string();
    REQUIRE(run_command(c).ok());
    auto m = manifest(d.path / "generate");
    for (const auto& e : m.at("details").at("stories")) CHECK(e.at("status") == "generated");
    const auto first = slurp(d.path / "generate" / "stories" / "story-001.json");

    c.stories = 3;
    REQUIRE(run_command(c).ok());
    m = manifest(d.path / "generate");
    const auto& entries = m.at("details").at("stories");
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].at("status") == "reused");
    CHECK(entries[1].at("status") == "reused");
    CHECK(entries[2].at("status") == "generated");
    CHECK(slurp(d.path / "generate" / "stories" / "story-001.json") == first);

    c.paragraphs = 7;  // a different length invalidates the stored copies
    REQUIRE(run_command(c).ok());
    for (const auto& e : manifest(d.path / "generate").at("details").at("stories"))
        CHECK(e.at("status") == "generated");
}

TEST_CASE("generate flags protocol warnings in the manifest") {
    QuietWarnings quiet;
    llm::MockBackend mock;
    httplib::Server server;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        const auto body = nlohmann::json::parse(req.body);
        llm::ChatRequest r{llm::messages_from_json(body.at("messages")), body.at("temperature").get<double>(),
                           body.at("seed").get<std::uint64_t>()};
        std::string text = mock.complete(r);
        if (r.messages.front().content == "You are a story writer.") text += "\n\nA second paragraph slipped in.";
        nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread loop([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    TempDir d("fairplay_gen_flag");
    RunConfig c;
    c.mode = "generate";
    c.seed = 9;
    c.stories = 2;
    c.paragraphs = 5;
    c.output_dir = d.path.string();
    c.backend.kind = "openai";
    c.backend.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    c.backend.credential_env = "FAIRPLAY_UNSET_KEY";
    const auto result = run_command(c);
    server.stop();
    loop.join();

    CHECK(result.ok());
    const auto m = manifest(d.path / "generate");
    for (const auto& e : m.at("details").at("stories")) {
        CHECK(e.at("protocol_warning") == true);
        CHECK_FALSE(e.at("warnings").empty());
    }
    CHECK_FALSE(m.at("warnings").empty());
}

TEST_CASE("real command averages curves per corpus") {
    QuietWarnings quiet;
    TempDir d("fairplay_real");
    const nlohmann::json roster = {{"suspects", {"Abbott", "Blake", "Carver", "Dunne"}}, {"true_culprit", "Carver"}};
    auto story = [&](const std::vector<std::string>& paragraphs) {
        auto doc = roster;
        doc["paragraphs"] = paragraphs;
        return doc;
    };
    write_json(d.path / "one" / "a.json",
               story({"Abbott, Blake, Carver and Dunne dined.", "Blake looked nervous.", "Carver had mud on his boots.",
                      "Carver confessed."}));
    auto text_doc = roster;
    text_doc["text"] = "Blake was seen near the study.\n\nDunne found a letter.\n\nCarver confessed.";
    write_json(d.path / "two" / "b.json", text_doc);
    write_json(d.path / "two" / "c.json", story({"Dunne hid something.", "Carver was quiet.", "Carver confessed."}));

    RunConfig c;
    c.mode = "real";
    c.output_dir = d.path.string();
    c.real_corpora = {"single=" + (d.path / "one").string(), "pair=" + (d.path / "two").string()};
    const auto result = run_command(c);
    CHECK(result.ok());

    std::istringstream rows(slurp(d.path / "real" / "mean_curves.csv"));
    std::string line;
    std::getline(rows, line);
    std::size_t single = 0, pair = 0;
    while (std::getline(rows, line)) {
        std::vector<std::string> f;
        std::string cell;
        for (std::istringstream ls(line); std::getline(ls, cell, ',');) f.push_back(cell);
        REQUIRE(f.size() == 5);
        if (f[0] == "single") {
            ++single;
            CHECK(std::stod(f[3]) == 0.0);  // one story: no spread
            CHECK(f[4] == "1");
        } else {
            ++pair;
            CHECK(f[4] == "2");
        }
    }
    CHECK(single == 100);
    CHECK(pair == 100);
    CHECK(slurp(d.path / "real" / "corpus_summary.csv").find("pair,2,") != std::string::npos);

    c.real_corpora = {(d.path / "missing").string()};
    CHECK_FALSE(run_command(c).ok());
}
