// Command-line entry point: synthetic, generate, analyze, real and report.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "fairplay/runner/commands.hpp"

using namespace fairplay;

int main(int argc, char** argv) {
    CLI::App app{"Fair-play detective story measures: synthetic worlds and LLM-judged corpora"};
    app.set_config("--config", "", "TOML or INI file with option values (keys are the long option names)");
    app.require_subcommand(1);

    runner::RunConfig cfg;
    std::uint64_t seed = 0;
    std::string expectation = "auto";
    double eps_ex = 0.0, eps_intel = 0.0, eps_surprise = 0.0, delta_surprise = 0.0;

    app.add_option("--seed", seed, "Random seed (required for synthetic)");
    app.add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
    app.add_option("--preset", cfg.preset, "Synthetic world preset")
        ->check(CLI::IsMember({"deterministic", "misleading", "random-seeded"}))
        ->capture_default_str();
    app.add_option("--world", cfg.world_file, "Synthetic world JSON file (overrides --preset)");
    app.add_option("--expectation", expectation, "Expectation mode over story prefixes")
        ->check(CLI::IsMember({"exact", "sampled", "auto"}))
        ->capture_default_str();
    app.add_option("--expectation-samples", cfg.expectation.samples, "Stories sampled in sampled mode")
        ->capture_default_str();
    app.add_option("--log-floor", cfg.log_floor, "Probability floor inside logarithms")->capture_default_str();
    auto* o1 = app.add_option("--eps-ex", eps_ex, "External coherence threshold");
    auto* o2 = app.add_option("--eps-intel", eps_intel, "Intelligence threshold");
    auto* o3 = app.add_option("--eps-surprise", eps_surprise, "Weak surprise margin");
    auto* o4 = app.add_option("--delta-surprise", delta_surprise, "Strong surprise margin");
    app.add_option("--genre-log-ratio", cfg.genre_log_ratio,
                   "Row perturbation of the second genre component (0 skips the genre check)")
        ->capture_default_str();

    auto& b = cfg.backend;
    app.add_option("--backend", b.kind, "Chat backend")->check(CLI::IsMember({"mock", "openai"}))->capture_default_str();
    app.add_option("--endpoint", b.endpoint, "OpenAI-compatible base URL")->capture_default_str();
    app.add_option("--model", b.model, "Model identifier")->capture_default_str();
    app.add_option("--temperature", b.temperature, "Sampling temperature")->capture_default_str();
    app.add_option("--timeout", b.timeout_seconds, "Request timeout in seconds")->capture_default_str();
    app.add_option("--retries", b.retries, "Retry budget per request")->capture_default_str();
    app.add_option("--credential-env", b.credential_env, "Environment variable holding the API key")
        ->capture_default_str();
    app.add_option("--parallel", b.max_parallel, "Concurrent backend requests")->capture_default_str();
    app.add_option("--cache-dir", b.cache_dir, "Reply cache directory (empty disables caching)");

    app.add_option("--samples-per-step", cfg.samples_per_step, "Continuations per prefix (K)")->capture_default_str();
    app.add_option("--stories", cfg.stories, "Stories to generate")->capture_default_str();
    app.add_option("--paragraphs", cfg.paragraphs, "Paragraphs per generated story")->capture_default_str();
    app.add_option("--corpus-dir", cfg.corpus_dir, "Generated stories to analyze (default <out>/generate/stories)");
    app.add_option("--label", cfg.label, "Corpus label in the summary row")->capture_default_str();
    app.add_option("--corpus", cfg.real_corpora, "Real-story corpus directory, as dir or label=dir (repeatable)");
    app.add_option("--analysis", cfg.analyses, "Analysis directory to tabulate, as dir or label=dir (repeatable)");

    const std::pair<const char*, const char*> commands[] = {
        {"synthetic", "Tradeoff ledger, bound checks and reading curves on a synthetic world"},
        {"generate", "Generate a story corpus paragraph by paragraph"},
        {"analyze", "Judge a generated corpus: validity, curves, fair-play and revelation content"},
        {"real", "Gullible-reader surprise curves over human-written stories"},
        {"report", "Tabulate analyzed corpora side by side"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.mode = app.get_subcommands().front()->get_name();
    if (app.count("--seed")) cfg.seed = seed;
    cfg.expectation.mode = expectation == "exact"     ? measures::ExpectationMode::Exact
                           : expectation == "sampled" ? measures::ExpectationMode::Sampled
                                                      : measures::ExpectationMode::Auto;
    if (o1->count() || o2->count() || o3->count() || o4->count()) {
        measures::MeasureConfig t;
        t.log_floor = cfg.log_floor;
        t.epsilon_external = eps_ex;
        t.epsilon_intel = eps_intel;
        t.epsilon_surprise = eps_surprise;
        t.delta_surprise = delta_surprise;
        cfg.thresholds = t;
    }

    try {
        const auto result = runner::run_command(cfg);
        for (const auto& line : result.notes) std::cout << line << '\n';
        std::cout << result.artifacts.size() << " artifacts in " << result.directory << '\n';
        for (const auto& f : result.failures) std::cerr << "failed: " << f << '\n';
        return result.ok() ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
