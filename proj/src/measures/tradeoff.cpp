#include "fairplay/measures/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fairplay/core/story_io.hpp"

namespace fairplay::measures {

namespace {

constexpr std::array<ReaderKind, 3> kAllReaders = {ReaderKind::Gullible, ReaderKind::Brilliant,
                                                   ReaderKind::KnowItAll};

void fill_bounds(TradeoffRow& r, std::size_t roster_size, const MeasureConfig& config) {
    r.surprise = classify_surprise(r.expected_uninformedness, roster_size, config);
    r.bound1_lhs = config.delta_surprise - r.delta_intel;
    r.bound1_rhs = static_cast<double>(r.step) * config.epsilon_external;
    r.bound2_lhs = r.delta_in - config.epsilon_surprise;
    r.bound2_rhs = config.epsilon_intel;
}

}  // namespace

TradeoffLedger::TradeoffLedger(std::vector<TradeoffRow> rows, std::size_t roster_size, ReaderKind assessed,
                               const MeasureConfig& config)
    : rows_(std::move(rows)), roster_size_(roster_size), assessed_(assessed), config_(config) {
    config_.validate();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].step != i + 1) throw std::invalid_argument("tradeoff ledger steps must run 1..N contiguously");
        fill_bounds(rows_[i], roster_size_, config_);
    }
}

TradeoffLedger TradeoffLedger::from_series(const std::array<std::vector<double>, 3>& ceff,
                                           const std::vector<double>& assessed_uninformedness,
                                           std::size_t roster_size, ReaderKind assessed,
                                           const MeasureConfig& config) {
    const std::size_t n = ceff[0].size();
    for (const auto& s : ceff)
        if (s.size() != n) throw std::invalid_argument("clue effectiveness series differ in length");
    if (assessed_uninformedness.size() != n + 1)
        throw std::invalid_argument("uninformedness series must have N + 1 entries");
    const auto b = static_cast<std::size_t>(ReaderKind::Brilliant);
    const auto m = static_cast<std::size_t>(assessed);
    std::vector<TradeoffRow> rows(n);
    double delta_in = 0.0, delta_intel = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& r = rows[i];
        r.step = i + 1;
        for (std::size_t k = 0; k < 3; ++k) r.ceff[k] = ceff[k][i];
        delta_in += ceff[b][i];
        delta_intel += ceff[b][i] - ceff[m][i];
        r.delta_in = delta_in;
        r.delta_intel = delta_intel;
        r.expected_uninformedness = assessed_uninformedness[i + 1];
    }
    return TradeoffLedger(std::move(rows), roster_size, assessed, config);
}

const TradeoffRow& TradeoffLedger::row(std::size_t step) const {
    if (step < 1 || step > rows_.size()) throw std::out_of_range("tradeoff ledger step out of range");
    return rows_[step - 1];
}

void TradeoffLedger::write_csv(std::ostream& out) const {
    out << "step,ceff_gullible,ceff_brilliant,ceff_knowitall,delta_in,delta_intel,surprise_class,"
           "bound1_lhs,bound1_rhs,bound2_lhs,bound2_rhs\n";
    for (const auto& r : rows_) {
        out << r.step << ',' << format_double(r.ceff_of(ReaderKind::Gullible)) << ','
            << format_double(r.ceff_of(ReaderKind::Brilliant)) << ','
            << format_double(r.ceff_of(ReaderKind::KnowItAll)) << ',' << format_double(r.delta_in) << ','
            << format_double(r.delta_intel) << ',' << r.surprise.label() << ',' << format_double(r.bound1_lhs) << ','
            << format_double(r.bound1_rhs) << ',' << format_double(r.bound2_lhs) << ','
            << format_double(r.bound2_rhs) << '\n';
    }
}

TradeoffLedger build_tradeoff_ledger(const Scenario& scenario, const MeasureConfig& config, ReaderKind assessed,
                                     const ExpectationOptions& options, LedgerBuildInfo* info) {
    std::array<std::unique_ptr<BeliefTracker>, 3> owned;
    std::array<BeliefTracker*, 3> readers{};
    for (std::size_t k = 0; k < 3; ++k) {
        owned[k] = scenario.make_reader(kAllReaders[k]);
        readers[k] = owned[k].get();
    }
    auto opts = options;
    opts.log_floor = config.log_floor;
    const auto h = expected_uninformedness(scenario, readers, opts);
    if (info) *info = {h.mode_used, h.samples_used};
    std::array<std::vector<double>, 3> ceff;
    for (std::size_t k = 0; k < 3; ++k) ceff[k] = clue_effectiveness_series(h.per_reader[k]);
    return TradeoffLedger::from_series(ceff, h.per_reader[static_cast<std::size_t>(assessed)],
                                       scenario.num_suspects(), assessed, config);
}

double internal_coherence(const TradeoffLedger& ledger, std::size_t i) {
    if (i == 0) return 0.0;
    return ledger.row(i).delta_in;
}

double intelligence_gap(const TradeoffLedger& ledger, ReaderKind reader, std::size_t i) {
    if (i > ledger.num_steps()) throw std::out_of_range("tradeoff ledger step out of range");
    double gap = 0.0;
    for (std::size_t j = 1; j <= i; ++j) {
        const auto& r = ledger.row(j);
        gap += r.ceff_of(ReaderKind::Brilliant) - r.ceff_of(reader);
    }
    return gap;
}

bool ExternalCoherenceReport::all_passed() const {
    return std::all_of(passed.begin(), passed.end(), [](bool b) { return b; });
}

ExternalCoherenceReport external_coherence_check(const TradeoffLedger& ledger, const MeasureConfig& config) {
    ExternalCoherenceReport out;
    for (const auto& r : ledger.rows()) {
        const double gap = std::abs(r.ceff_of(ReaderKind::Brilliant) - r.ceff_of(ReaderKind::KnowItAll));
        out.gaps.push_back(gap);
        out.passed.push_back(gap <= config.epsilon_external);
        out.max_gap = std::max(out.max_gap, gap);
    }
    return out;
}

ExternalCoherenceReport external_coherence_check(const Scenario& scenario, const MeasureConfig& config,
                                                 const ExpectationOptions& options) {
    return external_coherence_check(build_tradeoff_ledger(scenario, config, ReaderKind::Gullible, options), config);
}

MeasureConfig derive_thresholds(const TradeoffLedger& ledger, double log_floor) {
    MeasureConfig c;
    c.log_floor = log_floor;
    const double uniform_level = std::log(static_cast<double>(ledger.roster_size()));
    for (const auto& r : ledger.rows()) {
        c.epsilon_external = std::max(
            c.epsilon_external, std::abs(r.ceff_of(ReaderKind::Brilliant) - r.ceff_of(ReaderKind::KnowItAll)));
        c.delta_surprise = std::max(c.delta_surprise, r.expected_uninformedness - uniform_level);
        c.epsilon_surprise = std::max(c.epsilon_surprise, uniform_level - r.expected_uninformedness);
        c.epsilon_intel = std::max(c.epsilon_intel, r.delta_intel);
    }
    return c;
}

std::string TradeoffReport::summary() const {
    std::ostringstream s;
    s << "bound-1 checked at " << bound1_checked << " step(s), bound-2 at " << bound2_checked << " step(s); ";
    if (violations.empty()) {
        s << "no violations";
    } else {
        s << violations.size() << " violation(s), assumptions inconsistent:";
        for (const auto& v : violations)
            s << " [step " << v.step << " bound-" << v.bound << ": " << format_double(v.lhs) << " > "
              << format_double(v.rhs) << "]";
    }
    return s.str();
}

TradeoffReport verify_tradeoff(const TradeoffLedger& ledger, const MeasureConfig& config) {
    config.validate();
    TradeoffReport report;
    for (const auto& row : ledger.rows()) {
        const auto bands = classify_surprise(row.expected_uninformedness, ledger.roster_size(), config);
        if (bands.strong) {
            ++report.bound1_checked;
            const double lhs = config.delta_surprise - row.delta_intel;
            const double rhs = static_cast<double>(row.step) * config.epsilon_external;
            if (lhs > rhs + kBoundSlack) report.violations.push_back({row.step, 1, lhs, rhs});
        }
        const bool intelligent = row.delta_intel <= config.epsilon_intel + kBoundSlack;
        if (bands.weak && intelligent) {
            ++report.bound2_checked;
            const double lhs = row.delta_in - config.epsilon_surprise;
            if (lhs > config.epsilon_intel + kBoundSlack)
                report.violations.push_back({row.step, 2, lhs, config.epsilon_intel});
        }
    }
    return report;
}

}  // namespace fairplay::measures
