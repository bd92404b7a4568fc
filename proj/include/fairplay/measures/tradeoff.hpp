#pragma once

// Per-step coherence / intelligence / surprise bookkeeping and the two
// tradeoff bounds evaluated on it.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairplay/measures/enumeration.hpp"
#include "fairplay/measures/uninformedness.hpp"

namespace fairplay::measures {

// Absolute slack used when comparing bound terms computed in floating point.
inline constexpr double kBoundSlack = 1e-9;

struct TradeoffRow {
    std::size_t step = 0;                 // i, 1-based
    std::array<double, 3> ceff{};         // indexed by ReaderKind
    double delta_in = 0.0;                // sum_{j<=i} C-Eff_brilliant(j)
    double delta_intel = 0.0;             // sum_{j<=i} C-Eff_brilliant(j) - C-Eff_assessed(j)
    double expected_uninformedness = 0.0; // E[H(M_inf(i); M(i))] for the assessed reader
    SurpriseBands surprise;
    double bound1_lhs = 0.0, bound1_rhs = 0.0;
    double bound2_lhs = 0.0, bound2_rhs = 0.0;

    double ceff_of(ReaderKind kind) const { return ceff[static_cast<std::size_t>(kind)]; }
};

class TradeoffLedger {
public:
    // Rows must be numbered 1..N contiguously. Surprise bands and bound terms
    // are recomputed from delta_in, delta_intel and expected_uninformedness.
    TradeoffLedger(std::vector<TradeoffRow> rows, std::size_t roster_size, ReaderKind assessed,
                   const MeasureConfig& config);

    // From per-step C-Eff series (length N, index 0 = step 1) and the assessed
    // reader's expected uninformedness (length N + 1, index = step).
    static TradeoffLedger from_series(const std::array<std::vector<double>, 3>& ceff,
                                      const std::vector<double>& assessed_uninformedness, std::size_t roster_size,
                                      ReaderKind assessed, const MeasureConfig& config);

    const std::vector<TradeoffRow>& rows() const noexcept { return rows_; }
    const TradeoffRow& row(std::size_t step) const;  // 1-based
    std::size_t num_steps() const noexcept { return rows_.size(); }
    std::size_t roster_size() const noexcept { return roster_size_; }
    ReaderKind assessed() const noexcept { return assessed_; }
    const MeasureConfig& config() const noexcept { return config_; }

    void write_csv(std::ostream& out) const;

private:
    std::vector<TradeoffRow> rows_;
    std::size_t roster_size_;
    ReaderKind assessed_;
    MeasureConfig config_;
};

struct LedgerBuildInfo {
    ExpectationMode mode_used = ExpectationMode::Exact;
    std::size_t samples_used = 0;
};

// Evaluates all three idealized readers on the scenario; `assessed` is the
// reader whose surprise and intelligence are tracked (normally the gullible one).
TradeoffLedger build_tradeoff_ledger(const Scenario& scenario, const MeasureConfig& config,
                                     ReaderKind assessed = ReaderKind::Gullible,
                                     const ExpectationOptions& options = {}, LedgerBuildInfo* info = nullptr);

// delta_in(i); i = 0 gives 0. Throws std::out_of_range past the ledger.
double internal_coherence(const TradeoffLedger& ledger, std::size_t i);
// sum_{j=1..i} [C-Eff_brilliant(j) - C-Eff_M(j)]; i = 0 gives 0.
double intelligence_gap(const TradeoffLedger& ledger, ReaderKind reader, std::size_t i);

struct ExternalCoherenceReport {
    std::vector<double> gaps;   // |C-Eff_brilliant(i) - C-Eff_knowitall(i)|, index 0 = step 1
    std::vector<bool> passed;   // gap <= eps_ex
    double max_gap = 0.0;
    bool all_passed() const;
};

ExternalCoherenceReport external_coherence_check(const Scenario& scenario, const MeasureConfig& config,
                                                 const ExpectationOptions& options = {});
ExternalCoherenceReport external_coherence_check(const TradeoffLedger& ledger, const MeasureConfig& config);

// Thresholds read off a ledger: eps_ex is the largest brilliant/know-it-all
// gap, delta_surprise the largest excess of the assessed reader's expected
// uninformedness over ln|Y|, eps_surprise the largest shortfall below it, and
// eps_intel the largest delta_intel (all clipped at 0).
MeasureConfig derive_thresholds(const TradeoffLedger& ledger, double log_floor = 1e-9);

struct BoundViolation {
    std::size_t step;
    int bound;   // 1 or 2
    double lhs;
    double rhs;
};

struct TradeoffReport {
    std::size_t bound1_checked = 0;
    std::size_t bound2_checked = 0;
    std::vector<BoundViolation> violations;
    bool consistent() const noexcept { return violations.empty(); }
    std::string summary() const;
};

// Bound 1 is checked at every strongly surprised step; bound 2 at every step
// where the assessed reader is weakly surprised and intelligent
// (delta_intel(i) <= eps_intel). A violation means the configuration's
// assumptions (external coherence, intelligence, surprise) cannot all hold.
TradeoffReport verify_tradeoff(const TradeoffLedger& ledger, const MeasureConfig& config);

}  // namespace fairplay::measures
