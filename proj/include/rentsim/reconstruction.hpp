#pragma once

#include <map>
#include <string>
#include <vector>

#include "rentsim/data_model.hpp"
#include "rentsim/valuation.hpp"

namespace rentsim {

struct YearRange {
    int first = 2001;
    int last = 2005;

    bool contains(int year) const noexcept { return year >= first && year <= last; }
};

/// Averages over the first audited years, used to backfill earlier ones.
struct BaselineStats {
    double avg_unit_cost = 0.0;  ///< million USD per tonne
    double gav_ratio = 0.0;      ///< admin & sales expense / operating cost
    Money avg_nonoperating = 0.0;
    Money avg_fixed_asset_additions = 0.0;
    Money avg_dep_amort = 0.0;
    Money avg_net_loan_payments = 0.0;
    YearRange baseline_years;
    int usable_years = 0;
};

/// One line per reconstructed field: which rule, which inputs, what result.
struct AuditEntry {
    std::string mine_id;
    int year = 0;
    std::string field;
    std::string rule;
    std::string inputs;
    Money output = 0.0;
};

using AuditLog = std::vector<AuditEntry>;

std::string format_audit_line(const AuditEntry& entry);

/// Throws BaselineUnavailable if no reported year inside `window` has production > 0.
BaselineStats compute_baseline_stats(const std::vector<MineYearRecord>& records, YearRange window = {});

/// Rebuilds the financial line items of a pre-statement year from its
/// tonnages, the market price and the baseline averages.
MineYearRecord reconstruct_year(const MineDataset& mine, int year, const MarketSeries& market,
                                const BaselineStats& baseline, AuditLog* audit = nullptr);

/// Replaces every physical-only row before first_reported_year.
MineDataset reconstruct_mine(const MineDataset& mine, const MarketSeries& market, YearRange window = {},
                             AuditLog* audit = nullptr);

struct ExplorationConfig {
    YearRange spend_window{1984, 1999};
    int cohort_window_years = 5;
    double private_share = 2.0 / 3.0;
};

struct MineExploration {
    /// Pre-capitalization allocation per spend year.
    std::map<int, Money> allocations;
    /// Sum of allocations grown to the opening year.
    Money capitalized = 0.0;
};

struct ExplorationImputation {
    std::map<std::string, MineExploration> per_mine;
    std::map<int, Money> private_spend;   ///< by spend year
    std::vector<int> unallocated_years;   ///< spend years with no eligible mine
    Money total_private_spend = 0.0;
    Money total_allocated = 0.0;          ///< pre-capitalization
    int cohort_window_years = 5;
    std::vector<std::string> warnings;

    /// Capitalized exploration investment for `mine_id` (0 if absent).
    Money allocated(const std::string& mine_id) const;
    bool has(const std::string& mine_id) const { return per_mine.count(mine_id) != 0; }
};

/// Prorates private exploration spend among mines within the cohort window
/// of their opening year, by mean production, then capitalizes each share
/// to the mine's opening year at `r`.
ExplorationImputation impute_exploration(const MarketSeries& market, const std::vector<MineDataset>& cohort,
                                         Rate r, const ExplorationConfig& config = {});

/// Exploration investment charged to a deposit: per-campaign spend times the
/// inverse discovery probability (total / successful campaigns).
Money exploration_investment(Money per_campaign_spend, int successful_campaigns, int total_campaigns);

}  // namespace rentsim
