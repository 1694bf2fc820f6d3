#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rentsim {

/// Money amounts are millions of nominal USD throughout the engine.
using Money = double;

inline constexpr int kEarliestRecordYear = 1984;
inline constexpr int kLatestRecordYear = 2012;
inline constexpr double kDefaultFundRate = 0.0507;
/// price (USD/t) * tonnes / kUsdPerMillion = million USD
inline constexpr double kUsdPerMillion = 1.0e6;

/// One mine-year of financial statement line items plus physical output.
///
/// Rows that precede the first audited statement carry only tonnages
/// (`reported == false`); their money fields are zero until the
/// reconstruction module fills them.
struct MineYearRecord {
    int year = 0;
    Money revenue = 0.0;
    Money operating_cost = 0.0;
    Money admin_sales_expense = 0.0;
    Money pretax_result = 0.0;
    Money depreciation_amortization = 0.0;
    Money capital_paid_increase = 0.0;
    Money taxes_paid = 0.0;
    Money fixed_asset_additions = 0.0;
    Money net_loan_payments = 0.0;
    double production = 0.0;  ///< tonnes of fine copper
    double exports = 0.0;     ///< tonnes of fine copper
    bool reported = true;        ///< financial line items come from a statement
    bool taxes_supplied = false; ///< physical-only row still carries a tax figure
    bool reconstructed = false;

    bool operator==(const MineYearRecord&) const = default;
};

struct MineDataset {
    std::string mine_id;
    int opening_year = 0;
    int first_reported_year = 0;
    Money capital_paid_first_year = 0.0;
    bool escondida_tax_rule = false;
    std::vector<MineYearRecord> records;
    /// Diagnostics raised while loading; not part of the dataset's identity.
    std::vector<std::string> load_warnings;

    const MineYearRecord* find(int year) const;
    /// Arithmetic mean of annual production over every row.
    double mean_production() const;

    bool operator==(const MineDataset& other) const {
        return mine_id == other.mine_id && opening_year == other.opening_year &&
               first_reported_year == other.first_reported_year &&
               capital_paid_first_year == other.capital_paid_first_year &&
               escondida_tax_rule == other.escondida_tax_rule && records == other.records;
    }
};

struct MarketYear {
    int year = 0;
    double copper_price = 0.0;  ///< USD per tonne
    Money gdp = 0.0;
    double exploration_pct_gdp = 0.0;  ///< fraction, e.g. 0.004

    bool operator==(const MarketYear&) const = default;
};

struct MarketSeries {
    std::map<int, MarketYear> years;
    double fund_rate = kDefaultFundRate;

    const MarketYear* find(int year) const;
    /// Throws CoverageError when `year` is missing.
    const MarketYear& at(int year) const;
};

struct DiscountSpec {
    double risk_free = 0.0;
    double beta = 0.0;
    double equity_premium = 0.0;
    double country_risk = 0.0;
    std::string label;

    static DiscountSpec base();
    static DiscountSpec conservative();
};

struct ValidationIssue {
    std::string locator;  ///< e.g. "mine:escondida/year:1997"
    std::string rule;
    std::string message;

    bool operator==(const ValidationIssue&) const = default;
    auto operator<=>(const ValidationIssue&) const = default;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;

    bool ok() const noexcept { return errors.empty(); }
    bool operator==(const ValidationReport&) const = default;
};

std::ostream& operator<<(std::ostream& os, const ValidationReport& report);

// Mine files: optional "# key=value" metadata lines, then the header row
// below, then one comma-separated row per year. Money columns may be left
// blank on rows that precede the first audited statement.
inline constexpr const char* kMineHeader =
    "year,revenue,operating_cost,admin_sales_expense,pretax_result,dep_amort,"
    "capital_paid_increase,taxes_paid,fixed_asset_additions,net_loan_payments,"
    "production_t,exports_t";
inline constexpr const char* kMarketHeader = "year,copper_price_usd_per_t,gdp_usd_m,exploration_pct_gdp";

MineDataset parse_mine_dataset(std::istream& in, const std::string& source_name);
MineDataset load_mine_dataset(const std::filesystem::path& path);
void write_mine_dataset(std::ostream& out, const MineDataset& mine);

/// Every `*.csv` in `dir`, sorted by mine_id.
std::vector<MineDataset> load_mine_directory(const std::filesystem::path& dir);

MarketSeries parse_market_series(std::istream& in, const std::string& source_name);
MarketSeries load_market_series(const std::filesystem::path& path);
void write_market_series(std::ostream& out, const MarketSeries& market);

ValidationReport validate_mine(const MineDataset& mine);
ValidationReport validate_market(const MarketSeries& market);
/// Combined check; the analysis window is the mine's record span.
ValidationReport validate_dataset(const MineDataset& mine, const MarketSeries& market);

}  // namespace rentsim
