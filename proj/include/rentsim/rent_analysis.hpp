#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rentsim/data_model.hpp"
#include "rentsim/reconstruction.hpp"
#include "rentsim/valuation.hpp"

namespace rentsim {

inline constexpr double kMomentoTolerance = 1e-9;
inline constexpr int kDefaultValuationYear = 2012;

struct RvpPoint {
    int year = 0;
    Money rvp = 0.0;
};

/// Present-value rent trajectory: cumulative discounted flow less I0.
struct RvpSeries {
    std::string mine_id;
    Rate rate;
    Money initial_investment = 0.0;
    std::vector<RvpPoint> points;
    std::optional<int> momento_x;
    Money rent_pv = 0.0;       ///< max(final rvp, 0), at the mine's t = 0
    Money rent_forward = 0.0;  ///< compounded to valuation_year
    int valuation_year = kDefaultValuationYear;
    std::vector<std::string> notes;
};

RvpSeries rvp_series(const CashFlowSeries& flows, const InitialInvestment& investment, Rate r);

/// First year whose rvp exceeds the tolerance; the payback year.
std::optional<int> momento_x(const RvpSeries& series);

/// Nominal flows dated strictly after `x`, each compounded at the fund rate to the valuation year.
Money rent_forward_value(const CashFlowSeries& flows, std::optional<int> x, Rate fund_rate, int valuation_year);

/// One mine evaluated under one discount rate.
struct MineRateResult {
    std::string rate_label;
    Rate rate;
    InitialInvestment investment;
    RvpSeries series;
};

struct SensitivityRow {
    std::string mine_id;
    std::vector<MineRateResult> by_rate;
};

struct SensitivityReport {
    std::vector<std::string> rate_labels;
    std::vector<Rate> rates;
    std::vector<SensitivityRow> rows;
    AuditLog audit;
    std::vector<std::string> warnings;
};

struct LabeledRate {
    std::string label;
    Rate rate;
};

struct AnalysisOptions {
    int valuation_year = kDefaultValuationYear;
    YearRange baseline_window{};
    ExplorationConfig exploration{};
};

/// Runs reconstruction, exploration imputation, I0 and the RVP trajectory for
/// every mine under every rate.
SensitivityReport sensitivity_report(const std::vector<MineDataset>& mines, const MarketSeries& market,
                                     const std::vector<LabeledRate>& rates, const AnalysisOptions& options = {});

SensitivityReport sensitivity_report(const std::vector<MineDataset>& mines, const MarketSeries& market,
                                     const DiscountSpec& first, const DiscountSpec& second,
                                     const AnalysisOptions& options = {});

/// Summary table: mine, then momento x / rent_pv / rent_forward per rate.
/// A missing momento x prints as "-".
void write_summary_csv(std::ostream& out, const SensitivityReport& report);
void write_summary_json(std::ostream& out, const SensitivityReport& report);
/// Two columns: year, rvp.
void write_rvp_plot_data(std::ostream& out, const RvpSeries& series);

}  // namespace rentsim
