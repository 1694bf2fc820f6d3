#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rentsim/data_model.hpp"

namespace rentsim {

struct ExplorationImputation;

/// Annual nominal rate as a fraction. Must be finite and > -1.
class Rate {
public:
    constexpr Rate() = default;
    explicit Rate(double value);

    constexpr double value() const noexcept { return value_; }
    /// (1 + r)^periods
    double growth(double periods) const;
    /// 1 / (1 + r)^periods
    double discount(double periods) const { return 1.0 / growth(periods); }

    auto operator<=>(const Rate&) const = default;

private:
    double value_ = 0.0;
};

struct CashFlow {
    int year = 0;
    Money amount = 0.0;

    bool operator==(const CashFlow&) const = default;
};

/// Year-stamped flows discounted back to `base_year` (t = 0).
struct CashFlowSeries {
    int base_year = 0;
    std::vector<CashFlow> flows;

    /// Throws InvalidArgument unless years strictly increase and start at or after base_year.
    void check() const;
    Money total() const;
};

struct InitialInvestment {
    Money extraction = 0.0;   ///< first-year paid-in capital
    Money exploration = 0.0;  ///< imputed, capitalized to the opening year
    Money total = 0.0;
    std::vector<std::string> warnings;
};

/// risk-free + beta * equity premium + country risk
Rate discount_rate(const DiscountSpec& spec);

/// Project cash flow of one year: pre-tax result plus D&A, less paid-in
/// capital increase, taxes, fixed-asset additions and net loan payments.
Money annual_cash_flow(const MineYearRecord& record);

InitialInvestment initial_investment(const MineDataset& mine, const ExplorationImputation& exploration);

/// End-of-year convention: sum of flow / (1+r)^(year - base_year).
Money present_value(const CashFlowSeries& series, Rate r);

/// Flows of every record dated at or after the opening year, based at the opening year.
CashFlowSeries mine_cash_flows(const MineDataset& mine);

}  // namespace rentsim
