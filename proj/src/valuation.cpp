#include "rentsim/valuation.hpp"

#include <cmath>

#include "rentsim/errors.hpp"
#include "rentsim/reconstruction.hpp"

namespace rentsim {

Rate::Rate(double value) : value_(value) {
    if (!std::isfinite(value) || value <= -1.0) {
        throw InvalidArgument("rate must be finite and > -1, got " + std::to_string(value));
    }
}

double Rate::growth(double periods) const { return std::pow(1.0 + value_, periods); }

void CashFlowSeries::check() const {
    for (std::size_t i = 0; i < flows.size(); ++i) {
        if (flows[i].year < base_year) throw InvalidArgument("cash flow dated before base year");
        if (i > 0 && flows[i].year <= flows[i - 1].year) throw InvalidArgument("cash flow years must strictly increase");
    }
}

Money CashFlowSeries::total() const {
    Money sum = 0.0;
    for (const auto& f : flows) sum += f.amount;
    return sum;
}

Rate discount_rate(const DiscountSpec& spec) {
    if (spec.risk_free < 0.0 || spec.beta < 0.0 || spec.equity_premium < 0.0 || spec.country_risk < 0.0) {
        throw InvalidArgument("discount spec components must be nonnegative");
    }
    return Rate(spec.risk_free + spec.beta * spec.equity_premium + spec.country_risk);
}

Money annual_cash_flow(const MineYearRecord& r) {
    return r.pretax_result + r.depreciation_amortization - r.capital_paid_increase - r.taxes_paid -
           r.fixed_asset_additions - r.net_loan_payments;
}

InitialInvestment initial_investment(const MineDataset& mine, const ExplorationImputation& exploration) {
    InitialInvestment out;
    out.extraction = mine.capital_paid_first_year;
    if (exploration.has(mine.mine_id)) {
        out.exploration = exploration.allocated(mine.mine_id);
    } else {
        out.warnings.push_back("no exploration imputation for mine " + mine.mine_id + "; treated as 0");
    }
    out.total = out.extraction + out.exploration;
    if (!(out.total > 0.0)) throw InvalidArgument("initial investment must be > 0 for mine " + mine.mine_id);
    return out;
}

Money present_value(const CashFlowSeries& series, Rate r) {
    Money pv = 0.0;
    for (const auto& f : series.flows) pv += f.amount * r.discount(f.year - series.base_year);
    return pv;
}

CashFlowSeries mine_cash_flows(const MineDataset& mine) {
    CashFlowSeries series;
    series.base_year = mine.opening_year;
    for (const auto& rec : mine.records) {
        if (rec.year < mine.opening_year) continue;
        series.flows.push_back({rec.year, annual_cash_flow(rec)});
    }
    return series;
}

}  // namespace rentsim
