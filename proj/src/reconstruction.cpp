#include "rentsim/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rentsim/errors.hpp"

namespace rentsim {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

std::string format_audit_line(const AuditEntry& e) {
    return e.mine_id + "," + std::to_string(e.year) + "," + e.field + ",\"" + e.rule + "\",\"" + e.inputs + "\"," +
           fmt(e.output);
}

BaselineStats compute_baseline_stats(const std::vector<MineYearRecord>& records, YearRange window) {
    BaselineStats stats;
    stats.baseline_years = window;

    double unit_cost_sum = 0.0, gav_sum = 0.0;
    int unit_cost_n = 0, gav_n = 0, n = 0;
    for (const auto& r : records) {
        if (!r.reported || r.reconstructed || !window.contains(r.year)) continue;
        ++n;
        if (r.production > 0.0) {
            unit_cost_sum += r.operating_cost / r.production;
            ++unit_cost_n;
        }
        if (r.operating_cost > 0.0) {
            gav_sum += r.admin_sales_expense / r.operating_cost;
            ++gav_n;
        }
        // Non-operating result: what the pre-tax result carries beyond the operating result.
        stats.avg_nonoperating += r.pretax_result - (r.revenue - r.operating_cost - r.admin_sales_expense);
        stats.avg_fixed_asset_additions += r.fixed_asset_additions;
        stats.avg_dep_amort += r.depreciation_amortization;
        stats.avg_net_loan_payments += r.net_loan_payments;
    }
    if (unit_cost_n == 0) {
        throw BaselineUnavailable("no reported year with production > 0 in baseline window " +
                                  std::to_string(window.first) + "-" + std::to_string(window.last));
    }
    stats.usable_years = n;
    stats.avg_unit_cost = unit_cost_sum / unit_cost_n;
    stats.gav_ratio = gav_n > 0 ? gav_sum / gav_n : 0.0;
    stats.avg_nonoperating /= n;
    stats.avg_fixed_asset_additions /= n;
    stats.avg_dep_amort /= n;
    stats.avg_net_loan_payments /= n;
    return stats;
}

MineYearRecord reconstruct_year(const MineDataset& mine, int year, const MarketSeries& market,
                                const BaselineStats& baseline, AuditLog* audit) {
    if (year >= mine.first_reported_year) {
        throw ReconstructionRefused("year " + std::to_string(year) + " of mine " + mine.mine_id +
                                    " is not before the first reported year " +
                                    std::to_string(mine.first_reported_year));
    }
    const MarketYear& price_year = market.at(year);
    const MineYearRecord* physical = mine.find(year);
    if (!physical) {
        throw InvalidArgument("mine " + mine.mine_id + " has no production/exports row for year " +
                              std::to_string(year));
    }

    MineYearRecord out;
    out.year = year;
    out.production = physical->production;
    out.exports = physical->exports;
    out.reported = false;
    out.reconstructed = true;

    const double price = price_year.copper_price;
    const Money by_production = price * out.production / kUsdPerMillion;
    const Money by_exports = price * out.exports / kUsdPerMillion;
    out.revenue = std::min(by_production, by_exports);
    out.operating_cost = baseline.avg_unit_cost * out.production;
    out.admin_sales_expense = baseline.gav_ratio * out.operating_cost;
    const Money operating_result = out.revenue - out.operating_cost - out.admin_sales_expense;
    out.pretax_result = operating_result + baseline.avg_nonoperating;
    out.depreciation_amortization = baseline.avg_dep_amort;
    out.fixed_asset_additions = baseline.avg_fixed_asset_additions;
    out.net_loan_payments = baseline.avg_net_loan_payments;
    out.capital_paid_increase = 0.0;
    const bool keep_taxes = mine.escondida_tax_rule && physical->taxes_supplied;
    out.taxes_paid = keep_taxes ? physical->taxes_paid : 0.0;

    if (audit) {
        auto log = [&](const char* field, const char* rule, std::string inputs, Money value) {
            audit->push_back({mine.mine_id, year, field, rule, std::move(inputs), value});
        };
        log("revenue", "min(price*production, price*exports)",
            "price=" + fmt(price) + ";production=" + fmt(out.production) + ";exports=" + fmt(out.exports),
            out.revenue);
        log("operating_cost", "baseline unit cost * production",
            "unit_cost=" + fmt(baseline.avg_unit_cost) + ";production=" + fmt(out.production), out.operating_cost);
        log("admin_sales_expense", "baseline gav ratio * operating cost",
            "gav_ratio=" + fmt(baseline.gav_ratio) + ";operating_cost=" + fmt(out.operating_cost),
            out.admin_sales_expense);
        log("pretax_result", "operating result + baseline non-operating result",
            "operating_result=" + fmt(operating_result) + ";nonoperating=" + fmt(baseline.avg_nonoperating),
            out.pretax_result);
        log("dep_amort", "baseline average", "", out.depreciation_amortization);
        log("fixed_asset_additions", "baseline average", "", out.fixed_asset_additions);
        log("net_loan_payments", "baseline average", "", out.net_loan_payments);
        log("capital_paid_increase", "zero before first statement", "", out.capital_paid_increase);
        log("taxes_paid", keep_taxes ? "supplied figure kept" : "assumed zero",
            std::string("escondida_tax_rule=") + (mine.escondida_tax_rule ? "true" : "false"), out.taxes_paid);
    }
    return out;
}

MineDataset reconstruct_mine(const MineDataset& mine, const MarketSeries& market, YearRange window,
                             AuditLog* audit) {
    MineDataset out = mine;
    const bool needs_work = std::any_of(mine.records.begin(), mine.records.end(), [&](const MineYearRecord& r) {
        return !r.reported && r.year < mine.first_reported_year;
    });
    if (!needs_work) return out;

    const BaselineStats baseline = compute_baseline_stats(mine.records, window);
    for (auto& rec : out.records) {
        if (rec.reported || rec.year >= mine.first_reported_year) continue;
        rec = reconstruct_year(mine, rec.year, market, baseline, audit);
    }
    return out;
}

Money ExplorationImputation::allocated(const std::string& mine_id) const {
    auto it = per_mine.find(mine_id);
    return it == per_mine.end() ? 0.0 : it->second.capitalized;
}

ExplorationImputation impute_exploration(const MarketSeries& market, const std::vector<MineDataset>& cohort,
                                         Rate r, const ExplorationConfig& config) {
    ExplorationImputation out;
    out.cohort_window_years = config.cohort_window_years;
    for (const auto& mine : cohort) out.per_mine[mine.mine_id];

    for (int t = config.spend_window.first; t <= config.spend_window.last; ++t) {
        const MarketYear& m = market.at(t);
        const Money national = m.gdp * m.exploration_pct_gdp;
        const Money private_spend = config.private_share * national;
        out.private_spend[t] = private_spend;
        out.total_private_spend += private_spend;

        double production_sum = 0.0;
        std::vector<const MineDataset*> eligible;
        for (const auto& mine : cohort) {
            if (mine.opening_year - config.cohort_window_years <= t && t <= mine.opening_year) {
                eligible.push_back(&mine);
                production_sum += mine.mean_production();
            }
        }
        if (eligible.empty() || !(production_sum > 0.0)) {
            out.unallocated_years.push_back(t);
            out.warnings.push_back("exploration spend of " + std::to_string(t) + " left unallocated: no eligible mine");
            continue;
        }
        for (const auto* mine : eligible) {
            const Money share = private_spend * (mine->mean_production() / production_sum);
            auto& entry = out.per_mine[mine->mine_id];
            entry.allocations[t] += share;
            entry.capitalized += share * r.growth(mine->opening_year - t);
            out.total_allocated += share;
        }
    }
    return out;
}

Money exploration_investment(Money per_campaign_spend, int successful_campaigns, int total_campaigns) {
    if (successful_campaigns <= 0 || total_campaigns < successful_campaigns) {
        throw InvalidArgument("need 0 < successful campaigns <= total campaigns");
    }
    const double inverse_probability = static_cast<double>(total_campaigns) / successful_campaigns;
    return per_campaign_spend * inverse_probability;
}

}  // namespace rentsim
