#include "rentsim/rent_analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "rentsim/errors.hpp"

namespace rentsim {

namespace {

std::string money_text(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

RvpSeries rvp_series(const CashFlowSeries& flows, const InitialInvestment& investment, Rate r) {
    flows.check();
    if (!(investment.total > 0.0)) throw InvalidArgument("initial investment must be > 0");

    RvpSeries out;
    out.rate = r;
    out.initial_investment = investment.total;
    out.points.reserve(flows.flows.size());
    Money cumulative = 0.0;
    for (const auto& f : flows.flows) {
        cumulative += f.amount * r.discount(f.year - flows.base_year);
        out.points.push_back({f.year, cumulative - investment.total});
    }
    out.momento_x = momento_x(out);
    out.rent_pv = out.points.empty() ? 0.0 : std::max(out.points.back().rvp, 0.0);
    return out;
}

std::optional<int> momento_x(const RvpSeries& series) {
    for (const auto& p : series.points) {
        if (p.rvp > kMomentoTolerance) return p.year;
    }
    return std::nullopt;
}

Money rent_forward_value(const CashFlowSeries& flows, std::optional<int> x, Rate fund_rate, int valuation_year) {
    if (!x) return 0.0;
    if (!flows.flows.empty() && valuation_year < flows.flows.back().year) {
        throw InvalidArgument("valuation year " + std::to_string(valuation_year) + " precedes the last flow year");
    }
    Money total = 0.0;
    for (const auto& f : flows.flows) {
        if (f.year > *x) total += f.amount * fund_rate.growth(valuation_year - f.year);
    }
    return total;
}

SensitivityReport sensitivity_report(const std::vector<MineDataset>& mines, const MarketSeries& market,
                                     const std::vector<LabeledRate>& rates, const AnalysisOptions& options) {
    SensitivityReport report;
    for (const auto& lr : rates) {
        report.rate_labels.push_back(lr.label);
        report.rates.push_back(lr.rate);
    }

    std::vector<MineDataset> rebuilt;
    rebuilt.reserve(mines.size());
    for (const auto& mine : mines) rebuilt.push_back(reconstruct_mine(mine, market, options.baseline_window, &report.audit));

    const Rate fund(market.fund_rate);
    report.rows.resize(rebuilt.size());
    for (std::size_t i = 0; i < rebuilt.size(); ++i) report.rows[i].mine_id = rebuilt[i].mine_id;

    for (const auto& lr : rates) {
        // Exploration spend is capitalized at the scenario's own rate.
        const ExplorationImputation exploration = impute_exploration(market, rebuilt, lr.rate, options.exploration);
        if (&lr == &rates.front()) {
            report.warnings.insert(report.warnings.end(), exploration.warnings.begin(), exploration.warnings.end());
        }
        for (std::size_t i = 0; i < rebuilt.size(); ++i) {
            const MineDataset& mine = rebuilt[i];
            MineRateResult result;
            result.rate_label = lr.label;
            result.rate = lr.rate;
            result.investment = initial_investment(mine, exploration);
            const CashFlowSeries flows = mine_cash_flows(mine);
            result.series = rvp_series(flows, result.investment, lr.rate);
            result.series.mine_id = mine.mine_id;
            result.series.valuation_year = options.valuation_year;
            result.series.rent_forward =
                rent_forward_value(flows, result.series.momento_x, fund, options.valuation_year);
            if (!result.series.momento_x) result.series.notes.emplace_back("no rent appropriated");
            report.rows[i].by_rate.push_back(std::move(result));
        }
    }
    return report;
}

SensitivityReport sensitivity_report(const std::vector<MineDataset>& mines, const MarketSeries& market,
                                     const DiscountSpec& first, const DiscountSpec& second,
                                     const AnalysisOptions& options) {
    std::vector<LabeledRate> rates{{first.label.empty() ? "first" : first.label, discount_rate(first)},
                                   {second.label.empty() ? "second" : second.label, discount_rate(second)}};
    return sensitivity_report(mines, market, rates, options);
}

void write_summary_csv(std::ostream& out, const SensitivityReport& report) {
    out << "mine";
    for (const auto& label : report.rate_labels) out << ",momento_x_" << label;
    for (const auto& label : report.rate_labels) out << ",rent_pv_t0_" << label;
    for (const auto& label : report.rate_labels) out << ",rent_forward_" << label;
    out << '\n';
    for (const auto& row : report.rows) {
        out << row.mine_id;
        for (const auto& r : row.by_rate) out << ',' << (r.series.momento_x ? std::to_string(*r.series.momento_x) : "-");
        for (const auto& r : row.by_rate) out << ',' << (r.series.momento_x ? money_text(r.series.rent_pv) : "-");
        for (const auto& r : row.by_rate) out << ',' << (r.series.momento_x ? money_text(r.series.rent_forward) : "-");
        out << '\n';
    }
}

void write_summary_json(std::ostream& out, const SensitivityReport& report) {
    nlohmann::json doc;
    doc["rates"] = nlohmann::json::array();
    for (std::size_t i = 0; i < report.rates.size(); ++i) {
        doc["rates"].push_back({{"label", report.rate_labels[i]}, {"value", report.rates[i].value()}});
    }
    doc["mines"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json mine{{"mine_id", row.mine_id}};
        mine["results"] = nlohmann::json::array();
        for (const auto& r : row.by_rate) {
            nlohmann::json entry{{"rate_label", r.rate_label},
                                 {"rate", r.rate.value()},
                                 {"initial_investment", r.investment.total},
                                 {"extraction_investment", r.investment.extraction},
                                 {"exploration_investment", r.investment.exploration},
                                 {"rent_pv_t0", r.series.rent_pv},
                                 {"rent_forward", r.series.rent_forward},
                                 {"valuation_year", r.series.valuation_year}};
            entry["momento_x"] = r.series.momento_x ? nlohmann::json(*r.series.momento_x) : nlohmann::json(nullptr);
            nlohmann::json points = nlohmann::json::array();
            for (const auto& p : r.series.points) points.push_back({p.year, p.rvp});
            entry["rvp"] = std::move(points);
            mine["results"].push_back(std::move(entry));
        }
        doc["mines"].push_back(std::move(mine));
    }
    out << doc.dump(2) << '\n';
}

void write_rvp_plot_data(std::ostream& out, const RvpSeries& series) {
    out << "year,rvp\n";
    for (const auto& p : series.points) out << p.year << ',' << money_text(p.rvp) << '\n';
}

}  // namespace rentsim
