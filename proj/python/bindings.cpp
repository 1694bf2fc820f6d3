#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "rentsim/cli.hpp"
#include "rentsim/concession.hpp"
#include "rentsim/data_model.hpp"
#include "rentsim/errors.hpp"
#include "rentsim/reconstruction.hpp"
#include "rentsim/rent_analysis.hpp"
#include "rentsim/valuation.hpp"

namespace py = pybind11;
using namespace rentsim;

namespace {

using FlowList = std::vector<std::pair<int, double>>;

CashFlowSeries to_series(const FlowList& flows, int base_year) {
    CashFlowSeries s{base_year, {}};
    for (const auto& [year, amount] : flows) s.flows.push_back({year, amount});
    s.check();
    return s;
}

py::dict series_dict(const RvpSeries& s) {
    py::list points;
    for (const auto& p : s.points) points.append(py::make_tuple(p.year, p.rvp));
    py::dict d;
    d["mine_id"] = s.mine_id;
    d["rate"] = s.rate.value();
    d["initial_investment"] = s.initial_investment;
    d["points"] = points;
    d["momento_x"] = s.momento_x;
    d["rent_pv"] = s.rent_pv;
    d["rent_forward"] = s.rent_forward;
    d["valuation_year"] = s.valuation_year;
    return d;
}

TaxPolicy make_tax(std::optional<double> fixed, std::optional<double> fraction,
                   std::optional<std::vector<double>> schedule) {
    const int given = fixed.has_value() + fraction.has_value() + schedule.has_value();
    if (given > 1) throw InvalidArgument("give at most one of tax_fixed, tax_fraction, tax_schedule");
    TaxPolicy t;
    if (fixed) t = {TaxPolicy::Kind::fixed, *fixed, {}};
    if (fraction) t = {TaxPolicy::Kind::fraction, *fraction, {}};
    if (schedule) t = {TaxPolicy::Kind::schedule, 0.0, *schedule};
    return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "rentsim native core";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "RentsimError", PyExc_RuntimeError);
    auto parse = py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<SchemaError>(m, "SchemaError", parse.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<CoverageError>(m, "CoverageError", base.ptr());
    py::register_exception<BaselineUnavailable>(m, "BaselineUnavailable", base.ptr());
    py::register_exception<ReconstructionRefused>(m, "ReconstructionRefused", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<AuctionFailed>(m, "AuctionFailed", base.ptr());
    py::register_exception<StateMachineViolation>(m, "StateMachineViolation", base.ptr());

    py::class_<DiscountSpec>(m, "DiscountSpec")
        .def(py::init([](double rf, double beta, double erp, double country, std::string label) {
                 return DiscountSpec{rf, beta, erp, country, std::move(label)};
             }),
             py::arg("risk_free"), py::arg("beta"), py::arg("equity_premium"), py::arg("country_risk"),
             py::arg("label") = "custom")
        .def_readwrite("risk_free", &DiscountSpec::risk_free)
        .def_readwrite("beta", &DiscountSpec::beta)
        .def_readwrite("equity_premium", &DiscountSpec::equity_premium)
        .def_readwrite("country_risk", &DiscountSpec::country_risk)
        .def_readwrite("label", &DiscountSpec::label)
        .def_static("base", &DiscountSpec::base)
        .def_static("conservative", &DiscountSpec::conservative);

    m.def("discount_rate", [](const DiscountSpec& s) { return discount_rate(s).value(); }, py::arg("spec"));

    py::class_<MineYearRecord>(m, "MineYearRecord")
        .def(py::init<>())
        .def_readwrite("year", &MineYearRecord::year)
        .def_readwrite("revenue", &MineYearRecord::revenue)
        .def_readwrite("operating_cost", &MineYearRecord::operating_cost)
        .def_readwrite("admin_sales_expense", &MineYearRecord::admin_sales_expense)
        .def_readwrite("pretax_result", &MineYearRecord::pretax_result)
        .def_readwrite("depreciation_amortization", &MineYearRecord::depreciation_amortization)
        .def_readwrite("capital_paid_increase", &MineYearRecord::capital_paid_increase)
        .def_readwrite("taxes_paid", &MineYearRecord::taxes_paid)
        .def_readwrite("fixed_asset_additions", &MineYearRecord::fixed_asset_additions)
        .def_readwrite("net_loan_payments", &MineYearRecord::net_loan_payments)
        .def_readwrite("production", &MineYearRecord::production)
        .def_readwrite("exports", &MineYearRecord::exports)
        .def_readwrite("reported", &MineYearRecord::reported)
        .def_readwrite("taxes_supplied", &MineYearRecord::taxes_supplied)
        .def_readwrite("reconstructed", &MineYearRecord::reconstructed);

    py::class_<MineDataset>(m, "MineDataset")
        .def(py::init<>())
        .def_readwrite("mine_id", &MineDataset::mine_id)
        .def_readwrite("opening_year", &MineDataset::opening_year)
        .def_readwrite("first_reported_year", &MineDataset::first_reported_year)
        .def_readwrite("capital_paid_first_year", &MineDataset::capital_paid_first_year)
        .def_readwrite("escondida_tax_rule", &MineDataset::escondida_tax_rule)
        .def_readwrite("records", &MineDataset::records)
        .def_readonly("load_warnings", &MineDataset::load_warnings)
        .def("mean_production", &MineDataset::mean_production)
        .def("to_csv", [](const MineDataset& d) {
            std::ostringstream out;
            write_mine_dataset(out, d);
            return out.str();
        })
        .def("__eq__", [](const MineDataset& a, const MineDataset& b) { return a == b; });

    py::class_<MarketSeries>(m, "MarketSeries")
        .def_readonly("fund_rate", &MarketSeries::fund_rate)
        .def("years", [](const MarketSeries& s) {
            std::vector<int> out;
            for (const auto& [y, _] : s.years) out.push_back(y);
            return out;
        })
        .def("copper_price", [](const MarketSeries& s, int y) { return s.at(y).copper_price; });

    m.def("load_mine_dataset", &load_mine_dataset, py::arg("path"));
    m.def("load_mine_directory", &load_mine_directory, py::arg("directory"));
    m.def("load_market_series", &load_market_series, py::arg("path"));
    m.def(
        "validate_dataset",
        [](const MineDataset& mine, const MarketSeries& market) {
            const auto report = validate_dataset(mine, market);
            auto issues = [](const std::vector<ValidationIssue>& v) {
                py::list out;
                for (const auto& i : v) out.append(py::make_tuple(i.locator, i.rule, i.message));
                return out;
            };
            py::dict d;
            d["errors"] = issues(report.errors);
            d["warnings"] = issues(report.warnings);
            return d;
        },
        py::arg("mine"), py::arg("market"));

    m.def("annual_cash_flow", &annual_cash_flow, py::arg("record"));
    m.def(
        "present_value",
        [](const FlowList& flows, int base_year, double r) { return present_value(to_series(flows, base_year), Rate(r)); },
        py::arg("flows"), py::arg("base_year"), py::arg("rate"));
    m.def(
        "rvp_series",
        [](const FlowList& flows, int base_year, double initial_investment, double r) {
            InitialInvestment inv;
            inv.extraction = initial_investment;
            inv.total = initial_investment;
            return series_dict(rvp_series(to_series(flows, base_year), inv, Rate(r)));
        },
        py::arg("flows"), py::arg("base_year"), py::arg("initial_investment"), py::arg("rate"));
    m.def(
        "momento_x",
        [](const FlowList& flows, int base_year, double initial_investment, double r) {
            InitialInvestment inv;
            inv.total = initial_investment;
            return rvp_series(to_series(flows, base_year), inv, Rate(r)).momento_x;
        },
        py::arg("flows"), py::arg("base_year"), py::arg("initial_investment"), py::arg("rate"));
    m.def(
        "rent_forward_value",
        [](const FlowList& flows, std::optional<int> x, double fund_rate, int valuation_year) {
            int base = flows.empty() ? 0 : flows.front().first - 1;
            return rent_forward_value(to_series(flows, base), x, Rate(fund_rate), valuation_year);
        },
        py::arg("flows"), py::arg("momento_x"), py::arg("fund_rate") = kDefaultFundRate,
        py::arg("valuation_year") = kDefaultValuationYear);

    m.def(
        "impute_exploration",
        [](const MarketSeries& market, const std::vector<MineDataset>& cohort, double r) {
            const auto imp = impute_exploration(market, cohort, Rate(r));
            py::dict d;
            for (const auto& [id, e] : imp.per_mine) d[py::str(id)] = e.capitalized;
            return d;
        },
        py::arg("market"), py::arg("cohort"), py::arg("rate"));

    m.def(
        "analyze",
        [](const std::vector<MineDataset>& mines, const MarketSeries& market, std::map<std::string, double> rates,
           int valuation_year) {
            std::vector<LabeledRate> labeled;
            if (rates.empty()) {
                labeled = {{"base", discount_rate(DiscountSpec::base())},
                           {"conservative", discount_rate(DiscountSpec::conservative())}};
            }
            for (const auto& [label, r] : rates) labeled.push_back({label, Rate(r)});
            AnalysisOptions opts;
            opts.valuation_year = valuation_year;
            const auto report = sensitivity_report(mines, market, labeled, opts);
            py::dict out;
            for (const auto& row : report.rows) {
                py::dict per_rate;
                for (const auto& r : row.by_rate) {
                    py::dict d = series_dict(r.series);
                    d["exploration"] = r.investment.exploration;
                    per_rate[py::str(r.rate_label)] = d;
                }
                out[py::str(row.mine_id)] = per_rate;
            }
            return out;
        },
        py::arg("mines"), py::arg("market"), py::arg("rates") = std::map<std::string, double>{},
        py::arg("valuation_year") = kDefaultValuationYear);

    m.def(
        "equilibrium_bid",
        [](double investment, double cost_of_capital, const std::vector<double>& revenue,
           double announced_rate) -> std::optional<py::dict> {
            Bidder b;
            b.bidder_id = "bidder";
            b.investment = investment;
            b.cost_of_capital = Rate(cost_of_capital);
            for (std::size_t k = 0; k < revenue.size(); ++k) {
                b.expected_revenue_path.flows.push_back({static_cast<int>(k + 1), revenue[k]});
            }
            const auto bid = equilibrium_bid(b, Rate(announced_rate));
            if (!bid) return std::nullopt;
            py::dict d;
            d["vpi"] = bid->vpi;
            d["stopping_period"] = bid->stopping_period;
            d["bidder_pv_at_stop"] = bid->bidder_pv_at_stop;
            return d;
        },
        py::arg("investment"), py::arg("cost_of_capital"), py::arg("revenue"), py::arg("announced_rate"));

    m.def(
        "run_auction",
        [](const std::vector<std::pair<std::string, double>>& bids) {
            std::vector<SealedBid> sealed;
            for (const auto& [id, vpi] : bids) sealed.push_back({id, vpi});
            const auto r = run_auction(sealed);
            return py::make_tuple(r.winner, r.vpi);
        },
        py::arg("bids"));

    py::class_<Indemnity>(m, "Indemnity")
        .def_readonly("at_start", &Indemnity::at_start)
        .def_readonly("at_expropriation", &Indemnity::at_expropriation);

    py::class_<ConcessionState>(m, "ConcessionState")
        .def(py::init([](double vpi, double rate) { return ConcessionState::start(vpi, Rate(rate)); }), py::arg("vpi"),
             py::arg("announced_rate"))
        .def_readonly("vpi_target", &ConcessionState::vpi_target)
        .def_readonly("current_year", &ConcessionState::current_year)
        .def_readonly("accrued_pv", &ConcessionState::accrued_pv)
        .def_property_readonly("status", [](const ConcessionState& s) { return std::string(to_string(s.status)); })
        .def("step", &step_concession, py::arg("gross_revenue"), py::arg("voluntary_tax") = 0.0)
        .def("expropriate", &expropriate)
        .def("indemnity", &expropriation_indemnity);

    m.def(
        "generate_price_path",
        [](double initial_price, double drift, double volatility, int horizon, std::uint64_t seed) {
            return generate_price_path({initial_price, drift, volatility, horizon, seed});
        },
        py::arg("initial_price"), py::arg("drift"), py::arg("volatility"), py::arg("horizon"), py::arg("seed"));

    m.def(
        "simulate_concession",
        [](double vpi, const std::vector<double>& prices, double quantity, double rate, std::optional<double> tax_fixed,
           std::optional<double> tax_fraction, std::optional<std::vector<double>> tax_schedule) {
            const auto out =
                simulate_concession(vpi, prices, quantity, Rate(rate), make_tax(tax_fixed, tax_fraction, tax_schedule));
            py::dict d;
            d["duration"] = out.duration;
            d["status"] = std::string(to_string(out.final_state.status));
            d["accrued_pv"] = out.final_state.accrued_pv;
            d["state"] = out.final_state;
            d["warnings"] = out.warnings;
            return d;
        },
        py::arg("vpi"), py::arg("prices"), py::arg("quantity_t"), py::arg("announced_rate"),
        py::arg("tax_fixed") = py::none(), py::arg("tax_fraction") = py::none(), py::arg("tax_schedule") = py::none());

    m.def(
        "run_cli",
        [](const std::string& command, const std::filesystem::path& out_dir, std::optional<std::filesystem::path> mines,
           std::optional<std::filesystem::path> market, std::optional<std::filesystem::path> scenario,
           std::optional<std::uint64_t> seed) {
            RunConfig c;
            c.command = command;
            c.out_dir = out_dir;
            if (mines) c.mines_dir = *mines;
            if (market) c.market_file = *market;
            if (scenario) c.scenario_file = *scenario;
            c.seed = seed;
            c.emit_json = true;
            std::ostringstream err;
            const int code = run_command(c, err);
            return py::make_tuple(code, err.str());
        },
        py::arg("command"), py::arg("out_dir"), py::arg("mines") = py::none(), py::arg("market") = py::none(),
        py::arg("scenario") = py::none(), py::arg("seed") = py::none());
}
