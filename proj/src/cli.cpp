#include "rentsim/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rentsim/errors.hpp"

namespace rentsim {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<LabeledRate> effective_rates(const RunConfig& config) {
    if (!config.rates.empty()) return config.rates;
    return {{"base", discount_rate(DiscountSpec::base())},
            {"conservative", discount_rate(DiscountSpec::conservative())}};
}

void ensure_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Artifacts are rendered in memory and written once, so a file is either
// complete or absent.
void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream ss;
    fn(ss);
    return ss.str();
}

json manifest_base(const RunConfig& config) {
    json m;
    m["tool"] = "rentsim";
    m["version"] = kVersion;
    m["command"] = config.command;
    m["argv"] = config.argv;
    m["inputs"] = json::object();
    m["parameters"] = json::object();
    m["seed"] = nullptr;
    return m;
}

void require_exists(const std::filesystem::path& p, const char* what) {
    std::error_code ec;
    if (p.empty() || !std::filesystem::exists(p, ec)) {
        throw IoError(std::string(what) + " not found: " + (p.empty() ? "<unset>" : p.string()));
    }
}

struct LoadedInputs {
    std::vector<MineDataset> mines;
    MarketSeries market;
};

// Returns nullopt (after reporting) when validation fails.
std::optional<LoadedInputs> load_and_validate(const RunConfig& config, std::ostream& err) {
    require_exists(config.mines_dir, "mine directory");
    require_exists(config.market_file, "market file");
    LoadedInputs in;
    in.mines = load_mine_directory(config.mines_dir);
    in.market = load_market_series(config.market_file);
    if (in.mines.empty()) {
        err << "no mine datasets found in " << config.mines_dir.string() << '\n';
        return std::nullopt;
    }
    bool ok = true;
    for (const auto& mine : in.mines) {
        for (const auto& w : mine.load_warnings) err << "warning mine:" << mine.mine_id << ": " << w << '\n';
        ValidationReport report = validate_dataset(mine, in.market);
        err << report;
        ok = ok && report.ok();
    }
    if (!ok) return std::nullopt;
    return in;
}

std::string audit_text(const AuditLog& audit) {
    std::string text = "mine_id,year,field,rule,inputs,output\n";
    for (const auto& e : audit) text += format_audit_line(e) + '\n';
    return text;
}

// Location-aware accessors for scenario documents.
const json& field(const json& obj, const std::string& key, const std::string& where, const std::string& file) {
    if (!obj.is_object() || !obj.contains(key)) throw ParseError(file, 0, "missing key '" + key + "' at " + where);
    return obj.at(key);
}

double number_at(const json& obj, const std::string& key, const std::string& where, const std::string& file) {
    const json& v = field(obj, key, where, file);
    if (!v.is_number()) throw ParseError(file, 0, "expected number at " + where + "/" + key);
    return v.get<double>();
}

std::vector<double> numbers_at(const json& v, const std::string& where, const std::string& file) {
    if (!v.is_array()) throw ParseError(file, 0, "expected array at " + where);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ParseError(file, 0, "expected number at " + where + "/" + std::to_string(i));
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::vector<SealedBid> equilibrium_bids(const Scenario& s, std::vector<std::optional<EquilibriumBid>>* detail) {
    std::vector<SealedBid> bids;
    for (const auto& b : s.bidders) {
        auto bid = equilibrium_bid(b, s.announced_rate);
        if (detail) detail->push_back(bid);
        if (bid) bids.push_back({b.bidder_id, bid->vpi});
    }
    return bids;
}

Scenario scenario_from_json(std::istream& in, const std::string& file) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(file, 0, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError(file, 0, "scenario root must be an object");

    Scenario s;
    try {
        s.announced_rate = Rate(number_at(doc, "announced_rate", "", file));
    } catch (const InvalidArgument& e) {
        throw ParseError(file, 0, std::string("/announced_rate: ") + e.what());
    }
    if (doc.contains("vpi")) s.vpi = number_at(doc, "vpi", "", file);
    if (doc.contains("quantity_t")) s.quantity_t = number_at(doc, "quantity_t", "", file);
    if (doc.contains("replications")) s.replications = static_cast<int>(number_at(doc, "replications", "", file));

    if (doc.contains("price_path")) {
        const json& pp = doc.at("price_path");
        if (pp.contains("explicit")) {
            s.explicit_prices = numbers_at(pp.at("explicit"), "/price_path/explicit", file);
        } else {
            PricePathParams p;
            p.initial_price = number_at(pp, "initial_price", "/price_path", file);
            p.drift = pp.contains("drift") ? number_at(pp, "drift", "/price_path", file) : 0.0;
            p.volatility = pp.contains("volatility") ? number_at(pp, "volatility", "/price_path", file) : 0.0;
            p.horizon = static_cast<int>(number_at(pp, "horizon", "/price_path", file));
            p.seed = pp.contains("seed") ? static_cast<std::uint64_t>(number_at(pp, "seed", "/price_path", file)) : 0;
            s.price_params = p;
        }
    }

    if (doc.contains("tax_policy")) {
        const json& tp = doc.at("tax_policy");
        const std::string kind = field(tp, "kind", "/tax_policy", file).get<std::string>();
        if (kind == "none") {
            s.tax_policy.kind = TaxPolicy::Kind::none;
        } else if (kind == "fixed") {
            s.tax_policy.kind = TaxPolicy::Kind::fixed;
            s.tax_policy.amount = number_at(tp, "amount", "/tax_policy", file);
        } else if (kind == "fraction") {
            s.tax_policy.kind = TaxPolicy::Kind::fraction;
            s.tax_policy.amount = number_at(tp, "amount", "/tax_policy", file);
        } else if (kind == "schedule") {
            s.tax_policy.kind = TaxPolicy::Kind::schedule;
            s.tax_policy.schedule = numbers_at(field(tp, "schedule", "/tax_policy", file), "/tax_policy/schedule", file);
        } else {
            throw ParseError(file, 0, "unknown tax_policy kind '" + kind + "' at /tax_policy/kind");
        }
    }

    if (doc.contains("bidders")) {
        const json& arr = doc.at("bidders");
        if (!arr.is_array()) throw ParseError(file, 0, "expected array at /bidders");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "/bidders/" + std::to_string(i);
            const json& b = arr[i];
            Bidder bidder;
            bidder.bidder_id = field(b, "id", where, file).get<std::string>();
            bidder.investment = number_at(b, "investment", where, file);
            try {
                bidder.cost_of_capital = Rate(number_at(b, "cost_of_capital", where, file));
            } catch (const InvalidArgument& e) {
                throw ParseError(file, 0, where + "/cost_of_capital: " + e.what());
            }
            if (b.contains("reported_operating_cost")) {
                bidder.reported_operating_cost = number_at(b, "reported_operating_cost", where, file);
            }
            const auto revenue = numbers_at(field(b, "revenue", where, file), where + "/revenue", file);
            bidder.expected_revenue_path.base_year = 0;
            for (std::size_t t = 0; t < revenue.size(); ++t) {
                bidder.expected_revenue_path.flows.push_back({static_cast<int>(t) + 1, revenue[t]});
            }
            s.bidders.push_back(std::move(bidder));
        }
    }

    if (!s.vpi && s.bidders.empty()) throw ParseError(file, 0, "scenario needs either 'vpi' or 'bidders'");
    return s;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& file) {
    try {
        return scenario_from_json(in, file);
    } catch (const json::exception& e) {
        throw ParseError(file, 0, std::string("malformed scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    return parse_scenario(in, path.string());
}

int cmd_analyze(const RunConfig& config, std::ostream& err) {
    auto inputs = load_and_validate(config, err);
    if (!inputs) return kExitValidation;

    const auto rates = effective_rates(config);
    AnalysisOptions options;
    options.valuation_year = config.valuation_year;
    const SensitivityReport report = sensitivity_report(inputs->mines, inputs->market, rates, options);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';

    ensure_out_dir(config.out_dir);
    for (const auto& row : report.rows) {
        for (const auto& r : row.by_rate) {
            write_file(config.out_dir / (row.mine_id + "_rvp_" + r.rate_label + ".csv"),
                       render([&](std::ostream& o) { write_rvp_plot_data(o, r.series); }));
        }
    }
    if (config.emit_table) {
        write_file(config.out_dir / "summary_cuadro1.csv", render([&](std::ostream& o) { write_summary_csv(o, report); }));
    }
    if (config.emit_json) {
        write_file(config.out_dir / "summary_cuadro1.json", render([&](std::ostream& o) { write_summary_json(o, report); }));
    }
    write_file(config.out_dir / "reconstruction_audit.csv", audit_text(report.audit));

    json manifest = manifest_base(config);
    manifest["inputs"]["mines_dir"] = config.mines_dir.string();
    manifest["inputs"]["market_file"] = config.market_file.string();
    json mines = json::array();
    for (const auto& m : inputs->mines) mines.push_back(m.mine_id);
    manifest["inputs"]["mines"] = mines;
    json rate_list = json::array();
    for (const auto& r : rates) rate_list.push_back({{"label", r.label}, {"value", r.rate.value()}});
    manifest["parameters"]["rates"] = rate_list;
    manifest["parameters"]["valuation_year"] = config.valuation_year;
    manifest["parameters"]["fund_rate"] = inputs->market.fund_rate;
    write_file(config.out_dir / "run_manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
}

int cmd_reconstruct(const RunConfig& config, std::ostream& err) {
    auto inputs = load_and_validate(config, err);
    if (!inputs) return kExitValidation;
    ensure_out_dir(config.out_dir);
    AuditLog audit;
    for (const auto& mine : inputs->mines) {
        const MineDataset rebuilt = reconstruct_mine(mine, inputs->market, {}, &audit);
        write_file(config.out_dir / (mine.mine_id + "_reconstructed.csv"),
                   render([&](std::ostream& o) { write_mine_dataset(o, rebuilt); }));
    }
    write_file(config.out_dir / "reconstruction_audit.csv", audit_text(audit));
    json manifest = manifest_base(config);
    manifest["inputs"]["mines_dir"] = config.mines_dir.string();
    manifest["inputs"]["market_file"] = config.market_file.string();
    write_file(config.out_dir / "run_manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
}

int cmd_simulate_concession(const RunConfig& config, std::ostream& err) {
    require_exists(config.scenario_file, "scenario file");
    const Scenario s = load_scenario(config.scenario_file);

    Money vpi = 0.0;
    std::string winner;
    if (s.vpi) {
        vpi = *s.vpi;
    } else {
        const auto bids = equilibrium_bids(s, nullptr);
        const AuctionResult result = run_auction(bids);
        vpi = result.vpi;
        winner = result.winner;
    }

    std::optional<PricePathParams> params = s.price_params;
    if (params && config.seed) params->seed = *config.seed;
    std::vector<double> path;
    if (s.explicit_prices) {
        path = *s.explicit_prices;
    } else if (params) {
        path = generate_price_path(*params);
    } else {
        throw ParseError(config.scenario_file.string(), 0, "scenario needs a 'price_path'");
    }

    const ConcessionOutcome outcome = simulate_concession(vpi, path, s.quantity_t, s.announced_rate, s.tax_policy);
    for (const auto& w : outcome.warnings) err << "warning: " << w << '\n';

    ensure_out_dir(config.out_dir);
    write_file(config.out_dir / "concession_outcome.csv", render([&](std::ostream& o) { write_outcome_csv(o, outcome); }));

    json summary;
    summary["vpi"] = vpi;
    summary["winner"] = winner.empty() ? json(nullptr) : json(winner);
    summary["announced_rate"] = s.announced_rate.value();
    summary["status"] = to_string(outcome.final_state.status);
    summary["duration"] = outcome.duration ? json(*outcome.duration) : json(nullptr);
    summary["accrued_pv"] = outcome.final_state.accrued_pv;
    summary["periods_simulated"] = outcome.final_state.current_year;
    if (s.tax_policy.kind != TaxPolicy::Kind::none) {
        const auto untaxed = simulate_concession(vpi, path, s.quantity_t, s.announced_rate, {});
        summary["duration_without_tax"] = untaxed.duration ? json(*untaxed.duration) : json(nullptr);
    }
    const Indemnity indemnity = expropriation_indemnity(outcome.final_state);
    summary["indemnity_if_expropriated_now"] = {{"at_start", indemnity.at_start},
                                                {"at_expropriation", indemnity.at_expropriation}};
    summary["warnings"] = outcome.warnings;

    const int replications = config.replications.value_or(s.replications);
    if (replications > 0) {
        if (!params) throw ParseError(config.scenario_file.string(), 0, "replications need stochastic price_path parameters");
        const auto reps = monte_carlo_durations(vpi, *params, s.quantity_t, s.announced_rate, s.tax_policy, replications);
        std::string text = "replication,seed,duration\n";
        int unterminated = 0;
        for (const auto& r : reps) {
            text += std::to_string(r.index) + ',' + std::to_string(r.seed) + ',' +
                    (r.duration ? std::to_string(*r.duration) : std::string("-")) + '\n';
            if (!r.duration) ++unterminated;
        }
        write_file(config.out_dir / "concession_durations.csv", text);
        summary["replications"] = replications;
        summary["replications_unterminated"] = unterminated;
    }
    write_file(config.out_dir / "concession_summary.json", summary.dump(2) + "\n");

    json manifest = manifest_base(config);
    manifest["inputs"]["scenario_file"] = config.scenario_file.string();
    manifest["parameters"]["vpi"] = vpi;
    manifest["parameters"]["announced_rate"] = s.announced_rate.value();
    manifest["parameters"]["quantity_t"] = s.quantity_t;
    manifest["parameters"]["replications"] = replications;
    manifest["seed"] = params ? json(params->seed) : json(nullptr);
    write_file(config.out_dir / "run_manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
}

int cmd_auction(const RunConfig& config, std::ostream& err) {
    require_exists(config.scenario_file, "scenario file");
    const Scenario s = load_scenario(config.scenario_file);
    if (s.bidders.empty()) throw ParseError(config.scenario_file.string(), 0, "auction needs 'bidders'");

    std::vector<std::optional<EquilibriumBid>> detail;
    const auto bids = equilibrium_bids(s, &detail);
    std::optional<AuctionResult> result;
    if (bids.empty()) {
        err << "auction failed: no bidder can recover its investment\n";
    } else {
        result = run_auction(bids);
    }

    std::string text = "bidder_id,investment,cost_of_capital,bid_vpi,stopping_period,winner\n";
    for (std::size_t i = 0; i < s.bidders.size(); ++i) {
        const auto& b = s.bidders[i];
        text += b.bidder_id + ',' + num(b.investment) + ',' + num(b.cost_of_capital.value()) + ',';
        if (detail[i]) {
            text += num(detail[i]->vpi) + ',' + std::to_string(detail[i]->stopping_period);
        } else {
            text += "no-bid,-";
        }
        text += ',' + std::string(result && result->winner == b.bidder_id ? "yes" : "no") + '\n';
    }
    ensure_out_dir(config.out_dir);
    write_file(config.out_dir / "auction_result.csv", text);
    json manifest = manifest_base(config);
    manifest["inputs"]["scenario_file"] = config.scenario_file.string();
    manifest["parameters"]["announced_rate"] = s.announced_rate.value();
    write_file(config.out_dir / "run_manifest.json", manifest.dump(2) + "\n");
    return result ? kExitOk : kExitValidation;
}

int run_command(const RunConfig& config, std::ostream& err) {
    try {
        if (config.command == "analyze") return cmd_analyze(config, err);
        if (config.command == "reconstruct") return cmd_reconstruct(config, err);
        if (config.command == "simulate-concession") return cmd_simulate_concession(config, err);
        if (config.command == "auction") return cmd_auction(config, err);
        err << "unknown command '" << config.command << "'\n";
        return kExitValidation;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace rentsim
