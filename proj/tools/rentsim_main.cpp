// rentsim: resource-rent analysis and least-present-value-of-revenue
// concession simulation from the command line.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rentsim/cli.hpp"
#include "rentsim/errors.hpp"

namespace {

struct CustomSpec {
    std::optional<double> rf, beta, erp, country;

    bool any() const { return rf || beta || erp || country; }
};

void add_rate_options(CLI::App* cmd, std::vector<std::string>& presets, CustomSpec& custom,
                      std::vector<double>& literal) {
    cmd->add_option("--rate", presets, "Discount preset: base or conservative (repeatable)")
        ->check(CLI::IsMember({"base", "conservative"}));
    cmd->add_option("--rf", custom.rf, "Custom spec: risk-free rate");
    cmd->add_option("--beta", custom.beta, "Custom spec: equity beta");
    cmd->add_option("--erp", custom.erp, "Custom spec: equity risk premium");
    cmd->add_option("--country", custom.country, "Custom spec: country risk premium");
    cmd->add_option("--discount", literal, "Literal discount rate, e.g. 0.1236 (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resource-rent analysis and concession simulator"};
    app.set_version_flag("--version", rentsim::kVersion);
    app.require_subcommand(1);

    rentsim::RunConfig config;
    for (int i = 0; i < argc; ++i) config.argv.emplace_back(argv[i]);

    std::string mines, market, scenario, out, formats = "table";
    std::vector<std::string> presets;
    std::vector<double> literal;
    CustomSpec custom;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;

    auto* analyze = app.add_subcommand("analyze", "Present-value rent trajectories and summary table");
    auto* reconstruct = app.add_subcommand("reconstruct", "Backfill pre-statement years and write the audit log");
    auto* simulate = app.add_subcommand("simulate-concession", "Run a least-present-value-of-revenue concession");
    auto* auction = app.add_subcommand("auction", "Equilibrium bids and sealed-bid auction");

    for (auto* cmd : {analyze, reconstruct}) {
        cmd->add_option("--mines", mines, "Directory of mine CSV files")->required();
        cmd->add_option("--market", market, "Market series CSV")->required();
        cmd->add_option("--out", out, "Output directory")->required();
    }
    add_rate_options(analyze, presets, custom, literal);
    analyze->add_option("--valuation-year", config.valuation_year, "Year rent is compounded to");
    analyze->add_option("--format", formats, "Comma-separated subset of table,json");

    for (auto* cmd : {simulate, auction}) {
        cmd->add_option("--scenario", scenario, "Scenario JSON file")->required();
        cmd->add_option("--out", out, "Output directory")->required();
    }
    simulate->add_option("--seed", seed, "Override the scenario's price-path seed");
    simulate->add_option("--replications", replications, "Override the Monte Carlo replication count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : rentsim::kExitValidation;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.mines_dir = mines;
    config.market_file = market;
    config.scenario_file = scenario;
    config.out_dir = out;
    config.seed = seed;
    config.replications = replications;

    config.emit_table = config.emit_json = false;
    std::stringstream fs(formats);
    std::string token;
    while (std::getline(fs, token, ',')) {
        if (token == "table") {
            config.emit_table = true;
        } else if (token == "json") {
            config.emit_json = true;
        } else {
            std::cerr << "unknown format '" << token << "' (expected table or json)\n";
            return rentsim::kExitValidation;
        }
    }

    try {
        for (const auto& p : presets) {
            const auto spec = p == "base" ? rentsim::DiscountSpec::base() : rentsim::DiscountSpec::conservative();
            config.rates.push_back({spec.label, rentsim::discount_rate(spec)});
        }
        if (custom.any()) {
            rentsim::DiscountSpec spec{custom.rf.value_or(0.0), custom.beta.value_or(0.0), custom.erp.value_or(0.0),
                                       custom.country.value_or(0.0), "custom"};
            config.rates.push_back({spec.label, rentsim::discount_rate(spec)});
        }
        for (double r : literal) {
            std::ostringstream label;
            label << "r" << r;
            config.rates.push_back({label.str(), rentsim::Rate(r)});
        }
    } catch (const rentsim::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rentsim::kExitValidation;
    }

    return rentsim::run_command(config, std::cerr);
}
