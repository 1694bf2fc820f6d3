#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rentsim/concession.hpp"
#include "rentsim/rent_analysis.hpp"

namespace rentsim {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

struct RunConfig {
    std::string command;  ///< analyze | reconstruct | simulate-concession | auction
    std::filesystem::path mines_dir;
    std::filesystem::path market_file;
    std::filesystem::path scenario_file;
    std::filesystem::path out_dir;
    std::vector<LabeledRate> rates;  ///< empty -> base and conservative presets
    int valuation_year = kDefaultValuationYear;
    bool emit_table = true;
    bool emit_json = false;
    std::optional<std::uint64_t> seed;      ///< overrides the scenario seed
    std::optional<int> replications;        ///< overrides the scenario count
    /// Original argument vector, recorded in the manifest.
    std::vector<std::string> argv;
};

/// Parsed concession scenario (JSON document).
struct Scenario {
    Rate announced_rate;
    std::optional<Money> vpi;
    std::vector<Bidder> bidders;
    double quantity_t = 0.0;
    std::optional<std::vector<double>> explicit_prices;
    std::optional<PricePathParams> price_params;
    TaxPolicy tax_policy;
    int replications = 0;
};

/// Throws ParseError naming the offending JSON location.
Scenario parse_scenario(std::istream& in, const std::string& source_name);
Scenario load_scenario(const std::filesystem::path& path);

/// Each command writes its artifacts under config.out_dir and returns an ExitCode.
/// Diagnostics go to `err`.
int cmd_analyze(const RunConfig& config, std::ostream& err);
int cmd_reconstruct(const RunConfig& config, std::ostream& err);
int cmd_simulate_concession(const RunConfig& config, std::ostream& err);
int cmd_auction(const RunConfig& config, std::ostream& err);

int run_command(const RunConfig& config, std::ostream& err);

}  // namespace rentsim
